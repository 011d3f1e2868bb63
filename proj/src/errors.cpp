#include "lppl/errors.hpp"

namespace lppl {

namespace {

std::string build_message(ErrorKind kind, const std::string& message, long line) {
  std::string out = to_string(kind);
  out += ": ";
  out += message;
  if (line > 0) {
    out += " (line ";
    out += std::to_string(line);
    out += ")";
  }
  return out;
}

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidDate: return "InvalidDate";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::NonPositivePrice: return "NonPositivePrice";
    case ErrorKind::DuplicateDate: return "DuplicateDate";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::SingularAtCritical: return "SingularAtCritical";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::SideViolation: return "SideViolation";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::NoValidGridPoint: return "NoValidGridPoint";
    case ErrorKind::ZeroOscillation: return "ZeroOscillation";
    case ErrorKind::InconsistentSpacing: return "InconsistentSpacing";
    case ErrorKind::NonPositiveGenerated: return "NonPositiveGenerated";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& message, long line)
    : std::runtime_error(build_message(kind, message, line)), kind_(kind), line_(line) {}

}  // namespace lppl
