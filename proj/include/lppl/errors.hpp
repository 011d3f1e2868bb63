#pragma once

#include <stdexcept>
#include <string>

namespace lppl {

// Every failure mode the library reports. CLI maps these onto exit codes:
// usage-class kinds (InvalidArgument, InvalidDate, IoError) exit 1, the
// rest exit 2.
enum class ErrorKind {
  InvalidArgument,
  InvalidDate,
  IoError,
  MalformedRow,
  NonPositivePrice,
  DuplicateDate,
  EmptySeries,
  SingularAtCritical,
  RankDeficient,
  SideViolation,
  InsufficientData,
  NoValidGridPoint,
  ZeroOscillation,
  InconsistentSpacing,
  NonPositiveGenerated,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, long line = 0);

  ErrorKind kind() const noexcept { return kind_; }
  // 1-based input line for CSV errors, 0 when not applicable.
  long line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  long line_;
};

}  // namespace lppl
