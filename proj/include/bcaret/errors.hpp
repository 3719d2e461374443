#pragma once

#include <stdexcept>
#include <string>

namespace bcaret {

enum class ErrorCode {
  Syntax,
  UnknownOperator,
  CallArity,
  RetArity,
  BottomRewrite,
  UndefinedLabel,
  UndefinedProc,
  DomainOverflow,
  UnknownAtom,
};

// All recoverable front-end failures funnel through this type; the CLI maps it
// to exit code 3. line/col are 1-based, -1 when the error has no position.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, int line = -1, int col = -1);

  ErrorCode code() const { return code_; }
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  ErrorCode code_;
  int line_;
  int col_;
};

const char* error_code_name(ErrorCode code);

}  // namespace bcaret
