#include "bcaret/errors.hpp"

namespace bcaret {

namespace {

std::string compose(ErrorCode code, const std::string& message, int line, int col) {
  std::string out = error_code_name(code);
  out += ": ";
  out += message;
  if (line >= 0) {
    out += " (line " + std::to_string(line);
    if (col >= 0) out += ", col " + std::to_string(col);
    out += ")";
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, int line, int col)
    : std::runtime_error(compose(code, message, line, col)), code_(code), line_(line), col_(col) {}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::UnknownOperator: return "UnknownOperator";
    case ErrorCode::CallArity: return "CallArity";
    case ErrorCode::RetArity: return "RetArity";
    case ErrorCode::BottomRewrite: return "BottomRewrite";
    case ErrorCode::UndefinedLabel: return "UndefinedLabel";
    case ErrorCode::UndefinedProc: return "UndefinedProc";
    case ErrorCode::DomainOverflow: return "DomainOverflow";
    case ErrorCode::UnknownAtom: return "UnknownAtom";
  }
  return "Error";
}

}  // namespace bcaret
