#pragma once

#include <stdexcept>
#include <string>

namespace kerrpol {

// Error taxonomy shared by the whole library. Each condition gets its own type
// so callers can catch selectively; `code()` gives a stable short name used in
// table status columns and mapped onto C API status codes.
enum class ErrorCode {
  truncation,       // Fock cutoff cannot hold the state at the requested tolerance
  domain,           // argument outside an operation's mathematical domain
  division_domain,  // quantity undefined because a denominator vanishes
  parse,            // config text is not syntactically valid
  schema,           // config key set does not match the documented schema
  range,            // config value outside its admissible range
  io,               // file read/write failure
  invariant,        // internal consistency check failed
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct TruncationError : Error {
  explicit TruncationError(const std::string& what) : Error(ErrorCode::truncation, what) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorCode::domain, what) {}
};

struct DivisionDomainError : Error {
  explicit DivisionDomainError(const std::string& what) : Error(ErrorCode::division_domain, what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(ErrorCode::parse, what) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& what) : Error(ErrorCode::schema, what) {}
};

struct RangeError : Error {
  explicit RangeError(const std::string& what) : Error(ErrorCode::range, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

struct InvariantError : Error {
  explicit InvariantError(const std::string& what) : Error(ErrorCode::invariant, what) {}
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::truncation: return "truncation_error";
    case ErrorCode::domain: return "domain_error";
    case ErrorCode::division_domain: return "division_domain";
    case ErrorCode::parse: return "parse_error";
    case ErrorCode::schema: return "schema_error";
    case ErrorCode::range: return "range_error";
    case ErrorCode::io: return "io_error";
    case ErrorCode::invariant: return "invariant_error";
  }
  return "unknown_error";
}

}  // namespace kerrpol
