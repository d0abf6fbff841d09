// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace lensleech {

// Error categories map one-to-one onto C API status codes and CLI exit codes.
enum class ErrorKind {
  Domain,        // invalid argument or precondition
  Parse,         // malformed file contents
  Io,            // filesystem failure
  Unsatisfiable, // pattern search exhausted its budget
  Degenerate,    // numerically degenerate input (constant hues, coincident points)
  Insufficient,  // too few points or matches
  NoMatch,       // no lookup table hit at all
  Sequencing,    // tracker frames out of order
  Internal,      // invariant violation
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

// Parse failures carry the 1-based line and field that broke.
class ParseError : public Error {
public:
  ParseError(int line, int field, const std::string& what)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ", field " +
                                    std::to_string(field) + ": " + what),
        line_(line), field_(field) {}
  int line() const noexcept { return line_; }
  int field() const noexcept { return field_; }

private:
  int line_;
  int field_;
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    case ErrorKind::Unsatisfiable: return "unsatisfiable-or-budget";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Insufficient: return "insufficient";
    case ErrorKind::NoMatch: return "no-match";
    case ErrorKind::Sequencing: return "sequencing";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::Domain, what);
}

} // namespace lensleech
