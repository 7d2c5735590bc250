#pragma once

#include <stdexcept>
#include <string>

namespace tfg {

/// Source position used in diagnostics. Lines and columns are 1-based.
struct SourceLocation {
  std::string file;
  int line = 0;
  int column = 0;

  std::string str() const;
};

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text: signature, clause, or control file.
class ParseError : public Error {
public:
  ParseError(SourceLocation where, const std::string& message);

  const SourceLocation& where() const noexcept { return where_; }
  const std::string& message() const noexcept { return message_; }

private:
  SourceLocation where_;
  std::string message_;
};

/// Structurally invalid signature (cycle, meet-closure, feature introduction).
class SignatureError : public Error {
public:
  using Error::Error;
};

/// Clause or grammar contradicts the signature or itself.
class GrammarError : public Error {
public:
  using Error::Error;
};

/// Raised when a configured cap (edges, steps, depth) is exceeded.
class ResourceLimitError : public Error {
public:
  enum class Kind { edges, steps, depth };

  ResourceLimitError(Kind kind, std::size_t limit);

  Kind kind() const noexcept { return kind_; }
  std::size_t limit() const noexcept { return limit_; }

private:
  Kind kind_;
  std::size_t limit_;
};

}  // namespace tfg
