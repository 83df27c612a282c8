//===- errors.hpp - Error hierarchy for semverdiff -------------*- C++ -*-===//
//
// Every failure the analyzer can report is an exception derived from
// semverdiff::Error. Parse failures carry line/column diagnostics.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace semverdiff {

struct Diagnostic {
  std::string file;
  int line = 0;
  int column = 0;
  std::string message;

  std::string str() const {
    std::string out = file.empty() ? std::string("<input>") : file;
    out += ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
           message;
    return out;
  }
};

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Base for anything raised while turning MVIL text into a model.
class ParseError : public Error {
public:
  ParseError(const std::string &kind, std::vector<Diagnostic> diags)
      : Error(format(kind, diags)), diagnostics_(std::move(diags)) {}

  const std::vector<Diagnostic> &diagnostics() const { return diagnostics_; }

private:
  static std::string format(const std::string &kind,
                            const std::vector<Diagnostic> &diags) {
    std::string msg = kind;
    for (const auto &d : diags)
      msg += "\n  " + d.str();
    return msg;
  }

  std::vector<Diagnostic> diagnostics_;
};

class SyntaxError : public ParseError {
public:
  explicit SyntaxError(std::vector<Diagnostic> diags)
      : ParseError("syntax error", std::move(diags)) {}
};

class SemanticError : public ParseError {
public:
  explicit SemanticError(std::vector<Diagnostic> diags)
      : ParseError("semantic error", std::move(diags)) {}
};

class IOError : public Error {
public:
  using Error::Error;
};

class DuplicateClassError : public Error {
public:
  using Error::Error;
};

class VersionParseError : public Error {
public:
  using Error::Error;
};

class EqualVersionError : public Error {
public:
  using Error::Error;
};

class UnknownApiError : public Error {
public:
  using Error::Error;
};

class NoPathError : public Error {
public:
  using Error::Error;
};

class RecursionLimitError : public Error {
public:
  using Error::Error;
};

class EmptyClusterError : public Error {
public:
  using Error::Error;
};

class ManifestError : public Error {
public:
  using Error::Error;
};

} // namespace semverdiff
