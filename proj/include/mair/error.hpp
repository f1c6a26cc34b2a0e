#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mair {

// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class EmptyIngestError : public Error {
public:
  using Error::Error;
};

class NotFoundError : public Error {
public:
  using Error::Error;
};

// Malformed input. `line` is 1-based; 0 when unknown.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// A sentence that parsed but violates tree invariants.
class ValidationError : public Error {
public:
  ValidationError(std::string sent_id, const std::string& what)
      : Error("sentence " + sent_id + ": " + what), sent_id_(std::move(sent_id)) {}
  const std::string& sent_id() const noexcept { return sent_id_; }

private:
  std::string sent_id_;
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

} // namespace mair
