#pragma once

#include <stdexcept>
#include <string>

namespace lrdnet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

struct AttemptBudgetExceeded : Error {
  using Error::Error;
};

struct InsufficientTail : Error {
  using Error::Error;
};

struct NoReachablePairs : Error {
  using Error::Error;
};

struct TooLarge : Error {
  using Error::Error;
};

struct InsufficientData : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  using Error::Error;
};

struct TooFewHosts : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

struct ValidationError : Error {
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace lrdnet
