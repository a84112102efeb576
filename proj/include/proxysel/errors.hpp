/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#pragma once

#include <stdexcept>
#include <string>

namespace proxysel {

// Process exit codes shared by the library error types and the CLI.
enum class ExitCode : int {
  ok = 0,
  validation = 2,
  computation = 3,
  io = 4,
};

// Base class for all proxysel errors. Carries the exit code the CLI
// terminates with when the error escapes to main().
class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Malformed or inconsistent input: bad shapes, unknown names, bad config.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ExitCode::validation, what) {}
};

// Input was well formed but a quantity is mathematically undefined
// (zero variance, all-tied ranks, empty retained set, ...).
class ComputationError : public Error {
 public:
  explicit ComputationError(const std::string& what) : Error(ExitCode::computation, what) {}
};

// Filesystem or serialization failure.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ExitCode::io, what) {}
};

// Wraps an error raised inside a named pipeline stage so callers can
// report which stage failed while preserving the original exit code.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const Error& cause)
      : Error(cause.code(), stage + ": " + cause.what()), stage_(stage) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace proxysel
