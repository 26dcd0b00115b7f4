#pragma once

#include <stdexcept>
#include <string>

namespace nerlink {

/// Missing or unusable configuration input (files, flags, environment).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed line in a data file. Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

/// Structurally valid input that violates a cross-record constraint.
class IntegrityError : public std::runtime_error {
public:
  explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Caller handed inconsistent in-memory inputs (e.g. parse leaves vs tokens).
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Discourse turns applied out of order.
class SequencingError : public std::runtime_error {
public:
  explicit SequencingError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Remote knowledge-graph call failed (network, timeout, HTTP status).
class BackendError : public std::runtime_error {
public:
  BackendError(const std::string& msg, bool retryable)
      : std::runtime_error(msg), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

private:
  bool retryable_;
};

/// Remote returned bytes we could not interpret as a result list.
class ProtocolError : public std::runtime_error {
public:
  explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nerlink
