#pragma once

#include <stdexcept>
#include <string>

namespace ahp {

// Exit-code class of a failure. The CLI maps these 1:1 onto process exit codes.
enum class ErrorKind { usage = 1, data = 2, backend = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  virtual const char* code() const noexcept { return "error"; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
  const char* code() const noexcept override { return "usage"; }
};

// Malformed input data: matrices, trees, ballots, session files, configs.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
  const char* code() const noexcept override { return "data"; }
};

class UnsupportedOrder : public DataError {
 public:
  explicit UnsupportedOrder(const std::string& what) : DataError(what) {}
  const char* code() const noexcept override { return "unsupported_order"; }
};

class BackendError : public Error {
 public:
  explicit BackendError(const std::string& what) : Error(ErrorKind::backend, what) {}
  const char* code() const noexcept override { return "backend"; }
};

// Retriable network fault (connection refused, 5xx, 429).
class TransportError : public BackendError {
 public:
  explicit TransportError(const std::string& what) : BackendError(what) {}
  const char* code() const noexcept override { return "transport"; }
};

class ReplayDivergence : public BackendError {
 public:
  explicit ReplayDivergence(const std::string& what) : BackendError(what) {}
  const char* code() const noexcept override { return "replay_divergence"; }
};

class CredentialError : public BackendError {
 public:
  explicit CredentialError(const std::string& what) : BackendError(what) {}
  const char* code() const noexcept override { return "credentials"; }
};

// Raised before sending; the caller has to rotate the conversation.
class ContextBudgetExceeded : public BackendError {
 public:
  explicit ContextBudgetExceeded(const std::string& what) : BackendError(what) {}
  const char* code() const noexcept override { return "context_budget_exceeded"; }
};

class RepairExhausted : public BackendError {
 public:
  explicit RepairExhausted(const std::string& what) : BackendError(what) {}
  const char* code() const noexcept override { return "repair_exhausted"; }
};

}  // namespace ahp
