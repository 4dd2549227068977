#pragma once

#include <stdexcept>
#include <string>

namespace tlsub {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NotAProjection : public Error {
  public:
    explicit NotAProjection(const std::string &what) : Error("NotAProjection: " + what) {}
};

class NotTemperleyLieb : public Error {
  public:
    explicit NotTemperleyLieb(const std::string &what) : Error("NotTemperleyLieb: " + what) {}
};

class BadCoefficients : public Error {
  public:
    explicit BadCoefficients(const std::string &what) : Error("BadCoefficients: " + what) {}
};

class TauUndefined : public Error {
  public:
    explicit TauUndefined(const std::string &what) : Error("TauUndefined: " + what) {}
};

class ProjectionDrift : public Error {
  public:
    explicit ProjectionDrift(const std::string &what) : Error("ProjectionDrift: " + what) {}
};

/// Raised when a requested tower or Fock space exceeds the scalar budget.
class MemoryBudgetExceeded : public Error {
  public:
    explicit MemoryBudgetExceeded(const std::string &what)
        : Error("MemoryBudgetExceeded: " + what) {}
};

class TruncationTooSmall : public Error {
  public:
    explicit TruncationTooSmall(const std::string &what)
        : Error("TruncationTooSmall: " + what) {}
};

class UsageError : public Error {
  public:
    explicit UsageError(const std::string &what) : Error("UsageError: " + what) {}
};

} // namespace tlsub
