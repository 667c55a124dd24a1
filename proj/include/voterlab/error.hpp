#ifndef VOTERLAB_ERROR_HPP
#define VOTERLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace voterlab {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Argument outside the operation's domain (site outside the box, empty class, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

class InvalidSizeError : public DomainError {
  public:
    using DomainError::DomainError;
};

// Operation invoked in a state where it is not defined.
class StateError : public Error {
  public:
    using Error::Error;
};

class RunawayError : public Error {
  public:
    using Error::Error;
};

// Exact oracle asked for a problem above its configured cap.
class SizeCapError : public Error {
  public:
    SizeCapError(const std::string& what, long long cap)
        : Error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}
    long long cap() const noexcept { return cap_; }

  private:
    long long cap_;
};

class NumericError : public Error {
  public:
    NumericError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

// Two routes that must agree did not; indicates a bug, not bad input.
class ConsistencyError : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

template <class Exception = Error>
inline void ensure(bool cond, const std::string& message) {
    if (!cond) throw Exception(message);
}

}  // namespace voterlab

#endif  // VOTERLAB_ERROR_HPP
