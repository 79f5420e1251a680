#pragma once

#include <stdexcept>
#include <string>

namespace singmod {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An input violates the documented precondition of an operation.
class domain_error : public error {
  public:
    using error::error;
};

/// Finite p-adic precision cannot decide the requested quantity.
class precision_exhausted : public error {
  public:
    using error::error;
};

/// Numerical evaluation did not certify an exact integer result.
class precision_failure : public error {
  public:
    using error::error;
};

/// A configured resource cap (discriminant size, sieve bound, ...) was hit.
class resource_error : public error {
  public:
    using error::error;
};

/// An interval computation cannot decide the requested comparison.
class inconclusive : public error {
  public:
    using error::error;
};

/// A bounded search ran past its cap without finding a witness.
class search_exhausted : public error {
  public:
    using error::error;
};

/// Hensel's lemma does not apply at the given approximation.
class non_smooth_point : public error {
  public:
    using error::error;
};

/// A table or cache file failed validation.
class validation_error : public error {
  public:
    validation_error(std::string invariant, std::string const & what)
        : error(invariant + ": " + what), invariant_(std::move(invariant)) {}

    std::string const & invariant() const { return invariant_; }

  private:
    std::string invariant_;
};

}  // namespace singmod
