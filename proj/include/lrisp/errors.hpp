#pragma once

#include <stdexcept>
#include <string>

namespace lrisp {

/// Input outside the mathematical domain of an operation (origin in bare
/// mode, d < 3, non-increasing orders, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Query outside a localized oracle's cap.
class OutOfDomainError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Quadrature did not reach its tolerance, or a tail fit failed.
class QuadratureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Least-squares design too ill-conditioned to separate exponents.
class ConditioningError : public std::runtime_error {
public:
  ConditioningError(const std::string& what, double cond)
      : std::runtime_error(what), condition_number(cond) {}
  double condition_number;
};

/// Data whose leading decay is not that of a long-range component.
class ModelClassError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Radon inversion did not converge under band doubling, or a sinogram
/// was truncated with a non-negligible edge and no tail model.
class InversionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration document.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace lrisp
