#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

/// Shape mismatch: wrong matrix dimensions, bad tensor factorization.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Violated mathematical invariant: non-Hermitian state, trace off one,
/// negative eigenvalue, non-unitary basis, non-CP channel.
class ValidityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent campaign or CLI configuration.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A rejection sampler exceeded its retry budget.
class SamplerError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qcorr
