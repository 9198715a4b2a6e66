#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

#include "waveadr/field.hpp"

namespace waveadr {

/// Matrix-free complex linear operator on flat vectors of a fixed size.
/// apply_adjoint and diagonal are optional capabilities; implementations that
/// lack them keep the default throwing behavior.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual std::size_t size() const = 0;

  /// y = A x. x and y must not alias.
  virtual void apply(std::span<const cplx> x, std::span<cplx> y) const = 0;

  /// y = A* x (conjugate transpose).
  virtual void apply_adjoint(std::span<const cplx>, std::span<cplx>) const {
    throw std::logic_error("LinearOperator: adjoint not available for this operator");
  }

  /// d = diag(A).
  virtual void diagonal(std::span<cplx>) const {
    throw std::logic_error("LinearOperator: diagonal not available for this operator");
  }
};

}  // namespace waveadr
