#pragma once

#include "multiroot/types.hpp"

namespace multiroot {

/// A square nonlinear map F: R^n -> R^n with a dense Jacobian.
///
/// Implementations must be pure in `a`; solvers may evaluate them from
/// several threads at once.
class NonlinearSystem {
public:
    virtual ~NonlinearSystem() = default;

    virtual Eigen::Index size() const = 0;
    virtual Vector residual(const Vector& a) const = 0;
    virtual Matrix jacobian(const Vector& a) const = 0;
};

} // namespace multiroot
