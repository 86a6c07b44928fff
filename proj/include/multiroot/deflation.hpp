#pragma once

#include <vector>

#include "multiroot/system.hpp"

namespace multiroot {

enum class DeflationMode {
    Product,        // eta = prod_i (||a - r_i||^-p + alpha)
    SingleLastRoot, // only the most recently added root deflates
};

/// Multiplicative deflation of known roots, measured in the Euclidean norm
/// of the coefficient vector.
class DeflationSet {
public:
    DeflationSet() = default;
    DeflationSet(std::vector<Vector> roots, double exponent = 2.0, double shift = 1.0,
                 DeflationMode mode = DeflationMode::Product);

    /// Returns a new set with `root` appended.
    DeflationSet with_root(const Vector& root) const;

    const std::vector<Vector>& roots() const { return roots_; }
    double exponent() const { return exponent_; }
    double shift() const { return shift_; }
    DeflationMode mode() const { return mode_; }
    bool empty() const { return roots_.empty(); }

    /// eta(a). Throws AtDeflatedRoot within 1e-14 of a deflated root.
    double factor(const Vector& a) const;

    /// grad eta(a), by logarithmic differentiation of the product.
    Vector gradient_factor(const Vector& a) const;

private:
    // Roots that participate in the factor under the current mode.
    std::vector<const Vector*> active() const;

    std::vector<Vector> roots_;
    double exponent_ = 2.0;
    double shift_ = 1.0;
    DeflationMode mode_ = DeflationMode::Product;
};

/// eta(a) F(a).
Vector deflated_residual(const DeflationSet& defl, const Vector& F, const Vector& a);

/// eta(a) J(a) + F(a) grad eta(a)^T.
Matrix deflated_jacobian(const DeflationSet& defl, const Vector& F, const Matrix& J, const Vector& a);

/// Wraps a base system as F_hat = eta F so it can be handed to any solver.
class DeflatedSystem final : public NonlinearSystem {
public:
    DeflatedSystem(const NonlinearSystem& base, DeflationSet deflation)
        : base_(base), deflation_(std::move(deflation)) {}

    Eigen::Index size() const override { return base_.size(); }
    Vector residual(const Vector& a) const override;
    Matrix jacobian(const Vector& a) const override;

    const DeflationSet& deflation() const { return deflation_; }

private:
    const NonlinearSystem& base_;
    DeflationSet deflation_;
};

} // namespace multiroot
