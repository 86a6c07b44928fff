#include "multiroot/deflation.hpp"

#include <cmath>
#include <stdexcept>

#include "multiroot/errors.hpp"

namespace multiroot {

namespace {

constexpr double kMinDistance = 1e-14;

double distance_checked(const Vector& a, const Vector& r)
{
    if (a.size() != r.size()) {
        throw DimensionMismatch("point and deflated root differ in length");
    }
    const double d = (a - r).norm();
    if (!(d >= kMinDistance)) {
        throw AtDeflatedRoot("point lies on a deflated root (distance " + std::to_string(d) + ")");
    }
    return d;
}

} // namespace

DeflationSet::DeflationSet(std::vector<Vector> roots, double exponent, double shift, DeflationMode mode)
    : roots_(std::move(roots)), exponent_(exponent), shift_(shift), mode_(mode)
{
    if (!(exponent_ >= 1.0)) {
        throw std::invalid_argument("deflation exponent must be >= 1");
    }
    if (!(shift_ >= 0.0)) {
        throw std::invalid_argument("deflation shift must be >= 0");
    }
}

DeflationSet DeflationSet::with_root(const Vector& root) const
{
    DeflationSet next = *this;
    next.roots_.push_back(root);
    return next;
}

std::vector<const Vector*> DeflationSet::active() const
{
    std::vector<const Vector*> out;
    if (roots_.empty()) {
        return out;
    }
    if (mode_ == DeflationMode::SingleLastRoot) {
        out.push_back(&roots_.back());
        return out;
    }
    for (const auto& r : roots_) {
        out.push_back(&r);
    }
    return out;
}

double DeflationSet::factor(const Vector& a) const
{
    double eta = 1.0;
    for (const Vector* r : active()) {
        const double d = distance_checked(a, *r);
        eta *= std::pow(d, -exponent_) + shift_;
    }
    return eta;
}

Vector DeflationSet::gradient_factor(const Vector& a) const
{
    Vector log_grad = Vector::Zero(a.size());
    double eta = 1.0;
    for (const Vector* r : active()) {
        const double d = distance_checked(a, *r);
        const double dp = std::pow(d, -exponent_);
        const double term = dp + shift_;
        eta *= term;
        // d/da (d^-p) = -p d^{-p-2} (a - r)
        log_grad += (-exponent_ * dp / (d * d) / term) * (a - *r);
    }
    return eta * log_grad;
}

Vector deflated_residual(const DeflationSet& defl, const Vector& F, const Vector& a)
{
    return defl.factor(a) * F;
}

Matrix deflated_jacobian(const DeflationSet& defl, const Vector& F, const Matrix& J, const Vector& a)
{
    Matrix out = defl.factor(a) * J;
    if (!defl.empty()) {
        out.noalias() += F * defl.gradient_factor(a).transpose();
    }
    return out;
}

Vector DeflatedSystem::residual(const Vector& a) const
{
    return deflated_residual(deflation_, base_.residual(a), a);
}

Matrix DeflatedSystem::jacobian(const Vector& a) const
{
    return deflated_jacobian(deflation_, base_.residual(a), base_.jacobian(a), a);
}

} // namespace multiroot
