#pragma once

#include <vector>

#include <Eigen/Dense>

#include "geomkit/common.hpp"

namespace geomkit {

/// A point of R^n ∪ {∞}.
class ExtendedPoint {
public:
    static ExtendedPoint infinity() { return ExtendedPoint(); }

    /// All coordinates must be finite reals.
    static ExtendedPoint finite(Eigen::VectorXd coords);

    bool is_infinity() const { return infinite_; }
    bool is_finite() const { return !infinite_; }

    /// Coordinates of a finite point; throws for ∞.
    const Eigen::VectorXd& coords() const;

    /// Coordinate dimension for finite points, -1 for ∞ (valid in any n).
    int dim() const { return infinite_ ? -1 : static_cast<int>(coords_.size()); }

    bool valid_for(AmbientDim n) const { return infinite_ || dim() == n.value(); }

private:
    ExtendedPoint() : infinite_(true) {}
    explicit ExtendedPoint(Eigen::VectorXd c) : infinite_(false), coords_(std::move(c)) {}

    bool infinite_;
    Eigen::VectorXd coords_;
};

/// A point of S^n as a canonical null ray in R^{n+1,1}.
///
/// Coordinate layout: v = (x_1..x_n, y, z) with Q(v) = |x|^2 + y^2 - z^2.
/// Canonical representative: |v| = 1 and z > 0 (for a unit null vector
/// z = 1/sqrt(2) exactly, so the sign is never ambiguous).
///
/// The embedding pairs with ExtendedPoint as
///     finite p  <->  (p, (|p|^2 - 1)/2, (|p|^2 + 1)/2)   up to scale,
///     ∞         <->  (0, ..., 0, 1, 1)                    up to scale.
class SpherePoint {
public:
    /// Normalizes and sign-fixes `v`; rejects vectors off the null cone.
    static SpherePoint from_raw(Eigen::VectorXd v, const Tolerances& tol = {});

    /// Snaps a vector near the cone onto it (rescales the timelike coordinate
    /// so Q = 0 exactly), then canonicalizes. For rays produced by linear
    /// algebra whose null residual is only as small as the rank tolerance.
    static SpherePoint from_near_null(Eigen::VectorXd v, const Tolerances& tol = {});

    const Eigen::VectorXd& vec() const { return v_; }
    int ambient_n() const { return static_cast<int>(v_.size()) - 2; }

private:
    explicit SpherePoint(Eigen::VectorXd v) : v_(std::move(v)) {}
    Eigen::VectorXd v_;
};

/// The form matrix J = diag(1,...,1,-1) of size dim.
Eigen::MatrixXd lorentz_j(int dim);

/// Q(v) for the signature-(n+1,1) form, negative axis last.
double lorentz_q(const Eigen::VectorXd& v);

/// <a,b> under the same form.
double lorentz_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

SpherePoint lift(const ExtendedPoint& p, AmbientDim n);

/// Inverse of lift up to ray scaling; the ∞-ray maps to ExtendedPoint::infinity().
ExtendedPoint project(const SpherePoint& v, const Tolerances& tol = {});

/// Euclidean distance between canonical representatives. A bounded metric on
/// S^n that treats ∞ like any other point.
double chordal_distance(const SpherePoint& a, const SpherePoint& b);

bool same_point(const SpherePoint& a, const SpherePoint& b, const Tolerances& tol = {});

std::vector<SpherePoint> lift_all(const std::vector<ExtendedPoint>& pts, AmbientDim n);

/// Drops points closer than eps_member to an earlier point; preserves order.
std::vector<SpherePoint> dedupe_points(const std::vector<SpherePoint>& pts,
                                       const Tolerances& tol = {});

}  // namespace geomkit
