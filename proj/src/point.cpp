#include "geomkit/point.hpp"

#include <cmath>
#include <limits>

namespace geomkit {

ExtendedPoint ExtendedPoint::finite(Eigen::VectorXd coords) {
    if (coords.size() < 1)
        throw std::invalid_argument("ExtendedPoint: empty coordinate vector");
    if (!coords.allFinite())
        throw std::invalid_argument("ExtendedPoint: coordinates must be finite");
    return ExtendedPoint(std::move(coords));
}

const Eigen::VectorXd& ExtendedPoint::coords() const {
    if (infinite_) throw GeomError("ExtendedPoint: ∞ has no coordinates");
    return coords_;
}

Eigen::MatrixXd lorentz_j(int dim) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Identity(dim, dim);
    j(dim - 1, dim - 1) = -1.0;
    return j;
}

double lorentz_q(const Eigen::VectorXd& v) {
    const int m = static_cast<int>(v.size());
    double q = -v[m - 1] * v[m - 1];
    for (int i = 0; i < m - 1; ++i) q += v[i] * v[i];
    return q;
}

double lorentz_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const int m = static_cast<int>(a.size());
    double s = -a[m - 1] * b[m - 1];
    for (int i = 0; i < m - 1; ++i) s += a[i] * b[i];
    return s;
}

SpherePoint SpherePoint::from_raw(Eigen::VectorXd v, const Tolerances& tol) {
    if (v.size() < 3) throw std::invalid_argument("SpherePoint: need at least 3 coordinates");
    double norm = v.norm();
    if (!(norm > 0) || !v.allFinite())
        throw DegenerateRayError(std::numeric_limits<double>::quiet_NaN());
    v /= norm;
    double q = lorentz_q(v);
    if (std::abs(q) > tol.eps_null) throw DegenerateRayError(std::abs(q));
    if (v[v.size() - 1] < 0) v = -v;
    return SpherePoint(std::move(v));
}

SpherePoint SpherePoint::from_near_null(Eigen::VectorXd v, const Tolerances& tol) {
    if (v.size() < 3) throw std::invalid_argument("SpherePoint: need at least 3 coordinates");
    const int m = static_cast<int>(v.size());
    double spatial = v.head(m - 1).norm();
    if (!(spatial > 0) || !v.allFinite())
        throw DegenerateRayError(std::numeric_limits<double>::quiet_NaN());
    // |t| := |spatial part| makes Q(v) = 0 exactly; the change is O(Q(v)).
    v[m - 1] = v[m - 1] < 0 ? -spatial : spatial;
    return from_raw(std::move(v), tol);
}

SpherePoint lift(const ExtendedPoint& p, AmbientDim n) {
    const int dim = n.lorentz_dim();
    Eigen::VectorXd v(dim);
    if (p.is_infinity()) {
        v.setZero();
        v[dim - 2] = 1.0;
        v[dim - 1] = 1.0;
    } else {
        if (!p.valid_for(n))
            throw DimensionMismatchError("lift: point dimension does not match ambient n");
        const Eigen::VectorXd& x = p.coords();
        double s = x.squaredNorm();
        if (!std::isfinite(s))
            throw std::invalid_argument("lift: |x|^2 overflows");
        v.head(n.value()) = x;
        v[dim - 2] = (s - 1.0) / 2.0;
        v[dim - 1] = (s + 1.0) / 2.0;
    }
    return SpherePoint::from_raw(std::move(v));
}

ExtendedPoint project(const SpherePoint& p, const Tolerances& tol) {
    const Eigen::VectorXd& v = p.vec();
    const int m = static_cast<int>(v.size());
    // Scale factor of the embedding: z - y. Zero exactly on the ∞-ray.
    double mu = v[m - 1] - v[m - 2];
    if (std::abs(mu) <= tol.eps_null) return ExtendedPoint::infinity();
    return ExtendedPoint::finite(v.head(m - 2) / mu);
}

double chordal_distance(const SpherePoint& a, const SpherePoint& b) {
    return (a.vec() - b.vec()).norm();
}

bool same_point(const SpherePoint& a, const SpherePoint& b, const Tolerances& tol) {
    return chordal_distance(a, b) <= tol.eps_member;
}

std::vector<SpherePoint> lift_all(const std::vector<ExtendedPoint>& pts, AmbientDim n) {
    std::vector<SpherePoint> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(lift(p, n));
    return out;
}

std::vector<SpherePoint> dedupe_points(const std::vector<SpherePoint>& pts,
                                       const Tolerances& tol) {
    std::vector<SpherePoint> out;
    for (const auto& p : pts) {
        bool dup = false;
        for (const auto& q : out)
            if (same_point(p, q, tol)) { dup = true; break; }
        if (!dup) out.push_back(p);
    }
    return out;
}

}  // namespace geomkit
