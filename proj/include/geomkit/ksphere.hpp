#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "geomkit/point.hpp"

namespace geomkit {

/// A k-sphere in S^n, held as a (k+2)-dimensional subspace W of R^{n+1,1} on
/// which the form restricts to signature (k+1, 1). The points of the sphere
/// are exactly the null rays inside W.
///
/// Under the stereographic identification this covers Euclidean k-spheres and
/// k-dimensional affine flats (flats are the spheres through ∞). k = n is the
/// whole of S^n.
class KSphere {
public:
    /// Orthonormalizes the columns of B and validates the restricted
    /// signature. Throws IllConditionedError if an eigenvalue of the
    /// restricted form sits inside the tolerance band around zero.
    static KSphere from_basis(Eigen::MatrixXd basis, const Tolerances& tol = {});

    static KSphere full_sphere(AmbientDim n);

    int dim() const { return k_; }
    int ambient_n() const { return static_cast<int>(basis_.rows()) - 2; }

    /// Euclidean-orthonormal basis of W, (n+2) x (k+2).
    const Eigen::MatrixXd& basis() const { return basis_; }

    /// Cached restricted form, basis^T J basis.
    const Eigen::MatrixXd& gram() const { return gram_; }

private:
    KSphere(int k, Eigen::MatrixXd basis, Eigen::MatrixXd gram)
        : k_(k), basis_(std::move(basis)), gram_(std::move(gram)) {}

    int k_;
    Eigen::MatrixXd basis_;
    Eigen::MatrixXd gram_;
};

/// Smallest sphere containing all the points: the span of their null rays.
/// Throws TooFewPointsError (with the observed rank) when the points do not
/// even span a 0-sphere, i.e. fewer than two distinct points.
KSphere span_points(const std::vector<SpherePoint>& points, const Tolerances& tol = {});

inline int sphere_dim(const KSphere& s) { return s.dim(); }

/// Membership: residual of the point's vector against W is <= eps_member.
bool contains(const KSphere& s, const SpherePoint& p, const Tolerances& tol = {});

/// Equality as subspaces (same column space within tolerance).
bool sphere_equals(const KSphere& a, const KSphere& b, const Tolerances& tol = {});

struct EmptyIntersection {};
struct SinglePointIntersection {
    SpherePoint point;  // tangency or a transversal one-point meet
};

using SphereIntersection =
    std::variant<EmptyIntersection, SinglePointIntersection, KSphere>;

/// Intersects two spheres via the subspace W_a ∩ W_b and classifies by the
/// signature of the restricted form on it:
///   (d+1, 1)            -> a sphere of dimension d,
///   degenerate radical  -> a single point (the null line),
///   positive definite   -> empty.
/// Throws IllConditionedError when the intersection rank is ambiguous.
SphereIntersection intersect_spheres(const KSphere& a, const KSphere& b,
                                     const Tolerances& tol = {});

/// Deterministic-for-seed points on the sphere, pairwise distinct whenever
/// the sphere has that many distinct points (a 0-sphere has only two).
std::vector<SpherePoint> sample_sphere(const KSphere& s, int count, std::uint64_t seed,
                                       const Tolerances& tol = {});

/// Basis of W whose columns are orthonormal under the restricted form:
/// Bf^T J Bf = diag(1,...,1,-1), timelike column last. Null vectors of W are
/// exactly Bf * (a, 1) with |a| = 1, which is how spheres get parametrized
/// and sampled.
Eigen::MatrixXd form_orthonormal_basis(const KSphere& s);

/// Span of the sphere together with extra points.
KSphere extend_span(const KSphere& s, const std::vector<SpherePoint>& extra,
                    const Tolerances& tol = {});

/// Intrinsic coordinates of a point of `s` relative to form_orthonormal_basis:
/// a null (k+2)-vector, canonicalized like a SpherePoint of S^k.
Eigen::VectorXd intrinsic_coordinates(const Eigen::MatrixXd& form_basis,
                                      const SpherePoint& p);

}  // namespace geomkit
