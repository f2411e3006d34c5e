#pragma once

#include "geomkit/general_position.hpp"
#include "geomkit/map_oracle.hpp"
#include "geomkit/rng.hpp"

namespace geomkit {

/// Finite point with independent normal coordinates (scale * N(0,1)).
ExtendedPoint random_finite_point(Rng& rng, AmbientDim n, double scale = 2.0);

/// Uniform point of S^n: a unit vector of R^{n+1} made into a null ray.
SpherePoint random_sphere_point(Rng& rng, AmbientDim n);

/// Span of k+2 uniform points; retries until the span is a clean k-sphere.
KSphere random_k_sphere(Rng& rng, AmbientDim n, int k, const Tolerances& tol = {});

/// Composition of `factors` random inversions and reflections with moderate
/// parameters (centers ~ N(0, 1), radii in [0.8, 1.6]), polished back onto
/// the group. Products are redrawn until the matrix norm is moderate, so
/// the sampled maps never contract a spread point set below double
/// precision.
MoebiusMap random_moebius(Rng& rng, AmbientDim n, int factors = 5);

/// `count` uniform points certified to be in spherical general position
/// (resampled on failure). Requires count >= n+3.
PointSet random_gp_set(Rng& rng, AmbientDim n, int count, const Tolerances& tol = {});

/// Fewest domain points make_structured_domain accepts for dimension n.
int structured_domain_minimum(AmbientDim n);

/// Domain sample prepared so a tabulated Möbius map is recoverable by both
/// the hypothesis-driven strategies and checkable against circles:
///   - 6 points on a circle inside a 2-sphere witness, 3 more on the witness
///     (the circle makes wcp candidates testable; the witness 2-sphere gives
///     the circular-general-position hypothesis something to find),
///   - for each k in 3..n-1, 3 points spanning a new k-sphere over the
///     previous one (feeds the chain extension, which needs two or more
///     fresh image points per step),
///   - the remainder uniform on S^n.
/// Points are emitted cluster-first in this order. Throws on
/// count < structured_domain_minimum(n).
std::vector<ExtendedPoint> make_structured_domain(Rng& rng, AmbientDim n, int count,
                                                  const Tolerances& tol = {});

/// make_structured_domain evaluated through the map.
MapTable make_moebius_table(const MoebiusMap& map, Rng& rng, int count,
                            const Tolerances& tol = {});

/// Domain for a finite-image table: 6 concircular points (so circle checks
/// have a testable candidate) plus uniform points.
std::vector<ExtendedPoint> make_finite_image_domain(Rng& rng, AmbientDim n, int count,
                                                    const Tolerances& tol = {});

}  // namespace geomkit
