#pragma once

#include "geomkit/point.hpp"

namespace geomkit {

/// Inversion in the sphere S(center, radius):
///     x |-> center + (radius / |x - center|)^2 (x - center),
/// with center |-> ∞ and ∞ |-> center. An involution.
ExtendedPoint invert_in_sphere(const Eigen::VectorXd& center, double radius,
                               const ExtendedPoint& p);

/// Reflection across the hyperplane <normal, x> = offset. `normal` need not
/// be unit; it is normalized (with `offset` rescaled to match). Fixes ∞.
ExtendedPoint reflect_in_hyperplane(const Eigen::VectorXd& normal, double offset,
                                    const ExtendedPoint& p);

}  // namespace geomkit
