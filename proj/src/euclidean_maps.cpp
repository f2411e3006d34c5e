#include "geomkit/euclidean_maps.hpp"

namespace geomkit {

ExtendedPoint invert_in_sphere(const Eigen::VectorXd& center, double radius,
                               const ExtendedPoint& p) {
    if (!(radius > 0))
        throw std::invalid_argument("invert_in_sphere: radius must be positive");
    if (p.is_infinity()) return ExtendedPoint::finite(center);
    if (p.coords().size() != center.size())
        throw DimensionMismatchError("invert_in_sphere: center/point dimensions differ");
    Eigen::VectorXd d = p.coords() - center;
    double s = d.squaredNorm();
    if (s == 0.0) return ExtendedPoint::infinity();
    return ExtendedPoint::finite(center + (radius * radius / s) * d);
}

ExtendedPoint reflect_in_hyperplane(const Eigen::VectorXd& normal, double offset,
                                    const ExtendedPoint& p) {
    double len = normal.norm();
    if (!(len > 0))
        throw std::invalid_argument("reflect_in_hyperplane: normal must be nonzero");
    if (p.is_infinity()) return ExtendedPoint::infinity();
    if (p.coords().size() != normal.size())
        throw DimensionMismatchError("reflect_in_hyperplane: normal/point dimensions differ");
    Eigen::VectorXd u = normal / len;
    double c = offset / len;
    return ExtendedPoint::finite(p.coords() - 2.0 * (u.dot(p.coords()) - c) * u);
}

}  // namespace geomkit
