#pragma once

// Independent cross-checks for the test suites. Everything here is solved
// from first principles (elimination, determinants, explicit equations) so
// a bug in the library's SVD-based machinery cannot hide behind itself.

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace testoracle {

struct Circle2D {
    Eigen::Vector2d center;
    double radius;
};

// Circle through three points of R^2 by solving the two equidistance
// equations |p-a|^2 = |p-b|^2 = |p-c|^2, a linear 2x2 system in p.
inline std::optional<Circle2D> circle_through(const Eigen::Vector2d& a,
                                              const Eigen::Vector2d& b,
                                              const Eigen::Vector2d& c) {
    Eigen::Matrix2d m;
    m.row(0) = 2.0 * (b - a).transpose();
    m.row(1) = 2.0 * (c - a).transpose();
    Eigen::Vector2d rhs(b.squaredNorm() - a.squaredNorm(),
                        c.squaredNorm() - a.squaredNorm());
    double det = m.determinant();
    if (std::abs(det) < 1e-12 * (m.norm() * m.norm() + 1.0)) return std::nullopt;
    Eigen::Vector2d center = m.inverse() * rhs;
    return Circle2D{center, (a - center).norm()};
}

// Intersection of two circles via the radical line: substitute the
// difference of the two circle equations (a line) back into the first.
inline std::vector<Eigen::Vector2d> circle_intersection(const Circle2D& p,
                                                        const Circle2D& q) {
    Eigen::Vector2d d = q.center - p.center;
    double dist = d.norm();
    if (dist < 1e-14) return {};
    double t = (dist * dist + p.radius * p.radius - q.radius * q.radius) / (2.0 * dist);
    double h2 = p.radius * p.radius - t * t;
    Eigen::Vector2d foot = p.center + (t / dist) * d;
    if (h2 < -1e-12) return {};
    if (h2 < 1e-12) return {foot};
    Eigen::Vector2d perp(-d.y() / dist, d.x() / dist);
    double h = std::sqrt(h2);
    return {foot + h * perp, foot - h * perp};
}

// Rank by Gaussian elimination with partial pivoting; pivots below
// eps * (largest initial absolute entry) count as zero.
inline int gauss_rank(Eigen::MatrixXd m, double eps = 1e-9) {
    const double scale = m.cwiseAbs().maxCoeff();
    if (!(scale > 0)) return 0;
    const double cutoff = eps * scale;
    int rank = 0;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int pivot = row;
        for (int r = row + 1; r < m.rows(); ++r)
            if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
        if (std::abs(m(pivot, col)) <= cutoff) continue;
        m.row(pivot).swap(m.row(row));
        for (int r = row + 1; r < m.rows(); ++r)
            m.row(r) -= (m(r, col) / m(row, col)) * m.row(row);
        ++rank;
        ++row;
    }
    return rank;
}

// Four points of R^2 are concircular (or collinear) iff the standard
// lifting determinant |x|^2, x, y, 1 vanishes.
inline double concircularity(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                             const Eigen::Vector2d& c, const Eigen::Vector2d& d) {
    Eigen::Matrix4d m;
    const Eigen::Vector2d* pts[4] = {&a, &b, &c, &d};
    for (int i = 0; i < 4; ++i)
        m.row(i) << pts[i]->squaredNorm(), pts[i]->x(), pts[i]->y(), 1.0;
    return m.determinant();
}

// Distance of p from the circle itself (not its disk): | |p-center| - r |.
inline double circle_residual(const Circle2D& c, const Eigen::Vector2d& p) {
    return std::abs((p - c.center).norm() - c.radius);
}

}  // namespace testoracle
