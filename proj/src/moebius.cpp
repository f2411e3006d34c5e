#include "geomkit/moebius.hpp"

#include <cmath>

namespace geomkit {

namespace {

// J-reflection in a spacelike vector sigma: R = I - (2 / <s,s>_J) s s^T J.
// Lorentz-orthogonal, involutive, and orthochronous since sigma is spacelike.
Eigen::MatrixXd j_reflection(const Eigen::VectorXd& sigma, double q_sigma) {
    const int dim = static_cast<int>(sigma.size());
    Eigen::VectorXd js = sigma;
    js[dim - 1] = -js[dim - 1];
    return Eigen::MatrixXd::Identity(dim, dim) -
           (2.0 / q_sigma) * (sigma * js.transpose());
}

Eigen::VectorXd canonical_ray(Eigen::VectorXd v) {
    v /= v.norm();
    if (v[v.size() - 1] < 0) v = -v;
    return v;
}

}  // namespace

double lorentz_residual(const Eigen::MatrixXd& g) {
    Eigen::MatrixXd j = lorentz_j(static_cast<int>(g.rows()));
    return (g.transpose() * j * g - j).norm();
}

Eigen::MatrixXd nearest_lorentz(Eigen::MatrixXd x, const Tolerances& tol) {
    const int dim = static_cast<int>(x.rows());
    if (dim < 3 || x.cols() != dim)
        throw DimensionMismatchError("nearest_lorentz: need a square matrix of size >= 3");
    Eigen::MatrixXd j = lorentz_j(dim);
    for (int it = 0; it < 40; ++it) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(x);
        if (!lu.isInvertible())
            throw InconsistentDataError("nearest_lorentz: singular iterate", -1, 0.0);
        Eigen::MatrixXd xn = 0.5 * (x + j * lu.inverse().transpose() * j);
        double step = (xn - x).norm();
        x = std::move(xn);
        if (step <= 1e-15 * x.norm()) break;
    }
    if (lorentz_residual(x) > tol.eps_verify)
        throw InconsistentDataError("nearest_lorentz: iteration did not converge", -1,
                                    lorentz_residual(x));
    return x;
}

MoebiusMap MoebiusMap::identity(AmbientDim n) {
    return MoebiusMap(Eigen::MatrixXd::Identity(n.lorentz_dim(), n.lorentz_dim()),
                      n, "identity");
}

MoebiusMap MoebiusMap::from_matrix(Eigen::MatrixXd g, AmbientDim n,
                                   std::string provenance, const Tolerances& tol) {
    const int dim = n.lorentz_dim();
    if (g.rows() != dim || g.cols() != dim)
        throw DimensionMismatchError("MoebiusMap: matrix size does not match n");
    double res = lorentz_residual(g);
    if (res > tol.eps_verify)
        throw GeomError("MoebiusMap: matrix violates the Lorentz condition, residual " +
                        std::to_string(res));
    // |G(d,d)| >= 1 for any Lorentz matrix; positive picks the orthochronous
    // representative of the projective pair {G, -G}.
    if (g(dim - 1, dim - 1) < 0) g = -g;
    return MoebiusMap(std::move(g), n, std::move(provenance));
}

MoebiusMap MoebiusMap::from_inversion(const Eigen::VectorXd& center, double radius,
                                      AmbientDim n) {
    if (!(radius > 0))
        throw std::invalid_argument("from_inversion: radius must be positive");
    if (center.size() != n.value())
        throw DimensionMismatchError("from_inversion: center dimension does not match n");
    const int dim = n.lorentz_dim();
    // S(a, r) is the zero set of <sigma, lift(x)>_J for this sigma, with
    // <sigma,sigma>_J = r^2.
    double m = center.squaredNorm() - radius * radius;
    Eigen::VectorXd sigma(dim);
    sigma.head(n.value()) = center;
    sigma[dim - 2] = (m - 1.0) / 2.0;
    sigma[dim - 1] = (m + 1.0) / 2.0;
    return MoebiusMap(j_reflection(sigma, radius * radius), n, "inversion");
}

MoebiusMap MoebiusMap::from_reflection(const Eigen::VectorXd& normal, double offset,
                                       AmbientDim n) {
    double len = normal.norm();
    if (!(len > 0))
        throw std::invalid_argument("from_reflection: normal must be nonzero");
    if (normal.size() != n.value())
        throw DimensionMismatchError("from_reflection: normal dimension does not match n");
    const int dim = n.lorentz_dim();
    // The hyperplane <u, x> = c is the sphere through ∞ cut out by
    // sigma = (u, c, c), with <sigma,sigma>_J = 1.
    Eigen::VectorXd sigma(dim);
    sigma.head(n.value()) = normal / len;
    sigma[dim - 2] = offset / len;
    sigma[dim - 1] = offset / len;
    return MoebiusMap(j_reflection(sigma, 1.0), n, "reflection");
}

MoebiusMap compose(const MoebiusMap& a, const MoebiusMap& b) {
    if (a.ambient() != b.ambient())
        throw DimensionMismatchError("compose: ambient dimensions differ");
    return MoebiusMap::from_matrix(a.matrix() * b.matrix(), a.ambient(), "composition");
}

MoebiusMap inverse(const MoebiusMap& m) {
    const int dim = m.ambient().lorentz_dim();
    Eigen::MatrixXd j = lorentz_j(dim);
    return MoebiusMap::from_matrix(j * m.matrix().transpose() * j, m.ambient(),
                                   "inverse");
}

SpherePoint apply(const MoebiusMap& m, const SpherePoint& p, const Tolerances& tol) {
    if (p.ambient_n() != m.ambient().value())
        throw DimensionMismatchError("apply: point dimension does not match the map");
    return SpherePoint::from_near_null(m.matrix() * p.vec(), tol);
}

ExtendedPoint apply(const MoebiusMap& m, const ExtendedPoint& p, const Tolerances& tol) {
    return project(apply(m, lift(p, m.ambient()), tol), tol);
}

KSphere apply_to_sphere(const MoebiusMap& m, const KSphere& s, const Tolerances& tol) {
    if (s.ambient_n() != m.ambient().value())
        throw DimensionMismatchError("apply_to_sphere: sphere dimension does not match the map");
    return KSphere::from_basis(m.matrix() * s.basis(), tol);
}

DltFit fit_lorentz_dlt(const std::vector<Eigen::VectorXd>& sources,
                       const std::vector<Eigen::VectorXd>& targets,
                       const Tolerances& tol) {
    if (sources.size() != targets.size())
        throw DimensionMismatchError("fit_lorentz_dlt: source/target counts differ");
    const int m = static_cast<int>(sources.size());
    if (m == 0) throw InsufficientDataError("fit_lorentz_dlt: no pairs");
    const int dim = static_cast<int>(sources[0].size());
    if (dim < 3) throw DimensionMismatchError("fit_lorentz_dlt: vectors too short");
    if (m < dim + 1)
        throw InsufficientDataError("fit_lorentz_dlt: " + std::to_string(m) +
                                    " pairs cannot pin a " + std::to_string(dim) +
                                    "-dimensional map (need " + std::to_string(dim + 1) + ")");

    // Each pair asks G v = lambda w; eliminating lambda with the projector
    // I - w w^T gives dim linear rows (rank dim-1) in vec(G).
    Eigen::MatrixXd a(m * dim, dim * dim);
    for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd& v = sources[i];
        const Eigen::VectorXd& w = targets[i];
        if (v.size() != dim || w.size() != dim)
            throw DimensionMismatchError("fit_lorentz_dlt: mixed vector sizes");
        Eigen::MatrixXd proj =
            Eigen::MatrixXd::Identity(dim, dim) - w * w.transpose();
        for (int j = 0; j < dim; ++j)
            a.block(i * dim, j * dim, dim, dim) = v[j] * proj;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const int last = dim * dim - 1;
    double gap = sv[last - 1] / sv[0];
    if (!(gap > tol.eps_rank))
        throw InsufficientDataError(
            "fit_lorentz_dlt: nullspace is not one-dimensional (rank gap " +
            std::to_string(gap) + "), sources degenerate or too few");

    Eigen::MatrixXd g0 =
        Eigen::Map<const Eigen::MatrixXd>(svd.matrixV().col(last).data(), dim, dim);

    // Consistent data yields G0 = t G with G Lorentz, so G0^T J G0 = t^2 J.
    // The J-weighted mean of the diagonal recovers t^2; a non-positive value
    // certifies the data is not Möbius.
    Eigen::MatrixXd j = lorentz_j(dim);
    Eigen::MatrixXd k = g0.transpose() * j * g0;
    double s = (k * j).trace() / dim;
    if (!(s > 0))
        throw InconsistentDataError(
            "fit_lorentz_dlt: no Lorentz scaling of the fitted matrix exists", -1, s);
    Eigen::MatrixXd g1 = g0 / std::sqrt(s);
    if (g1(dim - 1, dim - 1) < 0) g1 = -g1;

    Eigen::MatrixXd x = nearest_lorentz(g1, tol);
    double moved = (x - g1).norm() / g1.norm();
    if (moved > tol.eps_verify)
        throw InconsistentDataError(
            "fit_lorentz_dlt: projection onto Lorentz matrices moved the fit by " +
            std::to_string(moved), -1, moved);

    double max_res = 0.0;
    int worst = -1;
    for (int i = 0; i < m; ++i) {
        double r = (canonical_ray(x * sources[i]) - targets[i]).norm();
        if (r > max_res) { max_res = r; worst = i; }
    }
    if (max_res > tol.eps_verify)
        throw InconsistentDataError("fit_lorentz_dlt: pair " + std::to_string(worst) +
                                        " off by " + std::to_string(max_res),
                                    worst, max_res);
    return DltFit{std::move(x), max_res, worst, gap};
}

MoebiusMap fit_from_correspondences(const std::vector<Correspondence>& pairs,
                                    AmbientDim n, const Tolerances& tol) {
    if (static_cast<int>(pairs.size()) < n.value() + 3)
        throw InsufficientDataError("fit_from_correspondences: need at least " +
                                    std::to_string(n.value() + 3) + " pairs, got " +
                                    std::to_string(pairs.size()));
    std::vector<Eigen::VectorXd> sources, targets;
    sources.reserve(pairs.size());
    targets.reserve(pairs.size());
    for (const auto& c : pairs) {
        sources.push_back(lift(c.source, n).vec());
        targets.push_back(lift(c.target, n).vec());
    }
    DltFit fit = fit_lorentz_dlt(sources, targets, tol);
    return MoebiusMap::from_matrix(std::move(fit.g), n, "fit", tol);
}

bool maps_agree(const MoebiusMap& a, const MoebiusMap& b,
                const std::vector<ExtendedPoint>& witnesses, const Tolerances& tol) {
    if (a.ambient() != b.ambient()) return false;
    for (const auto& w : witnesses) {
        SpherePoint v = lift(w, a.ambient());
        if (chordal_distance(apply(a, v, tol), apply(b, v, tol)) > tol.eps_verify)
            return false;
    }
    return true;
}

MoebiusMap spreading_map(const std::vector<SpherePoint>& points, AmbientDim n,
                         const Tolerances& tol) {
    for (const auto& p : points)
        if (p.ambient_n() != n.value())
            throw DimensionMismatchError("spreading_map: point dimension mismatch");
    if (points.size() < 2) return MoebiusMap::identity(n);

    double diam = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            diam = std::max(diam, chordal_distance(points[i], points[j]));
    if (diam >= 0.1) return MoebiusMap::identity(n);

    // Tight cluster. Pull a cluster at infinity down first, then move the
    // cluster to the origin and dilate it to unit size. Differences of
    // nearby doubles are exact, so the cluster's shape survives the spread
    // at its stored relative precision. Tracking stays on the lifted rays:
    // projecting a point chordally near ∞ underflows the embedding scale
    // and would erase exactly the geometry being rescued.
    const int dim = n.lorentz_dim();
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(dim, dim);
    std::vector<SpherePoint> cur = points;

    auto push = [&](const MoebiusMap& f) {
        g = f.matrix() * g;
        for (auto& c : cur) c = apply(f, c, tol);
    };

    if (chordal_distance(cur[0], lift(ExtendedPoint::infinity(), n)) < 0.2)
        push(MoebiusMap::from_inversion(Eigen::VectorXd::Zero(n.value()), 1.0, n));

    // The cluster now sits a chordal 0.1 or more from ∞, so projections are
    // finite with coordinates bounded by a small constant.
    ExtendedPoint a0 = project(cur[0], tol);
    if (a0.is_finite() && a0.coords().norm() > tol.eps_null) {
        const Eigen::VectorXd anchor = a0.coords();
        const double shift = anchor.norm();
        Eigen::VectorXd u = -anchor / shift;
        push(MoebiusMap::from_reflection(u, 0.0, n));
        push(MoebiusMap::from_reflection(u, shift / 2.0, n));
    }

    double radius = 0.0;
    for (const auto& c : cur) {
        ExtendedPoint e = project(c, tol);
        if (e.is_finite()) radius = std::max(radius, e.coords().norm());
    }
    if (radius > 0.0 && (radius < 0.25 || radius > 4.0)) {
        // Two concentric inversions compose to the dilation by 1/radius.
        // The cap keeps the product within the Lorentz-residual budget of
        // the final polish; a partial spread still lifts every rank gap
        // quadratically.
        const double scale = std::min(1.0 / radius, 1e5);
        push(MoebiusMap::from_inversion(Eigen::VectorXd::Zero(n.value()), 1.0, n));
        push(MoebiusMap::from_inversion(Eigen::VectorXd::Zero(n.value()),
                                        std::sqrt(scale), n));
    }

    // The spread factor is ~1/diam, and the polished product carries a
    // Lorentz residual of that order squared in the last bits. Gate it by
    // its own conditioning rather than eps_verify.
    Tolerances loose = tol;
    loose.eps_verify = std::max(tol.eps_verify, 1e-3);
    return MoebiusMap::from_matrix(nearest_lorentz(std::move(g), loose), n,
                                   "normalization", loose);
}

}  // namespace geomkit
