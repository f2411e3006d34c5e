#include "geomkit/ksphere.hpp"

#include <algorithm>
#include <cmath>

#include "geomkit/rng.hpp"

namespace geomkit {

namespace {

Eigen::MatrixXd restricted_gram(const Eigen::MatrixXd& basis) {
    Eigen::MatrixXd g = basis.transpose() * basis;
    g -= 2.0 * (basis.row(basis.rows() - 1).transpose() * basis.row(basis.rows() - 1));
    return g;
}

// Orthonormal basis (columns) of the column space of M at relative rank
// cutoff eps_rank. Also reports the singular values.
Eigen::MatrixXd column_space(const Eigen::MatrixXd& m, double eps_rank,
                             Eigen::VectorXd* sigma_out = nullptr) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
    const Eigen::VectorXd& sigma = svd.singularValues();
    if (sigma_out) *sigma_out = sigma;
    int rank = 0;
    if (sigma.size() > 0 && sigma[0] > 0) {
        for (int i = 0; i < sigma.size(); ++i)
            if (sigma[i] > eps_rank * sigma[0]) ++rank;
    }
    return svd.matrixU().leftCols(rank);
}

}  // namespace

KSphere KSphere::from_basis(Eigen::MatrixXd basis, const Tolerances& tol) {
    if (basis.rows() < 3 || basis.cols() < 2)
        throw std::invalid_argument("KSphere: basis must be (n+2) x (k+2) with n >= 1, k >= 0");
    // Orthonormal input is kept verbatim so serialized bases survive a
    // parse/serialize cycle byte for byte.
    Eigen::MatrixXd b;
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(basis.cols(), basis.cols());
    if ((basis.transpose() * basis - eye).cwiseAbs().maxCoeff() <= 1e-13) {
        b = std::move(basis);
    } else {
        b = column_space(basis, tol.eps_rank);
        if (b.cols() != basis.cols())
            throw IllConditionedError("KSphere: basis is rank deficient",
                                      static_cast<double>(basis.cols() - b.cols()));
    }

    Eigen::MatrixXd gram = restricted_gram(b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    const Eigen::VectorXd& ev = eig.eigenvalues();  // ascending
    // Any subspace of R^{n+1,1} has at most one non-positive direction, so a
    // valid sphere shows exactly one negative eigenvalue and the rest positive.
    if (ev[0] > -tol.eps_rank || ev[1] < tol.eps_rank)
        throw IllConditionedError("KSphere: restricted form is not of signature (k+1,1)",
                                  std::min(std::abs(ev[0]), std::abs(ev[1])));
    const int k = static_cast<int>(b.cols()) - 2;
    return KSphere(k, std::move(b), std::move(gram));
}

KSphere KSphere::full_sphere(AmbientDim n) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n.lorentz_dim(), n.lorentz_dim());
    return KSphere(n.value(), b, lorentz_j(n.lorentz_dim()));
}

KSphere span_points(const std::vector<SpherePoint>& points, const Tolerances& tol) {
    if (points.empty()) throw TooFewPointsError(0);
    const int dim = static_cast<int>(points[0].vec().size());
    Eigen::MatrixXd m(dim, static_cast<int>(points.size()));
    for (int i = 0; i < m.cols(); ++i) {
        if (points[i].vec().size() != dim)
            throw DimensionMismatchError("span_points: mixed ambient dimensions");
        m.col(i) = points[i].vec();
    }
    Eigen::MatrixXd b = column_space(m, tol.eps_rank);
    if (b.cols() < 2) throw TooFewPointsError(static_cast<int>(b.cols()));
    return KSphere::from_basis(std::move(b), tol);
}

bool contains(const KSphere& s, const SpherePoint& p, const Tolerances& tol) {
    if (p.ambient_n() != s.ambient_n())
        throw DimensionMismatchError("contains: mixed ambient dimensions");
    const Eigen::VectorXd& v = p.vec();
    double residual = (v - s.basis() * (s.basis().transpose() * v)).norm();
    return residual <= tol.eps_member;
}

bool sphere_equals(const KSphere& a, const KSphere& b, const Tolerances& tol) {
    if (a.ambient_n() != b.ambient_n() || a.dim() != b.dim()) return false;
    // Same column space iff the projectors agree.
    Eigen::MatrixXd pa = a.basis() * a.basis().transpose();
    Eigen::MatrixXd pb = b.basis() * b.basis().transpose();
    return (pa - pb).norm() <= 16.0 * tol.eps_member * std::sqrt(double(a.dim() + 2));
}

SphereIntersection intersect_spheres(const KSphere& a, const KSphere& b,
                                     const Tolerances& tol) {
    if (a.ambient_n() != b.ambient_n())
        throw DimensionMismatchError("intersect_spheres: mixed ambient dimensions");

    // Principal angles between W_a and W_b: cosines are the singular values
    // of Ba^T Bb. A common direction has cosine 1.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.basis().transpose() * b.basis(),
                                          Eigen::ComputeFullU);
    const Eigen::VectorXd& cosines = svd.singularValues();

    const double accept = tol.eps_rank;               // 1 - cos <= accept: shared
    const double reject = std::sqrt(tol.eps_rank);    // 1 - cos >= reject: distinct
    int shared = 0;
    for (int i = 0; i < cosines.size(); ++i) {
        double gap = 1.0 - cosines[i];
        if (gap <= accept) {
            ++shared;
        } else if (gap < reject) {
            throw IllConditionedError("intersect_spheres: ambiguous principal angle", gap);
        }
    }
    if (shared == 0) return EmptyIntersection{};

    // Basis of the common subspace, taken on a's side. U is orthonormal and
    // a.basis() has orthonormal columns, so w needs no re-orthonormalization.
    Eigen::MatrixXd w = a.basis() * svd.matrixU().leftCols(shared);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(restricted_gram(w));
    const Eigen::VectorXd& ev = eig.eigenvalues();

    const double eps = tol.eps_rank;
    if (shared >= 2 && std::abs(ev[0]) <= eps && std::abs(ev[1]) <= eps)
        throw IllConditionedError("intersect_spheres: doubly degenerate restricted form",
                                  std::abs(ev[1]));

    if (std::abs(ev[0]) <= eps) {
        // Radical direction: the unique null line of W. The eigenvector is
        // only eps_rank-close to the cone, so snap it on.
        Eigen::VectorXd ray = w * eig.eigenvectors().col(0);
        return SinglePointIntersection{SpherePoint::from_near_null(std::move(ray), tol)};
    }
    if (ev[0] < 0.0) {
        if (shared < 2) return EmptyIntersection{};  // a timelike line holds no ray
        return KSphere::from_basis(std::move(w), tol);
    }
    return EmptyIntersection{};
}

Eigen::MatrixXd form_orthonormal_basis(const KSphere& s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.gram());
    const Eigen::VectorXd& ev = eig.eigenvalues();  // ascending; ev[0] < 0 < rest
    const int m = static_cast<int>(ev.size());
    Eigen::MatrixXd bf(s.basis().rows(), m);
    for (int i = 1; i < m; ++i)
        bf.col(i - 1) = s.basis() * eig.eigenvectors().col(i) / std::sqrt(ev[i]);
    bf.col(m - 1) = s.basis() * eig.eigenvectors().col(0) / std::sqrt(-ev[0]);
    return bf;
}

Eigen::VectorXd intrinsic_coordinates(const Eigen::MatrixXd& form_basis,
                                      const SpherePoint& p) {
    const int m = static_cast<int>(form_basis.cols());
    // With Bf^T J Bf = J_m, the coefficient vector of v = Bf c is J_m Bf^T J v.
    Eigen::VectorXd jv = p.vec();
    jv[jv.size() - 1] = -jv[jv.size() - 1];
    Eigen::VectorXd c = form_basis.transpose() * jv;
    c[m - 1] = -c[m - 1];
    c /= c.norm();
    if (c[m - 1] < 0) c = -c;
    return c;
}

std::vector<SpherePoint> sample_sphere(const KSphere& s, int count, std::uint64_t seed,
                                       const Tolerances& tol) {
    if (count < 1) throw std::invalid_argument("sample_sphere: count must be >= 1");
    Eigen::MatrixXd bf = form_orthonormal_basis(s);
    const int m = static_cast<int>(bf.cols());
    Rng rng(seed);

    std::vector<SpherePoint> out;
    out.reserve(count);
    int attempts = 0;
    const int max_attempts = 64 * count;
    while (static_cast<int>(out.size()) < count && attempts < max_attempts) {
        ++attempts;
        Eigen::VectorXd dir = rng.unit_vector(m - 1);
        Eigen::VectorXd v = bf.leftCols(m - 1) * dir + bf.col(m - 1);
        SpherePoint p = SpherePoint::from_near_null(std::move(v), tol);
        bool dup = false;
        for (const auto& q : out)
            if (same_point(p, q, tol)) { dup = true; break; }
        if (!dup) out.push_back(p);
    }
    // A 0-sphere has only two distinct points; top up with repeats when asked
    // for more than the sphere can provide.
    if (out.empty()) throw GeomError("sample_sphere: no points produced");
    const std::size_t distinct = out.size();
    while (static_cast<int>(out.size()) < count) out.push_back(out[out.size() % distinct]);
    return out;
}

KSphere extend_span(const KSphere& s, const std::vector<SpherePoint>& extra,
                    const Tolerances& tol) {
    Eigen::MatrixXd m(s.basis().rows(),
                      s.basis().cols() + static_cast<int>(extra.size()));
    m.leftCols(s.basis().cols()) = s.basis();
    for (int i = 0; i < static_cast<int>(extra.size()); ++i) {
        if (extra[i].ambient_n() != s.ambient_n())
            throw DimensionMismatchError("extend_span: mixed ambient dimensions");
        m.col(s.basis().cols() + i) = extra[i].vec();
    }
    Eigen::MatrixXd b = column_space(m, tol.eps_rank);
    return KSphere::from_basis(std::move(b), tol);
}

}  // namespace geomkit
