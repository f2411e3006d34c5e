#include "geomkit/general_position.hpp"

#include <algorithm>
#include <cmath>

namespace geomkit {

// Why leave-one-out is exact
// --------------------------
// Claim: a finite set B of distinct points fails circular general position
// (some circle C has |B \ C| <= 1) iff |B| <= 3, or B or some (|B|-1)-subset
// of B is concircular (spans a subspace of dimension <= 3, i.e. sphere
// dimension <= 1).
//
//   (<=) Any set of at most 3 points lies on some circle, which then
//   excludes nothing. If a subset B' with |B'| >= |B|-1 lies on a circle C,
//   then |B \ C| <= |B| - |B'| <= 1.
//
//   (=>) If C fails, B' := B ∩ C has |B'| >= |B|-1 and spans a subspace
//   inside C's 3-dimensional one. When |B| >= 4 that subset is B itself or
//   a leave-one-out set, which is exactly what the checker enumerates.
//
// The spherical case is identical with circle -> (n-1)-sphere, 3 -> n+2,
// and span dimension <= 3 -> <= n+1: any n+1 points lie on some
// (n-1)-sphere, so every B with |B| <= n+2 fails via the subset B minus one
// point. |B|+1 rank computations decide the whole quantifier.

namespace {

// Numerical rank of the lifted points plus the scaled singular value at the
// decision index (rank_bound, 0-based), which measures how decisively the
// subset clears or fails "rank <= rank_bound".
struct RankProbe {
    int rank;
    double margin;
};

RankProbe rank_probe(const std::vector<const SpherePoint*>& pts, int rank_bound,
                     const Tolerances& tol) {
    if (pts.empty()) return {0, 0.0};
    const int dim = static_cast<int>(pts[0]->vec().size());
    Eigen::MatrixXd m(dim, static_cast<int>(pts.size()));
    for (int i = 0; i < m.cols(); ++i) m.col(i) = pts[i]->vec();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > tol.eps_rank * sv[0]) ++rank;
    double margin = rank_bound < sv.size() ? sv[rank_bound] / sv[0] : 0.0;
    return {rank, margin};
}

// Deterministic probe points used to widen a degenerate span up to a target
// sphere dimension.
std::vector<SpherePoint> widening_probes(AmbientDim n) {
    std::vector<SpherePoint> probes;
    probes.push_back(lift(ExtendedPoint::infinity(), n));
    probes.push_back(lift(ExtendedPoint::finite(Eigen::VectorXd::Zero(n.value())), n));
    for (double scale : {1.0, 2.0, 3.0})
        for (int i = 0; i < n.value(); ++i) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n.value());
            e[i] = scale;
            probes.push_back(lift(ExtendedPoint::finite(e), n));
        }
    return probes;
}

// Smallest sphere of dimension exactly target_dim through all of `pts`,
// padding the span with probe points where the input is degenerate. Valid
// because any subspace spanned by >= 2 distinct null rays is automatically
// of Lorentz signature.
KSphere widen_to_dim(std::vector<SpherePoint> pts, int target_dim, AmbientDim n,
                     const Tolerances& tol) {
    auto rank_of = [&](const std::vector<SpherePoint>& v) {
        std::vector<const SpherePoint*> ptrs;
        for (const auto& p : v) ptrs.push_back(&p);
        return rank_probe(ptrs, target_dim + 2, tol).rank;
    };
    int rank = rank_of(pts);
    for (const auto& probe : widening_probes(n)) {
        if (rank >= target_dim + 2) break;
        pts.push_back(probe);
        int r = rank_of(pts);
        if (r > rank) rank = r; else pts.pop_back();
    }
    if (rank != target_dim + 2)
        throw GeomError("widen_to_dim: probe set exhausted before target rank");
    return span_points(pts, tol);
}

std::vector<int> excluded_indices(const PointSet& b, const KSphere& s,
                                  const Tolerances& tol) {
    std::vector<int> out;
    for (int i = 0; i < b.size(); ++i)
        if (!contains(s, b.points()[i], tol)) out.push_back(i);
    return out;
}

// Shared engine: general position against spheres of dimension sphere_dim,
// failing on any (|B|-1)-subset of rank <= sphere_dim + 2.
GPReport gp_check(const PointSet& b, int sphere_dim, int min_cardinality,
                  const Tolerances& tol) {
    const int rank_bound = sphere_dim + 2;
    GPReport report;
    report.cardinality_ok = b.size() >= min_cardinality;

    if (b.size() < min_cardinality) {
        // Some sphere of dimension sphere_dim passes through all but at most
        // one point outright.
        std::vector<SpherePoint> base(b.points().begin(), b.points().end());
        if (static_cast<int>(base.size()) > rank_bound) base.pop_back();
        KSphere witness = widen_to_dim(std::move(base), sphere_dim, b.ambient(), tol);
        report.verdict = false;
        report.witness = GPWitness{witness, excluded_indices(b, witness, tol)};
        report.decisive_gap = 0.0;
        return report;
    }

    std::vector<const SpherePoint*> subset;
    subset.reserve(b.size());
    double min_margin = std::numeric_limits<double>::infinity();
    // leave_out == -1 tests the full set, then each leave-one-out subset.
    for (int leave_out = -1; leave_out < b.size(); ++leave_out) {
        subset.clear();
        for (int i = 0; i < b.size(); ++i)
            if (i != leave_out) subset.push_back(&b.points()[i]);
        RankProbe probe = rank_probe(subset, rank_bound, tol);
        min_margin = std::min(min_margin, probe.margin);
        if (probe.rank <= rank_bound) {
            std::vector<SpherePoint> fail_pts;
            for (const auto* p : subset) fail_pts.push_back(*p);
            KSphere witness = widen_to_dim(std::move(fail_pts), sphere_dim,
                                           b.ambient(), tol);
            report.verdict = false;
            report.witness = GPWitness{witness, excluded_indices(b, witness, tol)};
            report.decisive_gap = probe.margin;
            return report;
        }
    }
    report.verdict = true;
    report.decisive_gap = min_margin;
    return report;
}

}  // namespace

PointSet::PointSet(std::vector<SpherePoint> points, AmbientDim n, const Tolerances& tol)
    : n_(n) {
    for (const auto& p : points)
        if (p.ambient_n() != n.value())
            throw DimensionMismatchError("PointSet: point does not match ambient n");
    std::vector<SpherePoint> unique = dedupe_points(points, tol);
    merged_ = static_cast<int>(points.size() - unique.size());
    points_ = std::move(unique);
}

PointSet PointSet::from_extended(const std::vector<ExtendedPoint>& points,
                                 AmbientDim n, const Tolerances& tol) {
    return PointSet(lift_all(points, n), n, tol);
}

GPReport circular_general_position(const PointSet& b, const Tolerances& tol) {
    // A circle through any 3 points excludes at most one point of a 4-set,
    // so 5 points is the smallest set that can pass.
    return gp_check(b, 1, 5, tol);
}

GPReport spherical_general_position(const PointSet& b, const Tolerances& tol) {
    return gp_check(b, b.ambient().value() - 1, b.ambient().value() + 3, tol);
}

GPReport brute_force_gp_oracle(const PointSet& b, GPMode mode, const Tolerances& tol) {
    if (b.size() > 12)
        throw TooLargeError("brute_force_gp_oracle: guarded to 12 points, got " +
                            std::to_string(b.size()));
    const int sphere_dim = mode == GPMode::circular ? 1 : b.ambient().value() - 1;
    const int subset_size = sphere_dim + 2;  // enough points to span the sphere

    GPReport report;
    report.cardinality_ok = b.size() >= sphere_dim + 4;

    // Any subset_size - 1 points lie on some sphere of dimension sphere_dim,
    // so sets of size subset_size or less always fail.
    if (b.size() <= subset_size) {
        std::vector<SpherePoint> base(b.points().begin(), b.points().end());
        if (static_cast<int>(base.size()) == subset_size) base.pop_back();
        KSphere witness = widen_to_dim(std::move(base), sphere_dim, b.ambient(), tol);
        report.verdict = false;
        report.witness = GPWitness{witness, excluded_indices(b, witness, tol)};
        return report;
    }

    // Every failing sphere S is caught through a subset of B ∩ S spanning
    // span(B ∩ S): incidences counted on that subspace reach |B| - 1. The
    // converse holds because any subspace of rank <= sphere_dim + 2 through
    // >= |B|-1 points widens to a sphere of dimension sphere_dim containing
    // them all.
    std::vector<int> idx(subset_size);
    for (int i = 0; i < subset_size; ++i) idx[i] = i;
    while (true) {
        Eigen::MatrixXd m(b.ambient().lorentz_dim(), subset_size);
        for (int i = 0; i < subset_size; ++i) m.col(i) = b.points()[idx[i]].vec();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
        int rank = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > tol.eps_rank * svd.singularValues()[0]) ++rank;
        Eigen::MatrixXd u = svd.matrixU().leftCols(rank);

        int incident = 0;
        for (int i = 0; i < b.size(); ++i) {
            const Eigen::VectorXd& v = b.points()[i].vec();
            if ((v - u * (u.transpose() * v)).norm() <= tol.eps_member) ++incident;
        }
        if (incident >= b.size() - 1) {
            std::vector<SpherePoint> chosen;
            for (int i : idx) chosen.push_back(b.points()[i]);
            KSphere witness = widen_to_dim(std::move(chosen), sphere_dim,
                                           b.ambient(), tol);
            report.verdict = false;
            report.witness = GPWitness{witness, excluded_indices(b, witness, tol)};
            return report;
        }
        // next lexicographic subset
        int pos = subset_size - 1;
        while (pos >= 0 && idx[pos] == b.size() - subset_size + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < subset_size; ++i) idx[i] = idx[i - 1] + 1;
    }
    report.verdict = true;
    return report;
}

}  // namespace geomkit
