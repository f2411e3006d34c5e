#include "geomkit/generators.hpp"

#include <algorithm>

namespace geomkit {

namespace {

bool off_sphere(const KSphere& s, const SpherePoint& p, const Tolerances& tol) {
    return !contains(s, p, tol);
}

bool fresh(const std::vector<SpherePoint>& chosen, const SpherePoint& p,
           const Tolerances& tol) {
    for (const auto& q : chosen)
        if (same_point(p, q, tol)) return false;
    return true;
}

}  // namespace

ExtendedPoint random_finite_point(Rng& rng, AmbientDim n, double scale) {
    return ExtendedPoint::finite(scale * rng.normal_vector(n.value()));
}

SpherePoint random_sphere_point(Rng& rng, AmbientDim n) {
    Eigen::VectorXd v(n.lorentz_dim());
    v.head(n.value() + 1) = rng.unit_vector(n.value() + 1);
    v[n.lorentz_dim() - 1] = 1.0;
    return SpherePoint::from_raw(std::move(v));
}

KSphere random_k_sphere(Rng& rng, AmbientDim n, int k, const Tolerances& tol) {
    if (k < 0 || k > n.value())
        throw std::invalid_argument("random_k_sphere: k out of range");
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<SpherePoint> pts;
        for (int i = 0; i < k + 2; ++i) pts.push_back(random_sphere_point(rng, n));
        try {
            KSphere s = span_points(pts, tol);
            if (s.dim() == k) return s;
        } catch (const GeomError&) {
            // degenerate draw, resample
        }
    }
    throw GeomError("random_k_sphere: could not draw a clean sphere");
}

MoebiusMap random_moebius(Rng& rng, AmbientDim n, int factors) {
    if (factors < 1) throw std::invalid_argument("random_moebius: factors must be >= 1");
    // Norm-capped: a product of norm b maps spread point sets into clusters
    // of chordal size ~1/b^2, and past ~1e3 the cluster geometry drops below
    // double precision. Rejection keeps the samples in the regime every
    // downstream rank decision can actually resolve.
    for (int attempt = 0; attempt < 256; ++attempt) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n.lorentz_dim(), n.lorentz_dim());
        for (int i = 0; i < factors; ++i) {
            MoebiusMap f = rng.uniform01() < 0.5
                               ? MoebiusMap::from_inversion(rng.normal_vector(n.value()),
                                                            rng.uniform(0.8, 1.6), n)
                               : MoebiusMap::from_reflection(rng.unit_vector(n.value()),
                                                             rng.uniform(-1.0, 1.0), n);
            g = f.matrix() * g;
        }
        if (g.norm() > 24.0) continue;
        // A long product drifts off the group in its last bits; polish before
        // the constructor validates it.
        return MoebiusMap::from_matrix(nearest_lorentz(std::move(g)), n, "composition");
    }
    throw GeomError("random_moebius: norm rejection did not terminate");
}

PointSet random_gp_set(Rng& rng, AmbientDim n, int count, const Tolerances& tol) {
    if (count < n.value() + 3)
        throw std::invalid_argument("random_gp_set: spherical general position needs " +
                                    std::to_string(n.value() + 3) + " points or more");
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<SpherePoint> pts;
        for (int i = 0; i < count; ++i) pts.push_back(random_sphere_point(rng, n));
        PointSet set(pts, n, tol);
        if (set.size() == count && spherical_general_position(set, tol).verdict)
            return set;
    }
    throw GeomError("random_gp_set: sampling kept failing general position");
}

int structured_domain_minimum(AmbientDim n) {
    return 9 + 3 * std::max(0, n.value() - 3) + 2;
}

std::vector<ExtendedPoint> make_structured_domain(Rng& rng, AmbientDim n, int count,
                                                  const Tolerances& tol) {
    if (count < structured_domain_minimum(n))
        throw std::invalid_argument("make_structured_domain: need at least " +
                                    std::to_string(structured_domain_minimum(n)) +
                                    " points for n = " + std::to_string(n.value()));

    std::vector<SpherePoint> chosen;
    auto take = [&](const KSphere& from, int want, const KSphere* off) {
        int got = 0;
        for (int attempt = 0; attempt < 64 && got < want; ++attempt) {
            auto batch = sample_sphere(from, want + 4, rng.next_u64(), tol);
            for (const auto& p : batch) {
                if (got == want) break;
                if (!fresh(chosen, p, tol)) continue;
                if (off && !off_sphere(*off, p, tol)) continue;
                chosen.push_back(p);
                ++got;
            }
        }
        if (got < want) throw GeomError("make_structured_domain: sampling stalled");
    };

    // Witness 2-sphere with a 6-point circle cluster and 3 spread points.
    KSphere s2 = n.value() == 2 ? KSphere::full_sphere(n)
                                : random_k_sphere(rng, n, 2, tol);
    KSphere circle = span_points(sample_sphere(s2, 3, rng.next_u64(), tol), tol);
    take(circle, 6, nullptr);
    take(s2, 3, &circle);

    // Nested chain spheres, 3 new points each.
    KSphere current = s2;
    for (int k = 3; k <= n.value() - 1; ++k) {
        KSphere next = extend_span(current, {random_sphere_point(rng, n)}, tol);
        if (next.dim() != k) throw GeomError("make_structured_domain: chain step degenerate");
        take(next, 3, &current);
        current = next;
    }

    // Uniform remainder, kept off the top chain sphere so the last extension
    // step has fresh points to work with.
    while (static_cast<int>(chosen.size()) < count) {
        SpherePoint p = random_sphere_point(rng, n);
        if (!fresh(chosen, p, tol)) continue;
        if (current.dim() < n.value() && !off_sphere(current, p, tol)) continue;
        chosen.push_back(p);
    }

    std::vector<ExtendedPoint> out;
    out.reserve(chosen.size());
    for (const auto& p : chosen) out.push_back(project(p, tol));
    return out;
}

MapTable make_moebius_table(const MoebiusMap& map, Rng& rng, int count,
                            const Tolerances& tol) {
    auto domain = make_structured_domain(rng, map.ambient(), count, tol);
    return make_table(MapOracle::from_moebius(map, tol), domain, map.ambient(), tol);
}

std::vector<ExtendedPoint> make_finite_image_domain(Rng& rng, AmbientDim n, int count,
                                                    const Tolerances& tol) {
    if (count < 8)
        throw std::invalid_argument("make_finite_image_domain: need at least 8 points");
    std::vector<SpherePoint> chosen;
    KSphere circle = random_k_sphere(rng, n, 1, tol);
    for (const auto& p : sample_sphere(circle, 6, rng.next_u64(), tol)) chosen.push_back(p);
    while (static_cast<int>(chosen.size()) < count) {
        SpherePoint p = random_sphere_point(rng, n);
        if (fresh(chosen, p, tol)) chosen.push_back(p);
    }
    std::vector<ExtendedPoint> out;
    out.reserve(chosen.size());
    for (const auto& p : chosen) out.push_back(project(p, tol));
    return out;
}

}  // namespace geomkit
