#include "geomkit/analysis.hpp"

#include <algorithm>

#include "geomkit/generators.hpp"

namespace geomkit {

namespace {

// Dimension of the smallest sphere holding the images; 0 when fewer than two
// distinct points remain (a single point violates no span bound).
int image_span_dim(const std::vector<SpherePoint>& images, const Tolerances& tol) {
    std::vector<SpherePoint> distinct = dedupe_points(images, tol);
    if (distinct.size() < 2) return 0;
    const int dim = static_cast<int>(distinct[0].vec().size());
    Eigen::MatrixXd m(dim, static_cast<int>(distinct.size()));
    for (int i = 0; i < m.cols(); ++i) m.col(i) = distinct[i].vec();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > tol.eps_rank * svd.singularValues()[0]) ++rank;
    return rank - 2;
}

WcpReport preservation_sweep(const MapOracle& oracle,
                             const std::vector<KSphere>& spheres, int sphere_dim,
                             int dim_bound, int samples, std::uint64_t seed,
                             const Tolerances& tol) {
    if (samples < dim_bound + 3)
        throw std::invalid_argument(
            "preservation check: need at least " + std::to_string(dim_bound + 3) +
            " samples per sphere; fewer images can never exceed the bound");

    std::vector<SpherePoint> known;
    for (const auto& p : oracle.known_domain()) known.push_back(lift(p, oracle.ambient()));

    WcpReport report;
    Rng rng(seed);
    for (int i = 0; i < static_cast<int>(spheres.size()); ++i) {
        const KSphere& s = spheres[i];
        if (s.dim() != sphere_dim)
            throw DimensionMismatchError("preservation check: sphere " + std::to_string(i) +
                                         " has dimension " + std::to_string(s.dim()));
        std::vector<ExtendedPoint> queries;
        for (std::size_t j = 0; j < known.size(); ++j)
            if (contains(s, known[j], tol)) queries.push_back(oracle.known_domain()[j]);
        if (static_cast<int>(queries.size()) < samples)
            for (const auto& p : sample_sphere(s, samples - static_cast<int>(queries.size()),
                                               rng.next_u64(), tol))
                queries.push_back(project(p, tol));

        std::vector<SpherePoint> images;
        bool skipped = false;
        for (const auto& q : queries) {
            try {
                images.push_back(lift(oracle(q), oracle.ambient()));
            } catch (const NoDataError&) {
                skipped = true;
                break;
            }
        }
        if (skipped) {
            ++report.spheres_skipped;
            continue;
        }
        int d = image_span_dim(images, tol);
        ++report.spheres_tested;
        report.image_dims.push_back(d);
        if (d > dim_bound) report.failures.push_back({i, d, queries});
    }
    report.verdict = report.failures.empty();
    return report;
}

}  // namespace

WcpReport check_weakly_circle_preserving(const MapOracle& oracle,
                                         const std::vector<KSphere>& circles,
                                         int samples_per_circle, std::uint64_t seed,
                                         const Tolerances& tol) {
    return preservation_sweep(oracle, circles, 1, 1, samples_per_circle, seed, tol);
}

WcpReport check_weakly_sphere_preserving(const MapOracle& oracle,
                                         const std::vector<KSphere>& spheres,
                                         int samples_per_sphere, std::uint64_t seed,
                                         const Tolerances& tol) {
    const int n = oracle.ambient().value();
    return preservation_sweep(oracle, spheres, n - 1, n - 1, samples_per_sphere, seed, tol);
}

WcpReport check_k_sphere_collapse(const MapOracle& oracle, int k, int trials,
                                  std::uint64_t seed, const Tolerances& tol) {
    const int n = oracle.ambient().value();
    if (k < 1 || k > n - 1)
        throw std::invalid_argument("check_k_sphere_collapse: k must be in [1, n-1]");
    if (trials < 1)
        throw std::invalid_argument("check_k_sphere_collapse: trials must be >= 1");
    Rng rng(seed);
    std::vector<KSphere> spheres;
    spheres.reserve(trials);
    for (int i = 0; i < trials; ++i)
        spheres.push_back(random_k_sphere(rng, oracle.ambient(), k, tol));
    return preservation_sweep(oracle, spheres, k, k, k + 4, rng.next_u64(), tol);
}

std::vector<KSphere> table_candidate_spheres(const MapTable& table, int sphere_dim,
                                             int min_incident, long long cap,
                                             const Tolerances& tol) {
    const int subset_size = sphere_dim + 2;
    const int m = table.size();
    std::vector<KSphere> out;
    if (m < subset_size) return out;

    std::vector<int> idx(subset_size);
    for (int i = 0; i < subset_size; ++i) idx[i] = i;
    long long tried = 0;
    while (tried < cap) {
        ++tried;
        std::vector<SpherePoint> chosen;
        for (int i : idx) chosen.push_back(table.domain_lifts()[i]);
        try {
            KSphere s = span_points(chosen, tol);
            if (s.dim() == sphere_dim) {
                int incident = 0;
                for (const auto& d : table.domain_lifts())
                    if (contains(s, d, tol)) ++incident;
                if (incident >= min_incident) {
                    bool dup = false;
                    for (const auto& seen : out)
                        if (sphere_equals(seen, s, tol)) { dup = true; break; }
                    if (!dup) out.push_back(s);
                }
            }
        } catch (const GeomError&) {
            // degenerate subset
        }
        int pos = subset_size - 1;
        while (pos >= 0 && idx[pos] == m - subset_size + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < subset_size; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

HypothesesReport verify_hypotheses(const MapTable& table, std::uint64_t seed,
                                   const Tolerances& tol) {
    HypothesesReport report;
    const AmbientDim n = table.ambient();

    // General position is Möbius-invariant, and a strongly contractive map
    // piles its images into a cluster whose rank gaps drown in rounding.
    // Every image-side decision therefore runs on a spread copy.
    MoebiusMap norm = spreading_map(table.image_lifts(), n, tol);
    std::vector<SpherePoint> spread;
    spread.reserve(table.image_lifts().size());
    for (const auto& p : table.image_lifts()) spread.push_back(apply(norm, p, tol));

    PointSet image_set(spread, n, tol);
    report.image_gp = spherical_general_position(image_set, tol);
    report.spherical_gp = report.image_gp.verdict;

    // Witness search: a 2-sphere spanned by 4 domain points carrying >= 5
    // rows whose images are in circular general position. Fewer than 5
    // distinct images anywhere makes a witness impossible.
    auto try_candidate = [&](const std::vector<int>& rows) -> bool {
        ++report.subsets_tried;
        std::vector<SpherePoint> pts;
        for (int r : rows) pts.push_back(table.domain_lifts()[r]);
        try {
            KSphere s = span_points(pts, tol);
            if (s.dim() != 2) return false;
            std::vector<int> incident;
            for (int r = 0; r < table.size(); ++r)
                if (contains(s, table.domain_lifts()[r], tol)) incident.push_back(r);
            if (static_cast<int>(incident.size()) < 5) return false;
            std::vector<SpherePoint> images;
            for (int r : incident) images.push_back(spread[r]);
            PointSet sphere_images(images, n, tol);
            if (sphere_images.size() < 5) return false;
            if (!circular_general_position(sphere_images, tol).verdict) return false;
            report.witness_found = true;
            report.witness_sphere = s;
            report.witness_rows = std::move(incident);
            return true;
        } catch (const GeomError&) {
            return false;
        }
    };

    if (image_set.size() >= 5) {
        if (n.value() == 2) {
            std::vector<int> all(table.size());
            for (int r = 0; r < table.size(); ++r) all[r] = r;
            // S^2 is itself the 2-sphere; there is nothing to span.
            ++report.subsets_tried;
            PointSet sphere_images(spread, n, tol);
            if (sphere_images.size() >= 5 &&
                circular_general_position(sphere_images, tol).verdict) {
                report.witness_found = true;
                report.witness_sphere = KSphere::full_sphere(n);
                report.witness_rows = std::move(all);
            }
        } else {
            const int m = table.size();
            const long long cap = 100000;
            long long total = m >= 4 ? static_cast<long long>(m) * (m - 1) * (m - 2) *
                                           (m - 3) / 24
                                     : 0;
            if (total <= cap) {
                std::vector<int> idx = {0, 1, 2, 3};
                while (m >= 4) {
                    if (try_candidate(idx)) break;
                    int pos = 3;
                    while (pos >= 0 && idx[pos] == m - 4 + pos) --pos;
                    if (pos < 0) break;
                    ++idx[pos];
                    for (int i = pos + 1; i < 4; ++i) idx[i] = idx[i - 1] + 1;
                }
            } else {
                report.search_capped = true;
                Rng rng(seed);
                for (long long draw = 0; draw < cap && !report.witness_found; ++draw) {
                    std::vector<int> rows;
                    while (static_cast<int>(rows.size()) < 4) {
                        int r = rng.uniform_int(0, m - 1);
                        if (std::find(rows.begin(), rows.end(), r) == rows.end())
                            rows.push_back(r);
                    }
                    try_candidate(rows);
                }
            }
        }
    }

    if (!report.spherical_gp)
        report.reason = "image set is not in spherical general position";
    else if (!report.witness_found)
        report.reason = "no 2-sphere with tabulated images in circular general position";
    return report;
}

}  // namespace geomkit
