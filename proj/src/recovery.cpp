#include <algorithm>

#include "geomkit/analysis.hpp"

namespace geomkit {

namespace {

// J-orthonormal completion of a sphere's form basis: columns are
// [spatial part of W | J-orthocomplement of W | timelike part of W], so
// F^T J F = J for the ambient J. The orthocomplement of a (k+1,1) subspace
// is positive definite, which makes the middle block constructible.
Eigen::MatrixXd complete_form_basis(const KSphere& s) {
    const int dim = s.ambient_n() + 2;
    const int k2 = s.dim() + 2;
    Eigen::MatrixXd bf = form_orthonormal_basis(s);
    Eigen::MatrixXd f(dim, dim);
    f.leftCols(k2 - 1) = bf.leftCols(k2 - 1);
    f.col(dim - 1) = bf.col(k2 - 1);
    if (k2 < dim) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(bf.transpose() * lorentz_j(dim),
                                              Eigen::ComputeFullV);
        Eigen::MatrixXd nullsp = svd.matrixV().rightCols(dim - k2);
        Eigen::MatrixXd gram = nullsp.transpose() * lorentz_j(dim) * nullsp;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        if (es.eigenvalues().minCoeff() <= 0)
            throw GeomError("complete_form_basis: orthocomplement form not positive");
        f.middleCols(k2 - 1, dim - k2) =
            nullsp * es.eigenvectors() *
            es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
    }
    return f;
}

// Ambient Lorentz matrix acting as g_int between the spheres (in their
// form-basis coordinates) and as the identity between the orthocomplements.
// Its restriction to dom is the fitted map; the complement action is a
// canonical completion, irrelevant to any point of dom.
Eigen::MatrixXd extend_intrinsic(const KSphere& dom, const KSphere& img,
                                 const Eigen::MatrixXd& g_int) {
    const int dim = dom.ambient_n() + 2;
    const int k2 = dom.dim() + 2;
    auto pos = [&](int i) { return i == k2 - 1 ? dim - 1 : i; };
    Eigen::MatrixXd full = Eigen::MatrixXd::Identity(dim, dim);
    for (int i = 0; i < k2; ++i)
        for (int j = 0; j < k2; ++j) full(pos(i), pos(j)) = g_int(i, j);
    Eigen::MatrixXd j = lorentz_j(dim);
    Eigen::MatrixXd f_dom = complete_form_basis(dom);
    Eigen::MatrixXd f_img = complete_form_basis(img);
    return f_img * full * j * f_dom.transpose() * j;
}

struct TableResiduals {
    double max_residual = 0.0;
    int worst = -1;
};

TableResiduals residuals_on_table(const Eigen::MatrixXd& g, const MapTable& table,
                                  const Tolerances& tol) {
    TableResiduals out;
    for (int r = 0; r < table.size(); ++r) {
        SpherePoint mapped =
            SpherePoint::from_near_null(g * table.domain_lifts()[r].vec(), tol);
        double res = chordal_distance(mapped, table.image_lifts()[r]);
        if (res > out.max_residual) {
            out.max_residual = res;
            out.worst = r;
        }
    }
    return out;
}

RecoveryResult finish(const Eigen::MatrixXd& g, const MapTable& table,
                      const char* provenance, const Tolerances& tol) {
    MoebiusMap map = MoebiusMap::from_matrix(g, table.ambient(), provenance, tol);
    TableResiduals chk = residuals_on_table(map.matrix(), table, tol);
    if (chk.max_residual > tol.eps_verify)
        return InconsistentData{chk.worst, chk.max_residual,
                                "table disagrees with the fitted map"};
    return Recovered{std::move(map), chk.max_residual};
}

// Fits domain -> image between equal-dimensional spheres from the given
// table rows, in intrinsic coordinates. Returns the intrinsic matrix;
// throws like fit_lorentz_dlt with indices into `rows`.
Eigen::MatrixXd fit_between_spheres(const MapTable& table, const KSphere& dom,
                                    const KSphere& img, const std::vector<int>& rows,
                                    const Tolerances& tol) {
    Eigen::MatrixXd fb_dom = form_orthonormal_basis(dom);
    Eigen::MatrixXd fb_img = form_orthonormal_basis(img);
    std::vector<Eigen::VectorXd> src, tgt;
    src.reserve(rows.size());
    tgt.reserve(rows.size());
    for (int r : rows) {
        src.push_back(intrinsic_coordinates(fb_dom, table.domain_lifts()[r]));
        tgt.push_back(intrinsic_coordinates(fb_img, table.image_lifts()[r]));
    }
    return fit_lorentz_dlt(src, tgt, tol).g;
}

KSphere image_span(const MapTable& table, const std::vector<int>& rows,
                   const Tolerances& tol) {
    std::vector<SpherePoint> pts;
    pts.reserve(rows.size());
    for (int r : rows) pts.push_back(table.image_lifts()[r]);
    return span_points(pts, tol);
}

double off_span_residual(const KSphere& s, const SpherePoint& p) {
    Eigen::VectorXd v = p.vec();
    return (v - s.basis() * (s.basis().transpose() * v)).norm();
}

// Greedy farthest-point subset of the table's domain, chordal metric.
std::vector<int> spread_subset(const MapTable& table, int want) {
    const auto& pts = table.domain_lifts();
    const int m = table.size();
    int a = 0, b = 1;
    double best = -1.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            double d = chordal_distance(pts[i], pts[j]);
            if (d > best) {
                best = d;
                a = i;
                b = j;
            }
        }
    std::vector<int> chosen = {a, b};
    std::vector<double> dist(m);
    for (int i = 0; i < m; ++i)
        dist[i] = std::min(chordal_distance(pts[i], pts[a]),
                           chordal_distance(pts[i], pts[b]));
    while (static_cast<int>(chosen.size()) < want) {
        int arg = 0;
        for (int i = 1; i < m; ++i)
            if (dist[i] > dist[arg]) arg = i;
        chosen.push_back(arg);
        for (int i = 0; i < m; ++i)
            dist[i] = std::min(dist[i], chordal_distance(pts[i], pts[arg]));
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

RecoveryResult recover_direct(const MapTable& table, std::uint64_t seed,
                              const Tolerances& tol) {
    HypothesesReport hyp = verify_hypotheses(table, seed, tol);
    if (!hyp.spherical_gp || !hyp.witness_found)
        return HypothesesNotSatisfied{hyp.reason};

    // spherical general position forces >= n+3 distinct rows
    std::vector<int> chosen = spread_subset(table, table.ambient().value() + 3);
    std::vector<Eigen::VectorXd> src, tgt;
    for (int r : chosen) {
        src.push_back(table.domain_lifts()[r].vec());
        tgt.push_back(table.image_lifts()[r].vec());
    }
    try {
        try {
            return finish(fit_lorentz_dlt(src, tgt, tol).g, table, "direct fit", tol);
        } catch (const InsufficientDataError&) {
            // the spread subset can be degenerate even when the table is not
            src.clear();
            tgt.clear();
            for (int r = 0; r < table.size(); ++r) {
                src.push_back(table.domain_lifts()[r].vec());
                tgt.push_back(table.image_lifts()[r].vec());
            }
            chosen.resize(table.size());
            for (int r = 0; r < table.size(); ++r) chosen[r] = r;
            return finish(fit_lorentz_dlt(src, tgt, tol).g, table, "direct fit", tol);
        }
    } catch (const InsufficientDataError& e) {
        return InsufficientData{e.what()};
    } catch (const InconsistentDataError& e) {
        int row = e.witness_index >= 0 ? chosen[e.witness_index] : -1;
        return InconsistentData{row, e.residual, e.what()};
    }
}

RecoveryResult recover_chain(const MapTable& table, std::uint64_t seed,
                             const Tolerances& tol) {
    HypothesesReport hyp = verify_hypotheses(table, seed, tol);
    if (!hyp.spherical_gp || !hyp.witness_found)
        return HypothesesNotSatisfied{hyp.reason};

    const int n = table.ambient().value();
    std::vector<int> rows = hyp.witness_rows;
    KSphere s_dom = *hyp.witness_sphere;
    KSphere s_img = image_span(table, rows, tol);
    if (s_img.dim() != s_dom.dim())
        return InconsistentData{-1, 0.0,
                                "images of the witness 2-sphere span dimension " +
                                    std::to_string(s_img.dim())};
    Eigen::MatrixXd g_int;
    try {
        g_int = fit_between_spheres(table, s_dom, s_img, rows, tol);
    } catch (const InsufficientDataError& e) {
        return InsufficientData{e.what()};
    } catch (const InconsistentDataError& e) {
        int row = e.witness_index >= 0 ? rows[e.witness_index] : -1;
        return InconsistentData{row, e.residual, e.what()};
    }

    while (s_dom.dim() < n) {
        struct Candidate {
            int row;
            double image_off;
        };
        std::vector<Candidate> cands;
        for (int r = 0; r < table.size(); ++r)
            if (!contains(s_dom, table.domain_lifts()[r], tol))
                cands.push_back({r, off_span_residual(s_img, table.image_lifts()[r])});
        if (cands.empty())
            return HypothesesNotSatisfied{
                "the domain does not extend past its dimension-" +
                std::to_string(s_dom.dim()) + " sphere"};
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            return a.image_off != b.image_off ? a.image_off > b.image_off
                                              : a.row < b.row;
        });

        bool accepted = false;
        for (const Candidate& c : cands) {
            KSphere s_next = s_dom;
            try {
                s_next = extend_span(s_dom, {table.domain_lifts()[c.row]}, tol);
            } catch (const GeomError&) {
                continue;
            }
            if (s_next.dim() != s_dom.dim() + 1) continue;
            std::vector<int> incident;
            for (int r = 0; r < table.size(); ++r)
                if (contains(s_next, table.domain_lifts()[r], tol)) incident.push_back(r);

            // An extension is only determined once two or more fresh image
            // points leave the previous image span; with one, the fit has a
            // two-parameter family of solutions.
            std::vector<SpherePoint> fresh;
            for (int r : incident)
                if (off_span_residual(s_img, table.image_lifts()[r]) > tol.eps_member)
                    fresh.push_back(table.image_lifts()[r]);
            if (dedupe_points(fresh, tol).size() < 2) continue;

            KSphere s_img_next = s_img;
            try {
                s_img_next = image_span(table, incident, tol);
            } catch (const GeomError&) {
                continue;
            }
            if (s_img_next.dim() != s_next.dim())
                return InconsistentData{
                    c.row, 0.0,
                    "images of a dimension-" + std::to_string(s_next.dim()) +
                        " sphere span dimension " + std::to_string(s_img_next.dim())};
            try {
                g_int = fit_between_spheres(table, s_next, s_img_next, incident, tol);
            } catch (const InsufficientDataError&) {
                continue;
            } catch (const InconsistentDataError& e) {
                int row = e.witness_index >= 0 ? incident[e.witness_index] : -1;
                return InconsistentData{row, e.residual, e.what()};
            }
            rows = std::move(incident);
            s_dom = s_next;
            s_img = s_img_next;
            accepted = true;
            break;
        }
        if (!accepted)
            return HypothesesNotSatisfied{
                "no extension of the dimension-" + std::to_string(s_dom.dim()) +
                " sphere gains two or more new image points"};
    }

    return finish(extend_intrinsic(s_dom, s_img, g_int), table, "chain fit", tol);
}

}  // namespace

RecoveryResult recover_moebius(const MapTable& table, RecoveryStrategy strategy,
                               std::uint64_t seed, const Tolerances& tol) {
    return strategy == RecoveryStrategy::direct ? recover_direct(table, seed, tol)
                                                : recover_chain(table, seed, tol);
}

RecoveryResult five_point_recover_s2(const MapTable& table, const Tolerances& tol) {
    KSphere dom = KSphere::full_sphere(table.ambient());
    try {
        dom = span_points(table.domain_lifts(), tol);
    } catch (const TooFewPointsError&) {
        return InsufficientData{"domain does not span any sphere"};
    }
    if (dom.dim() != 2)
        return HypothesesNotSatisfied{"domain spans a sphere of dimension " +
                                      std::to_string(dom.dim()) + ", not 2"};
    // The distinctness and general-position decisions run on a spread copy
    // of the images; both are Möbius-invariant, and the spread copy stays
    // decidable when the fitted map is strongly contractive.
    MoebiusMap norm = spreading_map(table.image_lifts(), table.ambient(), tol);
    std::vector<SpherePoint> spread;
    spread.reserve(table.image_lifts().size());
    for (const auto& p : table.image_lifts()) spread.push_back(apply(norm, p, tol));
    PointSet images(spread, table.ambient(), tol);
    if (images.size() < 5)
        return HypothesesNotSatisfied{"only " + std::to_string(images.size()) +
                                      " distinct images; the five-point regime needs 5"};
    if (!circular_general_position(images, tol).verdict)
        return HypothesesNotSatisfied{"images are not in circular general position"};
    KSphere img = span_points(table.image_lifts(), tol);
    if (img.dim() != 2)
        return InconsistentData{-1, 0.0,
                                "images of a 2-sphere span dimension " +
                                    std::to_string(img.dim())};
    try {
        Eigen::MatrixXd g_int;
        {
            std::vector<int> all(table.size());
            for (int r = 0; r < table.size(); ++r) all[r] = r;
            g_int = fit_between_spheres(table, dom, img, all, tol);
        }
        return finish(extend_intrinsic(dom, img, g_int), table, "five-point fit", tol);
    } catch (const InsufficientDataError& e) {
        return InsufficientData{e.what()};
    } catch (const InconsistentDataError& e) {
        return InconsistentData{e.witness_index, e.residual, e.what()};
    }
}

}  // namespace geomkit
