#include "doctest.h"

#include <cmath>
#include <variant>
#include <vector>

#include "geomkit/euclidean_maps.hpp"
#include "geomkit/ksphere.hpp"
#include "geomkit/generators.hpp"
#include "geomkit/moebius.hpp"
#include "geomkit/rng.hpp"

using namespace geomkit;

namespace {

ExtendedPoint pt(std::initializer_list<double> coords) {
    Eigen::VectorXd v(static_cast<int>(coords.size()));
    int i = 0;
    for (double c : coords) v[i++] = c;
    return ExtendedPoint::finite(std::move(v));
}

double point_gap(const ExtendedPoint& a, const ExtendedPoint& b, AmbientDim n) {
    return chordal_distance(lift(a, n), lift(b, n));
}

}  // namespace

TEST_SUITE("moebius") {

TEST_CASE("inversion matrix reproduces the Euclidean formula") {
    AmbientDim n(3);
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    MoebiusMap m = MoebiusMap::from_inversion(zero, 1.0, n);
    ExtendedPoint img = apply(m, pt({2, 0, 0}));
    REQUIRE(img.is_finite());
    CHECK((img.coords() - pt({0.5, 0, 0}).coords()).norm() <= 1e-12);

    Rng rng(101);
    for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd a = rng.normal_vector(3);
        double r = rng.uniform(0.5, 2.0);
        MoebiusMap f = MoebiusMap::from_inversion(a, r, n);
        ExtendedPoint p = random_finite_point(rng, n, 2.0);
        if ((p.coords() - a).norm() < 1e-4) continue;
        CHECK(point_gap(apply(f, p), invert_in_sphere(a, r, p), n) <= 1e-10);
    }
}

TEST_CASE("reflection matrix reproduces the Euclidean formula and fixes infinity") {
    AmbientDim n(2);
    Eigen::VectorXd u(2);
    u << 1, 0;
    MoebiusMap m = MoebiusMap::from_reflection(u, 0.0, n);
    CHECK((apply(m, pt({1, 2})).coords() - pt({-1, 2}).coords()).norm() <= 1e-12);
    CHECK(apply(m, ExtendedPoint::infinity()).is_infinity());

    Rng rng(103);
    for (int i = 0; i < 50; ++i) {
        Eigen::VectorXd normal = rng.normal_vector(2).normalized();
        double off = rng.uniform(-1.5, 1.5);
        MoebiusMap f = MoebiusMap::from_reflection(normal, off, n);
        ExtendedPoint p = random_finite_point(rng, n, 2.0);
        CHECK(point_gap(apply(f, p), reflect_in_hyperplane(normal, off, p), n) <= 1e-10);
    }
}

TEST_CASE("constructors satisfy the Lorentz condition tightly") {
    Rng rng(107);
    AmbientDim n(4);
    for (int i = 0; i < 50; ++i) {
        MoebiusMap f = MoebiusMap::from_inversion(rng.normal_vector(4),
                                                  rng.uniform(0.5, 2.0), n);
        MoebiusMap g = MoebiusMap::from_reflection(rng.normal_vector(4).normalized(),
                                                   rng.uniform(-1.0, 1.0), n);
        CHECK(lorentz_residual(f.matrix()) <= 1e-9);
        CHECK(lorentz_residual(g.matrix()) <= 1e-9);
        CHECK(lorentz_residual(compose(f, g).matrix()) <= 1e-9);
        CHECK(lorentz_residual(inverse(f).matrix()) <= 1e-9);
    }
}

TEST_CASE("involutions and group laws") {
    AmbientDim n(3);
    Rng rng(109);
    MoebiusMap id = MoebiusMap::identity(n);
    for (int i = 0; i < 25; ++i) {
        MoebiusMap f = MoebiusMap::from_inversion(rng.normal_vector(3),
                                                  rng.uniform(0.5, 2.0), n);
        CHECK((compose(f, f).matrix() - id.matrix()).norm() <= 1e-10);

        MoebiusMap m = random_moebius(rng, n);
        CHECK((compose(m, inverse(m)).matrix() - id.matrix()).norm() <= 1e-10);

        ExtendedPoint p = random_finite_point(rng, n, 2.0);
        CHECK(point_gap(apply(id, p), p, n) <= 1e-12);
    }
}

TEST_CASE("composition acts as function composition, associatively") {
    AmbientDim n(3);
    Rng rng(113);
    for (int i = 0; i < 25; ++i) {
        MoebiusMap a = random_moebius(rng, n, 2);
        MoebiusMap b = random_moebius(rng, n, 2);
        MoebiusMap c = random_moebius(rng, n, 2);
        ExtendedPoint p = random_finite_point(rng, n, 2.0);
        CHECK(point_gap(apply(compose(a, b), p), apply(a, apply(b, p)), n) <= 1e-9);
        CHECK((compose(compose(a, b), c).matrix() - compose(a, compose(b, c)).matrix())
                  .norm() <= 1e-10);
    }
}

TEST_CASE("the projective action ignores scaling and the sign of G") {
    AmbientDim n(3);
    Rng rng(127);
    MoebiusMap m = random_moebius(rng, n);
    // from_matrix picks the orthochronous representative of {G, -G}
    MoebiusMap neg = MoebiusMap::from_matrix(-m.matrix(), n, "negated");
    CHECK((neg.matrix() - m.matrix()).norm() == 0.0);
    for (int i = 0; i < 20; ++i) {
        SpherePoint p = random_sphere_point(rng, n);
        for (double s : {2.0, -2.0}) {
            SpherePoint scaled = SpherePoint::from_near_null(s * (m.matrix() * p.vec()));
            CHECK(chordal_distance(scaled, apply(m, p)) <= 1e-12);
        }
    }
}

TEST_CASE("from_matrix rejects non-Lorentz input") {
    AmbientDim n(2);
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(4, 4) * 2.0;
    CHECK_THROWS_AS(MoebiusMap::from_matrix(g, n, "junk"), GeomError);
    Eigen::MatrixXd wrong = Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(MoebiusMap::from_matrix(wrong, n, "size"), DimensionMismatchError);
}

TEST_CASE("nearest_lorentz polishes drift and rejects far matrices") {
    AmbientDim n(3);
    Rng rng(131);
    MoebiusMap m = random_moebius(rng, n);
    Eigen::MatrixXd drifted = m.matrix() * (1.0 + 3e-9);
    Eigen::MatrixXd polished = nearest_lorentz(drifted);
    CHECK(lorentz_residual(polished) <= 1e-12);
    CHECK((polished - m.matrix()).norm() <= 1e-7);

    // swapping a spatial axis with the time axis has no Lorentz polar factor
    Eigen::MatrixXd swap = Eigen::MatrixXd::Identity(5, 5);
    swap(0, 0) = swap(4, 4) = 0.0;
    swap(0, 4) = swap(4, 0) = 1.0;
    CHECK_THROWS_AS(nearest_lorentz(swap), InconsistentDataError);
    CHECK_THROWS_AS(nearest_lorentz(Eigen::MatrixXd::Zero(5, 5)), InconsistentDataError);
}

TEST_CASE("apply_to_sphere preserves dimension and incidence") {
    Rng rng(137);
    for (int nv : {3, 4, 6}) {
        AmbientDim n(nv);
        for (int trial = 0; trial < 10; ++trial) {
            int k = rng.uniform_int(1, nv - 1);
            KSphere s = random_k_sphere(rng, n, k);
            MoebiusMap m = random_moebius(rng, n);
            KSphere img = apply_to_sphere(m, s);
            CHECK(img.dim() == k);
            for (const auto& p : sample_sphere(s, 8, rng.next_u64()))
                CHECK(contains(img, apply(m, p)));
        }
    }
}

TEST_CASE("circles through two points off a sphere meet it at most once") {
    // configuration: span(S_k + {x1, x2}) has dimension k+2
    Rng rng(139);
    int tested = 0;
    while (tested < 40) {
        int nv = rng.uniform_int(3, 5);
        AmbientDim n(nv);
        int k = rng.uniform_int(1, nv - 2);
        KSphere sk = random_k_sphere(rng, n, k);
        SpherePoint x1 = random_sphere_point(rng, n);
        SpherePoint x2 = random_sphere_point(rng, n);
        if (extend_span(sk, {x1, x2}).dim() != k + 2) continue;
        ++tested;
        for (int c = 0; c < 5; ++c) {
            KSphere circle = span_points({x1, x2, random_sphere_point(rng, n)});
            if (circle.dim() != 1) continue;
            SphereIntersection meet = EmptyIntersection{};
            try {
                meet = intersect_spheres(circle, sk);
            } catch (const IllConditionedError&) {
                continue;  // near-tangent draw, refused by contract
            }
            // a KSphere outcome would carry >= 2 points and break the bound
            CHECK_FALSE(std::holds_alternative<KSphere>(meet));
            if (auto* sp = std::get_if<SinglePointIntersection>(&meet)) {
                CHECK(contains(circle, sp->point));
                CHECK(contains(sk, sp->point));
            }
        }
    }
}

TEST_CASE("dlt fit recovers the generating map from generic pairs") {
    AmbientDim n(3);
    Rng rng(149);
    for (int trial = 0; trial < 10; ++trial) {
        MoebiusMap m = random_moebius(rng, n);
        std::vector<Correspondence> pairs;
        for (int i = 0; i < 8; ++i) {
            ExtendedPoint src = random_finite_point(rng, n, 2.0);
            pairs.push_back({src, apply(m, src)});
        }
        MoebiusMap fit = fit_from_correspondences(pairs, n);
        std::vector<ExtendedPoint> held_out;
        for (int i = 0; i < 100; ++i) held_out.push_back(random_finite_point(rng, n, 2.0));
        CHECK(maps_agree(m, fit, held_out));
        for (const auto& w : held_out)
            CHECK(point_gap(apply(fit, w), apply(m, w), n) <= 1e-8);
    }
}

TEST_CASE("identity correspondences fit the identity") {
    AmbientDim n(2);
    Rng rng(151);
    std::vector<Correspondence> pairs;
    for (int i = 0; i < 6; ++i) {
        ExtendedPoint p = random_finite_point(rng, n, 2.0);
        pairs.push_back({p, p});
    }
    MoebiusMap fit = fit_from_correspondences(pairs, n);
    CHECK((fit.matrix() - Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-8);
}

TEST_CASE("dlt fit reports degenerate and inconsistent data") {
    AmbientDim n(3);
    Rng rng(157);
    MoebiusMap m = random_moebius(rng, n);

    std::vector<Correspondence> few;
    for (int i = 0; i < 4; ++i) {
        ExtendedPoint src = random_finite_point(rng, n, 2.0);
        few.push_back({src, apply(m, src)});
    }
    CHECK_THROWS_AS(fit_from_correspondences(few, n), InsufficientDataError);

    // corrupt one target: the fit must refuse and name a pair
    std::vector<Correspondence> bad;
    for (int i = 0; i < 10; ++i) {
        ExtendedPoint src = random_finite_point(rng, n, 2.0);
        bad.push_back({src, apply(m, src)});
    }
    Eigen::VectorXd wrecked = bad[4].target.coords();
    wrecked[0] += 0.7;
    bad[4].target = ExtendedPoint::finite(wrecked);
    CHECK_THROWS_AS(fit_from_correspondences(bad, n), InconsistentDataError);
}

TEST_CASE("three-point-image data is inconsistent") {
    AmbientDim n(3);
    Rng rng(163);
    std::vector<ExtendedPoint> images = {pt({1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1})};
    std::vector<Correspondence> pairs;
    for (int i = 0; i < 12; ++i)
        pairs.push_back({random_finite_point(rng, n, 2.0), images[i % 3]});
    CHECK_THROWS_AS(fit_from_correspondences(pairs, n),
                    InconsistentDataError);
}

TEST_CASE("maps_agree distinguishes maps and tolerates ray sign") {
    AmbientDim n(3);
    Rng rng(167);
    MoebiusMap m = random_moebius(rng, n);
    std::vector<ExtendedPoint> witnesses;
    for (int i = 0; i < 10; ++i) witnesses.push_back(random_finite_point(rng, n, 2.0));
    CHECK(maps_agree(m, m, witnesses));
    MoebiusMap shifted =
        compose(m, MoebiusMap::from_inversion(rng.normal_vector(3), 1.0, n));
    CHECK_FALSE(maps_agree(m, shifted, witnesses));
}

TEST_CASE("random_moebius stays inside the numerically safe norm range") {
    Rng rng(173);
    for (int nv : {2, 3, 5}) {
        AmbientDim n(nv);
        for (int i = 0; i < 20; ++i) {
            MoebiusMap m = random_moebius(rng, n);
            CHECK(m.matrix().norm() <= 24.0);
            CHECK(lorentz_residual(m.matrix()) <= 1e-7);
        }
    }
}

TEST_CASE("spreading_map lifts tight clusters to unit scale") {
    AmbientDim n(3);
    Rng rng(179);
    Eigen::VectorXd c(3);
    c << 2.0, 0.5, -1.0;
    std::vector<SpherePoint> pts;
    for (int i = 0; i < 12; ++i)
        pts.push_back(lift(ExtendedPoint::finite(c + 1e-5 * rng.normal_vector(3)), n));
    MoebiusMap f = spreading_map(pts, n);
    double after = 0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            after = std::max(after, chordal_distance(apply(f, pts[i]), apply(f, pts[j])));
    CHECK(after > 0.1);
}

TEST_CASE("spreading_map handles clusters at infinity") {
    AmbientDim n(3);
    Rng rng(181);
    Eigen::VectorXd c(3);
    c << 1e6, -2e6, 5e5;
    std::vector<SpherePoint> pts;
    for (int i = 0; i < 10; ++i)
        pts.push_back(lift(ExtendedPoint::finite(c + 10.0 * rng.normal_vector(3)), n));
    pts.push_back(lift(ExtendedPoint::infinity(), n));
    double before = 0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            before = std::max(before, chordal_distance(pts[i], pts[j]));
    CHECK(before < 1e-4);
    MoebiusMap f = spreading_map(pts, n);
    double after = 0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            after = std::max(after, chordal_distance(apply(f, pts[i]), apply(f, pts[j])));
    CHECK(after > 1e4 * before);
}

TEST_CASE("spreading_map is the identity on spread sets") {
    AmbientDim n(3);
    Rng rng(191);
    std::vector<SpherePoint> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(random_sphere_point(rng, n));
    MoebiusMap f = spreading_map(pts, n);
    CHECK((f.matrix() - Eigen::MatrixXd::Identity(5, 5)).norm() == 0.0);
}

}  // TEST_SUITE
