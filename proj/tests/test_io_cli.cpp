#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "geomkit/generators.hpp"
#include "geomkit/io.hpp"

using namespace geomkit;

namespace {

ExtendedPoint pt(std::initializer_list<double> coords) {
    Eigen::VectorXd v(static_cast<int>(coords.size()));
    int i = 0;
    for (double c : coords) v[i++] = c;
    return ExtendedPoint::finite(std::move(v));
}

template <class F>
std::string where_of(F&& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return e.where;
    }
    return "<no throw>";
}

const std::string kBin = GEOMKIT_BIN;

std::filesystem::path test_dir() {
    auto dir = std::filesystem::temp_directory_path() / "geomkit-io-tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string path_in(const std::string& name) { return (test_dir() / name).string(); }

int run_cli(const std::string& args) {
    std::string cmd = "\"" + kBin + "\" " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

int run_shell(const std::string& cmd) {
    int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("points documents round trip byte for byte") {
    AmbientDim n(3);
    std::vector<ExtendedPoint> pts = {pt({0.1, -2.25, 1.0 / 3.0}),
                                      ExtendedPoint::infinity(),
                                      pt({1e-17, 3e200, -0.0})};
    std::string text = write_points(pts, n);
    PointsDoc doc = parse_points(text);
    CHECK(doc.n.value() == 3);
    REQUIRE(doc.points.size() == 3);
    CHECK(doc.points[1].is_infinity());
    CHECK((doc.points[0].coords() - pts[0].coords()).norm() == 0.0);
    CHECK((doc.points[2].coords() - pts[2].coords()).norm() == 0.0);
    CHECK(write_points(doc.points, doc.n) == text);
}

TEST_CASE("table documents round trip byte for byte") {
    AmbientDim n(3);
    Rng rng(401);
    MapTable table = make_moebius_table(random_moebius(rng, n), rng, 14);
    std::string text = write_table(table);
    MapTable parsed = parse_table(text);
    CHECK(parsed.size() == table.size());
    CHECK(write_table(parsed) == text);
}

TEST_CASE("moebius documents round trip and revalidate") {
    AmbientDim n(3);
    Rng rng(409);
    MoebiusMap m = random_moebius(rng, n);
    std::string text = write_moebius(m);
    MoebiusMap parsed = parse_moebius(text);
    CHECK(parsed.provenance() == m.provenance());
    CHECK((parsed.matrix() - m.matrix()).norm() == 0.0);
    CHECK(write_moebius(parsed) == text);

    // a tampered matrix is off the group and must be rejected with its path
    Eigen::MatrixXd bad = m.matrix();
    bad(0, 0) += 1e-3;
    std::string forged = write_moebius(m);
    std::size_t at = forged.find("\"matrix\":");
    forged = forged.substr(0, at) + "\"matrix\":" + [&] {
        std::string rows = "[";
        for (int r = 0; r < bad.rows(); ++r) {
            if (r) rows += ",";
            rows += "[";
            for (int c = 0; c < bad.cols(); ++c) {
                if (c) rows += ",";
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g", bad(r, c));
                rows += buf;
            }
            rows += "]";
        }
        return rows + "]";
    }() + "}\n";
    CHECK(where_of([&] { parse_moebius(forged); }) == "$.matrix");
}

TEST_CASE("ksphere documents round trip byte for byte") {
    AmbientDim n(3);
    Rng rng(419);
    KSphere s = random_k_sphere(rng, n, 1);
    std::string text = write_ksphere(s);
    KSphere parsed = parse_ksphere(text);
    CHECK(parsed.dim() == 1);
    CHECK((parsed.basis() - s.basis()).norm() == 0.0);
    CHECK(write_ksphere(parsed) == text);
}

TEST_CASE("gp reports round trip byte for byte, witness included") {
    AmbientDim n(2);
    std::vector<ExtendedPoint> flat = {pt({1, 0}), pt({0, 1}), pt({-1, 0}),
                                       pt({0, -1}), pt({0.3, 0.4})};
    PointSet set = PointSet::from_extended(flat, n);
    GPReport report = circular_general_position(set);
    REQUIRE_FALSE(report.verdict);
    REQUIRE(report.witness.has_value());
    std::string text = write_gp_report(report, GPMode::circular, set.merged_count(), n);
    GPReportDoc doc = parse_gp_report(text);
    CHECK(doc.mode == GPMode::circular);
    CHECK_FALSE(doc.report.verdict);
    REQUIRE(doc.report.witness.has_value());
    CHECK(write_gp_report(doc.report, doc.mode, doc.merged_count, doc.n) == text);

    // passing report, no witness
    Rng rng(431);
    PointSet good = random_gp_set(rng, n, 6);
    GPReport ok = spherical_general_position(good);
    REQUIRE(ok.verdict);
    std::string text2 = write_gp_report(ok, GPMode::spherical, 0, n);
    GPReportDoc doc2 = parse_gp_report(text2);
    CHECK(doc2.report.verdict);
    CHECK(write_gp_report(doc2.report, doc2.mode, doc2.merged_count, doc2.n) == text2);
}

TEST_CASE("check reports round trip byte for byte") {
    AmbientDim n(2);
    Rng rng(433);
    MapOracle cubing(
        [](const ExtendedPoint& p) {
            if (p.is_infinity()) return p;
            Eigen::VectorXd c = p.coords();
            for (int i = 0; i < c.size(); ++i) c[i] = c[i] * c[i] * c[i];
            return ExtendedPoint::finite(std::move(c));
        },
        n, "cubing");
    std::vector<KSphere> circles;
    for (int i = 0; i < 4; ++i) circles.push_back(random_k_sphere(rng, n, 1));
    WcpReport report = check_weakly_circle_preserving(cubing, circles, 6, 3);
    REQUIRE_FALSE(report.verdict);
    std::string text = write_check_report(report, "wcp", n);
    CheckReportDoc doc = parse_check_report(text);
    CHECK(doc.mode == "wcp");
    CHECK(doc.report.failures.size() == report.failures.size());
    CHECK(write_check_report(doc.report, doc.mode, doc.n) == text);
}

TEST_CASE("hypotheses reports round trip byte for byte") {
    AmbientDim n(3);
    Rng rng(439);
    MapTable table = make_moebius_table(random_moebius(rng, n), rng, 16);
    HypothesesReport report = verify_hypotheses(table, 5);
    REQUIRE(report.witness_found);
    std::string text = write_hypotheses_report(report, n);
    HypothesesDoc doc = parse_hypotheses_report(text);
    CHECK(doc.report.witness_rows == report.witness_rows);
    CHECK(write_hypotheses_report(doc.report, doc.n) == text);
}

TEST_CASE("recovery reports round trip in all four outcomes") {
    AmbientDim n(3);
    Rng rng(443);
    MapTable table = make_moebius_table(random_moebius(rng, n), rng, 16);
    RecoveryResult recovered = recover_moebius(table, RecoveryStrategy::direct, 3);
    REQUIRE(std::holds_alternative<Recovered>(recovered));
    RecoveryResult outcomes[] = {
        std::move(recovered),
        HypothesesNotSatisfied{"images are not in circular general position"},
        InconsistentData{7, 0.5, "table disagrees with the fitted map"},
        InsufficientData{"only 4 rows"},
    };
    for (const RecoveryResult& r : outcomes) {
        std::string text = write_recovery_report(r, n);
        RecoveryDoc doc = parse_recovery_report(text);
        CHECK(doc.result.index() == r.index());
        CHECK(write_recovery_report(doc.result, doc.n) == text);
    }
}

TEST_CASE("strict parsers name the offending path") {
    CHECK(where_of([] { parse_points("not json at all"); }) == "$");
    CHECK(where_of([] {
              parse_points(R"({"version":"1","n":2,"kind":"points","points":[],"extra":1})");
          }) == "$.extra");
    CHECK(where_of([] { parse_points(R"({"version":"1","n":2,"kind":"points"})"); }) ==
          "$");
    CHECK(where_of([] {
              parse_points(R"({"version":"2","n":2,"kind":"points","points":[]})");
          }) == "$.version");
    CHECK(where_of([] {
              parse_points(R"({"version":"1","n":2,"kind":"table","points":[]})");
          }) == "$.kind");
    CHECK(where_of([] {
              parse_points(R"({"version":"1","n":0,"kind":"points","points":[]})");
          }) == "$.n");
    CHECK(where_of([] {
              parse_points(R"({"version":"1","n":2.5,"kind":"points","points":[]})");
          }) == "$.n");
    CHECK(where_of([] {
              parse_points(R"({"version":"1","n":2,"kind":"points","points":["Inf"]})");
          }) == "$.points[0]");
    CHECK(where_of([] {
              parse_points(R"({"version":"1","n":2,"kind":"points","points":[[1,2,3]]})");
          }) == "$.points[0]");
    CHECK(where_of([] {
              parse_points(
                  R"({"version":"1","n":2,"kind":"points","points":[[1,"x"]]})");
          }) == "$.points[0][1]");

    // a function table cannot assign one domain point two rows
    CHECK(where_of([] {
              parse_table(R"({"version":"1","n":2,"kind":"table","pairs":[)"
                          R"({"domain":[0,0],"image":[1,0]},)"
                          R"({"domain":[0,0],"image":[0,1]}]})");
          }) == "$.pairs");

    // a parsed matrix must satisfy the Lorentz condition
    CHECK(where_of([] {
              parse_moebius(R"({"version":"1","n":2,"kind":"moebius",)"
                            R"("provenance":"x","matrix":)"
                            R"([[2,0,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,2]]})");
          }) == "$.matrix");
    CHECK(where_of([] {
              parse_moebius(R"({"version":"1","n":2,"kind":"moebius",)"
                            R"("provenance":7,"matrix":[]})");
          }) == "$.provenance");

    CHECK(where_of([] {
              parse_gp_report(
                  R"({"version":"1","n":2,"kind":"gp-report","merged_count":0,)"
                  R"("report":{"mode":"circular","verdict":true,)"
                  R"("cardinality_ok":true,"decisive_gap":1.0,"bogus":2}})");
          }) == "$.report.bogus");

    CHECK(where_of([] {
              parse_recovery_report(R"({"version":"1","n":2,)"
                                    R"("kind":"recovery-report","outcome":"weird"})");
          }) == "$.outcome");

    CHECK(where_of([] {
              parse_check_report(
                  R"({"version":"1","n":2,"kind":"check-report","mode":"xyz",)"
                  R"("spheres_tested":0,"spheres_skipped":0,"verdict":true,)"
                  R"("image_dims":[],"failures":[]})");
          }) == "$.mode");
}

TEST_CASE("cli generates deterministically and recovers what it generated") {
    std::string table = path_in("cli_table.json");
    std::string table2 = path_in("cli_table2.json");
    REQUIRE(run_cli("generate moebius-table --n 3 --count 18 --seed 5 --out " + table)
            == 0);
    REQUIRE(run_cli("generate moebius-table --n 3 --count 18 --seed 5 --out " + table2)
            == 0);
    CHECK(read_text_file(table) == read_text_file(table2));

    // the environment seed is the fallback for a missing --seed
    std::string table3 = path_in("cli_table3.json");
    REQUIRE(run_shell("GEOM_KIT_SEED=5 \"" + kBin +
                      "\" generate moebius-table --n 3 --count 18 --out " + table3)
            == 0);
    CHECK(read_text_file(table) == read_text_file(table3));

    std::string direct = path_in("cli_direct.json");
    std::string chain = path_in("cli_chain.json");
    REQUIRE(run_cli("recover " + table + " --strategy direct --out " + direct) == 0);
    REQUIRE(run_cli("recover " + table + " --strategy chain --out " + chain) == 0);
    MoebiusMap m_direct = parse_moebius(read_text_file(direct));
    MoebiusMap m_chain = parse_moebius(read_text_file(chain));
    MapTable parsed = parse_table(read_text_file(table));
    std::vector<ExtendedPoint> domain;
    for (const auto& pr : parsed.pairs()) domain.push_back(pr.domain);
    CHECK(maps_agree(m_direct, m_chain, domain));

    // the checks accept the same table, and their reports are deterministic
    std::string wcp1 = path_in("cli_wcp1.json");
    std::string wcp2 = path_in("cli_wcp2.json");
    CHECK(run_cli("wcp-check " + table + " --seed 9 --out " + wcp1) == 0);
    CHECK(run_cli("wcp-check " + table + " --seed 9 --out " + wcp2) == 0);
    CHECK(read_text_file(wcp1) == read_text_file(wcp2));
    std::string wsp = path_in("cli_wsp.json");
    CHECK(run_cli("wsp-check " + table + " --seed 9 --out " + wsp) == 0);
    CHECK(parse_check_report(read_text_file(wsp)).report.verdict);
}

TEST_CASE("cli apply inverts cleanly") {
    std::string table = path_in("cli_apply_table.json");
    std::string map_path = path_in("cli_apply_map.json");
    std::string pts = path_in("cli_apply_pts.json");
    std::string img = path_in("cli_apply_img.json");
    std::string back = path_in("cli_apply_back.json");
    REQUIRE(run_cli("generate moebius-table --n 3 --count 14 --seed 8 --out " + table)
            == 0);
    REQUIRE(run_cli("recover " + table + " --out " + map_path) == 0);
    REQUIRE(run_cli("generate gp-set --n 3 --count 7 --seed 21 --out " + pts) == 0);
    REQUIRE(run_cli("apply " + map_path + " " + pts + " --out " + img) == 0);

    MoebiusMap inv = inverse(parse_moebius(read_text_file(map_path)));
    std::string inv_path = path_in("cli_apply_inv.json");
    write_text_file(inv_path, write_moebius(inv));
    REQUIRE(run_cli("apply " + inv_path + " " + img + " --out " + back) == 0);

    PointsDoc original = parse_points(read_text_file(pts));
    PointsDoc returned = parse_points(read_text_file(back));
    REQUIRE(original.points.size() == returned.points.size());
    AmbientDim n(3);
    for (std::size_t i = 0; i < original.points.size(); ++i)
        CHECK(chordal_distance(lift(original.points[i], n),
                               lift(returned.points[i], n)) <= 1e-7);
}

TEST_CASE("cli gp-check verdicts map to exit codes") {
    AmbientDim n(2);
    std::string flat = path_in("cli_gp_flat.json");
    write_text_file(flat, write_points({pt({1, 0}), pt({0, 1}), pt({-1, 0}),
                                        pt({0, -1}), pt({0.3, 0.4})},
                                       n));
    std::string report = path_in("cli_gp_flat_report.json");
    CHECK(run_cli("gp-check " + flat + " --mode circular --out " + report) == 1);
    GPReportDoc doc = parse_gp_report(read_text_file(report));
    CHECK_FALSE(doc.report.verdict);
    REQUIRE(doc.report.witness.has_value());

    std::string good = path_in("cli_gp_good.json");
    REQUIRE(run_cli("generate gp-set --n 2 --count 6 --seed 4 --out " + good) == 0);
    CHECK(run_cli("gp-check " + good + " --mode spherical --out -") == 0);
    CHECK(run_cli("gp-check " + good + " --mode circular --out -") == 0);
}

TEST_CASE("cli input errors exit with code 2") {
    CHECK(run_cli("gp-check " + path_in("does_not_exist.json") +
                  " --mode circular") == 2);
    CHECK(run_cli("generate moebius-table --count 18") == 2);   // --n missing
    CHECK(run_cli("generate nonsense --n 3") == 2);             // unknown kind
    CHECK(run_cli("generate moebius-table --n 3 --count 3") == 2);  // too few rows

    std::string flat = path_in("cli_gp_flat2.json");
    write_text_file(flat, write_points({pt({1, 0})}, AmbientDim(2)));
    CHECK(run_cli("gp-check " + flat) == 2);  // --mode is required

    // apply with mismatched dimensions
    std::string table = path_in("cli_err_table.json");
    std::string map_path = path_in("cli_err_map.json");
    std::string pts2 = path_in("cli_err_pts.json");
    REQUIRE(run_cli("generate moebius-table --n 3 --count 14 --seed 8 --out " + table)
            == 0);
    REQUIRE(run_cli("recover " + table + " --out " + map_path) == 0);
    REQUIRE(run_cli("generate gp-set --n 2 --count 5 --seed 4 --out " + pts2) == 0);
    CHECK(run_cli("apply " + map_path + " " + pts2 + " --out -") == 2);

    // --n disagreeing with the file is refused
    CHECK(run_cli("gp-check " + pts2 + " --mode circular --n 5") == 2);
}

}  // TEST_SUITE
