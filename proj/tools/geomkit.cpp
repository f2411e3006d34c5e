#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "geomkit/generators.hpp"
#include "geomkit/io.hpp"

using namespace geomkit;

namespace {

constexpr std::uint64_t kFallbackSeed = 17;
constexpr long long kSubsetCap = 100000;

std::uint64_t default_seed() {
    const char* env = std::getenv("GEOM_KIT_SEED");
    if (!env) return kFallbackSeed;
    try {
        return std::stoull(env);
    } catch (const std::exception&) {
        throw ParseError("GEOM_KIT_SEED must be an unsigned integer", "environment");
    }
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path == "-")
        std::cout << text;
    else
        write_text_file(out_path, text);
}

void check_n_flag(int n_flag, AmbientDim n_doc) {
    if (n_flag != 0 && n_flag != n_doc.value())
        throw ParseError("--n " + std::to_string(n_flag) +
                             " disagrees with the file's n = " +
                             std::to_string(n_doc.value()),
                         "$.n");
}

int run_gp_check(const std::string& input, const std::string& mode, int n_flag,
                 const std::string& out_path, const Tolerances& tol) {
    PointsDoc doc = parse_points(read_text_file(input));
    check_n_flag(n_flag, doc.n);
    PointSet set = PointSet::from_extended(doc.points, doc.n, tol);
    GPMode gp_mode = mode == "circular" ? GPMode::circular : GPMode::spherical;
    GPReport report = gp_mode == GPMode::circular
                          ? circular_general_position(set, tol)
                          : spherical_general_position(set, tol);
    emit(out_path, write_gp_report(report, gp_mode, set.merged_count(), doc.n));
    return report.verdict ? 0 : 1;
}

int run_check(const std::string& input, bool wcp, int max_spheres, int samples,
              int n_flag, std::uint64_t seed, const std::string& out_path,
              const Tolerances& tol) {
    MapTable table = parse_table(read_text_file(input), tol);
    check_n_flag(n_flag, table.ambient());
    const int n = table.ambient().value();
    const int sphere_dim = wcp ? 1 : n - 1;
    if (samples == 0) samples = std::max(6, sphere_dim + 3);

    std::vector<KSphere> candidates = table_candidate_spheres(
        table, sphere_dim, std::max(sphere_dim + 3, samples), kSubsetCap, tol);
    if (candidates.empty()) {
        std::cerr << "error: no testable " << (wcp ? "circles" : "spheres")
                  << ": no " << sphere_dim << "-sphere spanned by table points carries "
                  << std::max(sphere_dim + 3, samples) << " of them\n";
        return 2;
    }
    if (static_cast<int>(candidates.size()) > max_spheres)
        candidates.erase(candidates.begin() + max_spheres, candidates.end());

    MapOracle oracle = MapOracle::from_table(table, tol);
    WcpReport report =
        wcp ? check_weakly_circle_preserving(oracle, candidates, samples, seed, tol)
            : check_weakly_sphere_preserving(oracle, candidates, samples, seed, tol);
    emit(out_path, write_check_report(report, wcp ? "wcp" : "wsp", table.ambient()));
    return report.verdict ? 0 : 1;
}

int run_recover(const std::string& input, const std::string& strategy, int n_flag,
                std::uint64_t seed, const std::string& out_path,
                const Tolerances& tol) {
    MapTable table = parse_table(read_text_file(input), tol);
    check_n_flag(n_flag, table.ambient());
    RecoveryResult result = recover_moebius(
        table,
        strategy == "chain" ? RecoveryStrategy::chain : RecoveryStrategy::direct, seed,
        tol);
    if (const auto* r = std::get_if<Recovered>(&result)) {
        emit(out_path, write_moebius(r->map));
        return 0;
    }
    emit(out_path, write_recovery_report(result, table.ambient()));
    return 1;
}

int run_apply(const std::string& map_path, const std::string& points_path, int n_flag,
              const std::string& out_path, const Tolerances& tol) {
    MoebiusMap map = parse_moebius(read_text_file(map_path), tol);
    PointsDoc doc = parse_points(read_text_file(points_path));
    check_n_flag(n_flag, map.ambient());
    if (map.ambient().value() != doc.n.value()) {
        std::cerr << "error: map is on S^" << map.ambient().value()
                  << " but points are on S^" << doc.n.value() << "\n";
        return 2;
    }
    std::vector<ExtendedPoint> images;
    images.reserve(doc.points.size());
    for (const auto& p : doc.points) images.push_back(apply(map, p, tol));
    emit(out_path, write_points(images, doc.n));
    return 0;
}

int run_generate(const std::string& kind, int n_flag, int count, int images,
                 std::uint64_t seed, const std::string& out_path,
                 const Tolerances& tol) {
    if (n_flag == 0) {
        std::cerr << "error: generate requires --n\n";
        return 2;
    }
    AmbientDim n(n_flag);
    Rng rng(seed);
    if (kind == "moebius-table") {
        if (count < structured_domain_minimum(n)) {
            std::cerr << "error: a recoverable table on S^" << n.value()
                      << " needs at least " << structured_domain_minimum(n)
                      << " samples (got " << count << ")\n";
            return 2;
        }
        MoebiusMap map = random_moebius(rng, n);
        emit(out_path, write_table(make_moebius_table(map, rng, count, tol)));
        return 0;
    }
    if (kind == "finite-image-table") {
        if (images < 1 || count < 8) {
            std::cerr << "error: finite-image-table needs --images >= 1 and "
                         "--count >= 8\n";
            return 2;
        }
        if (images > n.value() + 1)
            std::cerr << "note: with more than n+1 = " << n.value() + 1
                      << " images the table need not pass the sphere checks\n";
        std::vector<ExtendedPoint> image_list;
        for (int i = 0; i < images; ++i) image_list.push_back(random_finite_point(rng, n));
        MapOracle oracle =
            make_finite_image_oracle(std::move(image_list), rng.next_u64(), n);
        std::vector<ExtendedPoint> domain = make_finite_image_domain(rng, n, count, tol);
        emit(out_path, write_table(make_table(oracle, domain, n, tol)));
        return 0;
    }
    if (kind == "gp-set") {
        if (count < n.value() + 3) {
            std::cerr << "error: a set in spherical general position on S^" << n.value()
                      << " needs at least n+3 = " << n.value() + 3 << " points (got "
                      << count << ")\n";
            return 2;
        }
        PointSet set = random_gp_set(rng, n, count, tol);
        std::vector<ExtendedPoint> pts;
        pts.reserve(set.points().size());
        for (const auto& p : set.points()) pts.push_back(project(p, tol));
        emit(out_path, write_points(pts, n));
        return 0;
    }
    std::cerr << "error: unknown kind '" << kind
              << "' (expected moebius-table, finite-image-table or gp-set)\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"inversive geometry on the n-sphere: general-position checks, "
                 "weak circle/sphere preservation, Möbius map recovery"};
    app.require_subcommand(1);

    int n_flag = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    double tol_flag = 0.0;
    std::string out_path = "-";
    app.add_option("--n", n_flag, "ambient sphere dimension")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "RNG seed (default: GEOM_KIT_SEED or 17)")
        ->each([&](const std::string&) { seed_given = true; });
    app.add_option("--tol", tol_flag, "verification tolerance (eps_verify)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out_path, "output file, '-' for stdout");
    app.fallthrough();

    std::string input, mode = "circular", strategy = "direct", map_path, points_path,
                       kind;
    int max_spheres = 32, samples = 0, count = 40, images = 3;

    CLI::App* gp = app.add_subcommand("gp-check", "general-position check on a point set");
    gp->add_option("input", input, "points file")->required();
    gp->add_option("--mode", mode, "circular or spherical")
        ->check(CLI::IsMember({"circular", "spherical"}))
        ->required();

    CLI::App* wcp = app.add_subcommand("wcp-check", "weak circle preservation on a table");
    wcp->add_option("input", input, "table file")->required();
    wcp->add_option("--circles", max_spheres, "max candidate circles tested");
    wcp->add_option("--samples", samples, "query points per circle (default 6)");

    CLI::App* wsp =
        app.add_subcommand("wsp-check", "weak (n-1)-sphere preservation on a table");
    wsp->add_option("input", input, "table file")->required();
    wsp->add_option("--spheres", max_spheres, "max candidate spheres tested");
    wsp->add_option("--samples", samples,
                    "query points per sphere (default max(6, n+2))");

    CLI::App* rec = app.add_subcommand("recover", "recover the Möbius map behind a table");
    rec->add_option("input", input, "table file")->required();
    rec->add_option("--strategy", strategy, "direct or chain")
        ->check(CLI::IsMember({"direct", "chain"}));

    CLI::App* ap = app.add_subcommand("apply", "apply a map file to a points file");
    ap->add_option("map", map_path, "moebius file")->required();
    ap->add_option("points", points_path, "points file")->required();

    CLI::App* gen = app.add_subcommand(
        "generate", "emit a moebius-table, finite-image-table or gp-set");
    gen->add_option("kind", kind, "moebius-table, finite-image-table or gp-set")
        ->required();
    gen->add_option("--count", count, "points or table rows to generate");
    gen->add_option("--images", images, "image count for finite-image-table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!seed_given) seed = default_seed();
        Tolerances tol;
        if (tol_flag > 0) tol.eps_verify = tol_flag;
        tol.validate();
        if (gp->parsed()) return run_gp_check(input, mode, n_flag, out_path, tol);
        if (wcp->parsed())
            return run_check(input, true, max_spheres, samples, n_flag, seed, out_path,
                             tol);
        if (wsp->parsed())
            return run_check(input, false, max_spheres, samples, n_flag, seed, out_path,
                             tol);
        if (rec->parsed())
            return run_recover(input, strategy, n_flag, seed, out_path, tol);
        if (ap->parsed()) return run_apply(map_path, points_path, n_flag, out_path, tol);
        if (gen->parsed())
            return run_generate(kind, n_flag, count, images, seed, out_path, tol);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
