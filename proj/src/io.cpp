#include "geomkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace geomkit {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------- writing

std::string num(double v) {
    if (v == 0.0) return "0";  // canonical zero: "-0" would reparse as integer 0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out + "\"";
}

std::string num_array(const Eigen::VectorXd& v) {
    std::string out = "[";
    for (int i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += num(v[i]);
    }
    return out + "]";
}

std::string int_array(const std::vector<int>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out + "]";
}

std::string matrix_rows(const Eigen::MatrixXd& m) {
    std::string out = "[";
    for (int r = 0; r < m.rows(); ++r) {
        if (r) out += ",";
        out += num_array(m.row(r));
    }
    return out + "]";
}

std::string point_json(const ExtendedPoint& p) {
    return p.is_infinity() ? "\"inf\"" : num_array(p.coords());
}

std::string header(AmbientDim n, const char* kind) {
    return std::string("{\"version\":\"1\",\"n\":") + std::to_string(n.value()) +
           ",\"kind\":\"" + kind + "\"";
}

std::string ksphere_body(const KSphere& s) {
    return "{\"dim\":" + std::to_string(s.dim()) +
           ",\"basis\":" + matrix_rows(s.basis()) + "}";
}

const char* gp_mode_name(GPMode mode) {
    return mode == GPMode::circular ? "circular" : "spherical";
}

std::string gp_body(const GPReport& r, GPMode mode) {
    std::string out = "{\"mode\":\"";
    out += gp_mode_name(mode);
    out += "\",\"verdict\":";
    out += r.verdict ? "true" : "false";
    out += ",\"cardinality_ok\":";
    out += r.cardinality_ok ? "true" : "false";
    out += ",\"decisive_gap\":" + num(r.decisive_gap);
    if (r.witness) {
        out += ",\"witness\":{\"excluded\":" + int_array(r.witness->excluded) +
               ",\"sphere\":" + ksphere_body(r.witness->sphere) + "}";
    }
    return out + "}";
}

std::string moebius_body(const MoebiusMap& m) {
    return "{\"provenance\":" + quoted(m.provenance()) +
           ",\"matrix\":" + matrix_rows(m.matrix()) + "}";
}

// ---------------------------------------------------------------- parsing

[[noreturn]] void fail(const std::string& what, const std::string& where) {
    throw ParseError(what, where);
}

const json& field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(std::string("missing key '") + key + "'", where);
    return *it;
}

void only_keys(const json& obj, const std::string& where,
               std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail("expected an object", where);
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) fail("unknown key '" + it.key() + "'", where + "." + it.key());
    }
}

double num_at(const json& v, const std::string& where) {
    if (!v.is_number()) fail("expected a number", where);
    return v.get<double>();
}

long long int_at(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail("expected an integer", where);
    return v.get<long long>();
}

bool bool_at(const json& v, const std::string& where) {
    if (!v.is_boolean()) fail("expected a boolean", where);
    return v.get<bool>();
}

std::string str_at(const json& v, const std::string& where) {
    if (!v.is_string()) fail("expected a string", where);
    return v.get<std::string>();
}

ExtendedPoint point_at(const json& v, AmbientDim n, const std::string& where) {
    if (v.is_string()) {
        if (v.get<std::string>() != "inf")
            fail("expected a coordinate array or \"inf\"", where);
        return ExtendedPoint::infinity();
    }
    if (!v.is_array()) fail("expected a coordinate array or \"inf\"", where);
    if (static_cast<int>(v.size()) != n.value())
        fail("expected " + std::to_string(n.value()) + " coordinates", where);
    Eigen::VectorXd c(n.value());
    for (int i = 0; i < n.value(); ++i)
        c[i] = num_at(v[i], where + "[" + std::to_string(i) + "]");
    return ExtendedPoint::finite(std::move(c));
}

Eigen::MatrixXd matrix_at(const json& v, int rows, int cols, const std::string& where) {
    if (!v.is_array() || static_cast<int>(v.size()) != rows)
        fail("expected " + std::to_string(rows) + " rows", where);
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const std::string rw = where + "[" + std::to_string(r) + "]";
        const json& row = v[r];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            fail("expected " + std::to_string(cols) + " columns", rw);
        for (int c = 0; c < cols; ++c)
            m(r, c) = num_at(row[c], rw + "[" + std::to_string(c) + "]");
    }
    return m;
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(e.what(), "$");
    }
}

// Validates {"version","n","kind"} and returns n.
AmbientDim doc_header(const json& doc, const char* kind) {
    if (!doc.is_object()) fail("expected a JSON object", "$");
    if (str_at(field(doc, "version", "$"), "$.version") != "1")
        fail("unsupported version", "$.version");
    long long n = int_at(field(doc, "n", "$"), "$.n");
    if (n < 1) fail("n must be >= 1", "$.n");
    std::string k = str_at(field(doc, "kind", "$"), "$.kind");
    if (k != kind)
        fail(std::string("expected kind '") + kind + "', found '" + k + "'", "$.kind");
    return AmbientDim(static_cast<int>(n));
}

KSphere ksphere_at(const json& v, AmbientDim n, const std::string& where,
                   const Tolerances& tol) {
    only_keys(v, where, {"dim", "basis"});
    long long k = int_at(field(v, "dim", where), where + ".dim");
    if (k < 0 || k > n.value()) fail("sphere dimension out of range", where + ".dim");
    Eigen::MatrixXd basis =
        matrix_at(field(v, "basis", where), n.lorentz_dim(), static_cast<int>(k) + 2,
                  where + ".basis");
    try {
        KSphere s = KSphere::from_basis(std::move(basis), tol);
        if (s.dim() != k) fail("basis rank disagrees with dim", where);
        return s;
    } catch (const GeomError& e) {
        fail(e.what(), where + ".basis");
    }
}

GPMode gp_mode_at(const json& v, const std::string& where) {
    std::string s = str_at(v, where);
    if (s == "circular") return GPMode::circular;
    if (s == "spherical") return GPMode::spherical;
    fail("mode must be 'circular' or 'spherical'", where);
}

GPReport gp_body_at(const json& v, AmbientDim n, const std::string& where,
                    const Tolerances& tol, GPMode* mode_out) {
    only_keys(v, where, {"mode", "verdict", "cardinality_ok", "decisive_gap", "witness"});
    GPReport r;
    *mode_out = gp_mode_at(field(v, "mode", where), where + ".mode");
    r.verdict = bool_at(field(v, "verdict", where), where + ".verdict");
    r.cardinality_ok =
        bool_at(field(v, "cardinality_ok", where), where + ".cardinality_ok");
    r.decisive_gap = num_at(field(v, "decisive_gap", where), where + ".decisive_gap");
    if (v.contains("witness")) {
        const json& w = v["witness"];
        const std::string ww = where + ".witness";
        only_keys(w, ww, {"excluded", "sphere"});
        std::vector<int> excluded;
        const json& ex = field(w, "excluded", ww);
        if (!ex.is_array()) fail("expected an array", ww + ".excluded");
        for (std::size_t i = 0; i < ex.size(); ++i)
            excluded.push_back(static_cast<int>(
                int_at(ex[i], ww + ".excluded[" + std::to_string(i) + "]")));
        r.witness = GPWitness{ksphere_at(field(w, "sphere", ww), n, ww + ".sphere", tol),
                              std::move(excluded)};
    }
    return r;
}

MoebiusMap moebius_body_at(const json& v, AmbientDim n, const std::string& where,
                           const Tolerances& tol) {
    only_keys(v, where, {"provenance", "matrix"});
    std::string prov = str_at(field(v, "provenance", where), where + ".provenance");
    Eigen::MatrixXd m = matrix_at(field(v, "matrix", where), n.lorentz_dim(),
                                  n.lorentz_dim(), where + ".matrix");
    try {
        return MoebiusMap::from_matrix(std::move(m), n, std::move(prov), tol);
    } catch (const GeomError& e) {
        fail(e.what(), where + ".matrix");
    } catch (const std::invalid_argument& e) {
        fail(e.what(), where + ".matrix");
    }
}

}  // namespace

std::string write_points(const std::vector<ExtendedPoint>& points, AmbientDim n) {
    std::string out = header(n, "points") + ",\"points\":[";
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i) out += ",";
        out += point_json(points[i]);
    }
    return out + "]}\n";
}

std::string write_table(const MapTable& table) {
    std::string out = header(table.ambient(), "table") + ",\"pairs\":[";
    for (int i = 0; i < table.size(); ++i) {
        if (i) out += ",";
        out += "{\"domain\":" + point_json(table.pairs()[i].domain) +
               ",\"image\":" + point_json(table.pairs()[i].image) + "}";
    }
    return out + "]}\n";
}

std::string write_moebius(const MoebiusMap& map) {
    return header(map.ambient(), "moebius") +
           ",\"provenance\":" + quoted(map.provenance()) +
           ",\"matrix\":" + matrix_rows(map.matrix()) + "}\n";
}

std::string write_ksphere(const KSphere& s) {
    return header(AmbientDim(s.ambient_n()), "ksphere") +
           ",\"dim\":" + std::to_string(s.dim()) +
           ",\"basis\":" + matrix_rows(s.basis()) + "}\n";
}

std::string write_gp_report(const GPReport& report, GPMode mode, int merged_count,
                            AmbientDim n) {
    return header(n, "gp-report") + ",\"merged_count\":" + std::to_string(merged_count) +
           ",\"report\":" + gp_body(report, mode) + "}\n";
}

std::string write_check_report(const WcpReport& report, const std::string& mode,
                               AmbientDim n) {
    std::string out = header(n, "check-report") + ",\"mode\":" + quoted(mode) +
                      ",\"spheres_tested\":" + std::to_string(report.spheres_tested) +
                      ",\"spheres_skipped\":" + std::to_string(report.spheres_skipped) +
                      ",\"verdict\":" + (report.verdict ? "true" : "false") +
                      ",\"image_dims\":" + int_array(report.image_dims) +
                      ",\"failures\":[";
    for (std::size_t i = 0; i < report.failures.size(); ++i) {
        const SphereFailure& f = report.failures[i];
        if (i) out += ",";
        out += "{\"sphere_index\":" + std::to_string(f.sphere_index) +
               ",\"image_span_dim\":" + std::to_string(f.image_span_dim) +
               ",\"witness_points\":[";
        for (std::size_t j = 0; j < f.witness_points.size(); ++j) {
            if (j) out += ",";
            out += point_json(f.witness_points[j]);
        }
        out += "]}";
    }
    return out + "]}\n";
}

std::string write_hypotheses_report(const HypothesesReport& report, AmbientDim n) {
    std::string out = header(n, "hypotheses-report") + ",\"spherical_gp\":";
    out += report.spherical_gp ? "true" : "false";
    out += ",\"image_gp\":" + gp_body(report.image_gp, GPMode::spherical);
    out += ",\"witness_found\":";
    out += report.witness_found ? "true" : "false";
    if (report.witness_sphere)
        out += ",\"witness_sphere\":" + ksphere_body(*report.witness_sphere);
    out += ",\"witness_rows\":" + int_array(report.witness_rows);
    out += ",\"subsets_tried\":" + std::to_string(report.subsets_tried);
    out += ",\"search_capped\":";
    out += report.search_capped ? "true" : "false";
    out += ",\"reason\":" + quoted(report.reason);
    return out + "}\n";
}

std::string write_recovery_report(const RecoveryResult& result, AmbientDim n) {
    std::string out = header(n, "recovery-report") + ",\"outcome\":";
    if (const auto* r = std::get_if<Recovered>(&result)) {
        out += "\"recovered\",\"max_residual\":" + num(r->max_residual) +
               ",\"map\":" + moebius_body(r->map);
    } else if (const auto* h = std::get_if<HypothesesNotSatisfied>(&result)) {
        out += "\"hypotheses-not-satisfied\",\"reason\":" + quoted(h->reason);
    } else if (const auto* i = std::get_if<InconsistentData>(&result)) {
        out += "\"inconsistent-data\",\"witness_row\":" + std::to_string(i->witness_row) +
               ",\"residual\":" + num(i->residual) + ",\"detail\":" + quoted(i->detail);
    } else {
        out += "\"insufficient-data\",\"detail\":" +
               quoted(std::get<InsufficientData>(result).detail);
    }
    return out + "}\n";
}

PointsDoc parse_points(const std::string& text) {
    json doc = parse_text(text);
    AmbientDim n = doc_header(doc, "points");
    only_keys(doc, "$", {"version", "n", "kind", "points"});
    const json& pts = field(doc, "points", "$");
    if (!pts.is_array()) fail("expected an array", "$.points");
    std::vector<ExtendedPoint> out;
    out.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        out.push_back(point_at(pts[i], n, "$.points[" + std::to_string(i) + "]"));
    return PointsDoc{n, std::move(out)};
}

MapTable parse_table(const std::string& text, const Tolerances& tol) {
    json doc = parse_text(text);
    AmbientDim n = doc_header(doc, "table");
    only_keys(doc, "$", {"version", "n", "kind", "pairs"});
    const json& pairs = field(doc, "pairs", "$");
    if (!pairs.is_array()) fail("expected an array", "$.pairs");
    std::vector<MapPair> out;
    out.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const std::string where = "$.pairs[" + std::to_string(i) + "]";
        only_keys(pairs[i], where, {"domain", "image"});
        out.push_back(MapPair{point_at(field(pairs[i], "domain", where), n,
                                       where + ".domain"),
                              point_at(field(pairs[i], "image", where), n,
                                       where + ".image")});
    }
    try {
        return MapTable(std::move(out), n, tol);
    } catch (const GeomError& e) {
        fail(e.what(), "$.pairs");
    }
}

MoebiusMap parse_moebius(const std::string& text, const Tolerances& tol) {
    json doc = parse_text(text);
    AmbientDim n = doc_header(doc, "moebius");
    only_keys(doc, "$", {"version", "n", "kind", "provenance", "matrix"});
    std::string prov = str_at(field(doc, "provenance", "$"), "$.provenance");
    Eigen::MatrixXd m =
        matrix_at(field(doc, "matrix", "$"), n.lorentz_dim(), n.lorentz_dim(),
                  "$.matrix");
    try {
        return MoebiusMap::from_matrix(std::move(m), n, std::move(prov), tol);
    } catch (const GeomError& e) {
        fail(e.what(), "$.matrix");
    }
}

KSphere parse_ksphere(const std::string& text, const Tolerances& tol) {
    json doc = parse_text(text);
    AmbientDim n = doc_header(doc, "ksphere");
    only_keys(doc, "$", {"version", "n", "kind", "dim", "basis"});
    long long k = int_at(field(doc, "dim", "$"), "$.dim");
    if (k < 0 || k > n.value()) fail("sphere dimension out of range", "$.dim");
    Eigen::MatrixXd basis = matrix_at(field(doc, "basis", "$"), n.lorentz_dim(),
                                      static_cast<int>(k) + 2, "$.basis");
    try {
        KSphere s = KSphere::from_basis(std::move(basis), tol);
        if (s.dim() != k) fail("basis rank disagrees with dim", "$");
        return s;
    } catch (const GeomError& e) {
        fail(e.what(), "$.basis");
    }
}

GPReportDoc parse_gp_report(const std::string& text, const Tolerances& tol) {
    json doc = parse_text(text);
    AmbientDim n = doc_header(doc, "gp-report");
    only_keys(doc, "$", {"version", "n", "kind", "merged_count", "report"});
    int merged =
        static_cast<int>(int_at(field(doc, "merged_count", "$"), "$.merged_count"));
    GPMode mode = GPMode::circular;
    GPReport report = gp_body_at(field(doc, "report", "$"), n, "$.report", tol, &mode);
    return GPReportDoc{n, mode, merged, std::move(report)};
}

CheckReportDoc parse_check_report(const std::string& text, const Tolerances& tol) {
    json doc = parse_text(text);
    AmbientDim n = doc_header(doc, "check-report");
    only_keys(doc, "$",
              {"version", "n", "kind", "mode", "spheres_tested", "spheres_skipped",
               "verdict", "image_dims", "failures"});
    std::string mode = str_at(field(doc, "mode", "$"), "$.mode");
    if (mode != "wcp" && mode != "wsp" && mode != "collapse")
        fail("mode must be 'wcp', 'wsp' or 'collapse'", "$.mode");
    WcpReport r;
    r.spheres_tested =
        static_cast<int>(int_at(field(doc, "spheres_tested", "$"), "$.spheres_tested"));
    r.spheres_skipped = static_cast<int>(
        int_at(field(doc, "spheres_skipped", "$"), "$.spheres_skipped"));
    r.verdict = bool_at(field(doc, "verdict", "$"), "$.verdict");
    const json& dims = field(doc, "image_dims", "$");
    if (!dims.is_array()) fail("expected an array", "$.image_dims");
    for (std::size_t i = 0; i < dims.size(); ++i)
        r.image_dims.push_back(static_cast<int>(
            int_at(dims[i], "$.image_dims[" + std::to_string(i) + "]")));
    const json& fails = field(doc, "failures", "$");
    if (!fails.is_array()) fail("expected an array", "$.failures");
    for (std::size_t i = 0; i < fails.size(); ++i) {
        const std::string where = "$.failures[" + std::to_string(i) + "]";
        only_keys(fails[i], where, {"sphere_index", "image_span_dim", "witness_points"});
        SphereFailure f;
        f.sphere_index = static_cast<int>(
            int_at(field(fails[i], "sphere_index", where), where + ".sphere_index"));
        f.image_span_dim = static_cast<int>(int_at(
            field(fails[i], "image_span_dim", where), where + ".image_span_dim"));
        const json& wp = field(fails[i], "witness_points", where);
        if (!wp.is_array()) fail("expected an array", where + ".witness_points");
        for (std::size_t j = 0; j < wp.size(); ++j)
            f.witness_points.push_back(point_at(
                wp[j], n, where + ".witness_points[" + std::to_string(j) + "]"));
        r.failures.push_back(std::move(f));
    }
    (void)tol;
    return CheckReportDoc{n, std::move(mode), std::move(r)};
}

HypothesesDoc parse_hypotheses_report(const std::string& text, const Tolerances& tol) {
    json doc = parse_text(text);
    AmbientDim n = doc_header(doc, "hypotheses-report");
    only_keys(doc, "$",
              {"version", "n", "kind", "spherical_gp", "image_gp", "witness_found",
               "witness_sphere", "witness_rows", "subsets_tried", "search_capped",
               "reason"});
    HypothesesReport r;
    r.spherical_gp = bool_at(field(doc, "spherical_gp", "$"), "$.spherical_gp");
    GPMode mode = GPMode::spherical;
    r.image_gp = gp_body_at(field(doc, "image_gp", "$"), n, "$.image_gp", tol, &mode);
    r.witness_found = bool_at(field(doc, "witness_found", "$"), "$.witness_found");
    if (doc.contains("witness_sphere"))
        r.witness_sphere = ksphere_at(doc["witness_sphere"], n, "$.witness_sphere", tol);
    const json& rows = field(doc, "witness_rows", "$");
    if (!rows.is_array()) fail("expected an array", "$.witness_rows");
    for (std::size_t i = 0; i < rows.size(); ++i)
        r.witness_rows.push_back(static_cast<int>(
            int_at(rows[i], "$.witness_rows[" + std::to_string(i) + "]")));
    r.subsets_tried = int_at(field(doc, "subsets_tried", "$"), "$.subsets_tried");
    r.search_capped = bool_at(field(doc, "search_capped", "$"), "$.search_capped");
    r.reason = str_at(field(doc, "reason", "$"), "$.reason");
    return HypothesesDoc{n, std::move(r)};
}

RecoveryDoc parse_recovery_report(const std::string& text, const Tolerances& tol) {
    json doc = parse_text(text);
    AmbientDim n = doc_header(doc, "recovery-report");
    std::string outcome = str_at(field(doc, "outcome", "$"), "$.outcome");
    if (outcome == "recovered") {
        only_keys(doc, "$", {"version", "n", "kind", "outcome", "max_residual", "map"});
        double res = num_at(field(doc, "max_residual", "$"), "$.max_residual");
        MoebiusMap map = moebius_body_at(field(doc, "map", "$"), n, "$.map", tol);
        return RecoveryDoc{n, Recovered{std::move(map), res}};
    }
    if (outcome == "hypotheses-not-satisfied") {
        only_keys(doc, "$", {"version", "n", "kind", "outcome", "reason"});
        return RecoveryDoc{
            n, HypothesesNotSatisfied{str_at(field(doc, "reason", "$"), "$.reason")}};
    }
    if (outcome == "inconsistent-data") {
        only_keys(doc, "$",
                  {"version", "n", "kind", "outcome", "witness_row", "residual",
                   "detail"});
        InconsistentData d;
        d.witness_row =
            static_cast<int>(int_at(field(doc, "witness_row", "$"), "$.witness_row"));
        d.residual = num_at(field(doc, "residual", "$"), "$.residual");
        d.detail = str_at(field(doc, "detail", "$"), "$.detail");
        return RecoveryDoc{n, std::move(d)};
    }
    if (outcome == "insufficient-data") {
        only_keys(doc, "$", {"version", "n", "kind", "outcome", "detail"});
        return RecoveryDoc{
            n, InsufficientData{str_at(field(doc, "detail", "$"), "$.detail")}};
    }
    fail("unknown outcome '" + outcome + "'", "$.outcome");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text).flush())
        throw GeomError("cannot write file: " + path);
}

}  // namespace geomkit
