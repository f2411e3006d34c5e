#pragma once

#include <string>
#include <vector>

#include "geomkit/analysis.hpp"

namespace geomkit {

/// Document writers. Hand-rolled on purpose: fixed key order and %.17g
/// numbers make identical invocations byte-identical, and 17 significant
/// digits round-trip IEEE doubles exactly. Every document carries
/// {"version":"1","n":...,"kind":...}; the point at infinity is the literal
/// string "inf" in place of its coordinate array.
std::string write_points(const std::vector<ExtendedPoint>& points, AmbientDim n);
std::string write_table(const MapTable& table);
std::string write_moebius(const MoebiusMap& map);
std::string write_ksphere(const KSphere& s);
std::string write_gp_report(const GPReport& report, GPMode mode, int merged_count,
                            AmbientDim n);
std::string write_check_report(const WcpReport& report, const std::string& mode,
                               AmbientDim n);
std::string write_hypotheses_report(const HypothesesReport& report, AmbientDim n);
std::string write_recovery_report(const RecoveryResult& result, AmbientDim n);

struct PointsDoc {
    AmbientDim n;
    std::vector<ExtendedPoint> points;
};
struct GPReportDoc {
    AmbientDim n;
    GPMode mode;
    int merged_count;
    GPReport report;
};
struct CheckReportDoc {
    AmbientDim n;
    std::string mode;  // "wcp", "wsp" or "collapse"
    WcpReport report;
};
struct HypothesesDoc {
    AmbientDim n;
    HypothesesReport report;
};
struct RecoveryDoc {
    AmbientDim n;
    RecoveryResult result;
};

/// Strict parsers: wrong types, missing fields and unknown keys all throw
/// ParseError carrying the JSON path of the offender. Values are validated
/// by the same constructors the library uses (a parsed Möbius matrix must
/// satisfy the Lorentz condition, a parsed basis must span a sphere, ...).
PointsDoc parse_points(const std::string& text);
MapTable parse_table(const std::string& text, const Tolerances& tol = {});
MoebiusMap parse_moebius(const std::string& text, const Tolerances& tol = {});
KSphere parse_ksphere(const std::string& text, const Tolerances& tol = {});
GPReportDoc parse_gp_report(const std::string& text, const Tolerances& tol = {});
CheckReportDoc parse_check_report(const std::string& text, const Tolerances& tol = {});
HypothesesDoc parse_hypotheses_report(const std::string& text,
                                      const Tolerances& tol = {});
RecoveryDoc parse_recovery_report(const std::string& text, const Tolerances& tol = {});

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace geomkit
