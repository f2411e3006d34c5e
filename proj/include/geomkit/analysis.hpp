#pragma once

#include <optional>
#include <variant>

#include "geomkit/general_position.hpp"
#include "geomkit/map_oracle.hpp"

namespace geomkit {

struct SphereFailure {
    int sphere_index;                           // into the tested list
    int image_span_dim;                         // exceeded the allowed bound
    std::vector<ExtendedPoint> witness_points;  // queried domain points
};

/// Outcome of a weak-preservation sweep. The verdict certifies only the
/// spheres actually tested: passing says no tested sphere broke the bound.
struct WcpReport {
    int spheres_tested = 0;
    int spheres_skipped = 0;  // table-backed oracle had too little data
    bool verdict = true;      // false iff failures nonempty
    std::vector<SphereFailure> failures;
    std::vector<int> image_dims;  // per tested sphere, report order
};

/// Weak circle preservation over the given circles: for each, query
/// samples_per_circle points (table-known points on the circle first, then
/// sphere samples) and test that the image span has dimension <= 1.
/// Spheres the oracle cannot answer enough queries on are skipped and
/// counted. Requires every input to be a circle and samples_per_circle >= 4
/// (any 3 images are concircular for free).
WcpReport check_weakly_circle_preserving(const MapOracle& oracle,
                                         const std::vector<KSphere>& circles,
                                         int samples_per_circle, std::uint64_t seed,
                                         const Tolerances& tol = {});

/// Same sweep for (n-1)-spheres with image span bound n-1 and
/// samples_per_sphere >= n+2.
WcpReport check_weakly_sphere_preserving(const MapOracle& oracle,
                                         const std::vector<KSphere>& spheres,
                                         int samples_per_sphere, std::uint64_t seed,
                                         const Tolerances& tol = {});

/// Image span bound k over random k-spheres, 1 <= k <= n-1. For a weakly
/// sphere-preserving map with full-dimensional image this is expected to
/// pass for every k.
WcpReport check_k_sphere_collapse(const MapOracle& oracle, int k, int trials,
                                  std::uint64_t seed, const Tolerances& tol = {});

/// Spheres of the given dimension spanned by subsets of the table's domain
/// and incident to at least min_incident domain points, deduplicated, in
/// lexicographic subset order. A table-backed sweep is only meaningful on
/// such spheres. Enumeration stops after `cap` subsets.
std::vector<KSphere> table_candidate_spheres(const MapTable& table, int sphere_dim,
                                             int min_incident, long long cap,
                                             const Tolerances& tol = {});

/// Both preconditions the recovery pipeline needs, checked against a table:
/// (a) the deduplicated image set is in spherical general position;
/// (b) some 2-sphere spanned by 4 domain points carries >= 5 table rows
///     whose images are in circular general position.
/// Image-side decisions run on a spread-normalized copy of the images (the
/// predicates are Möbius-invariant), so image_gp and any witness it names
/// live in those coordinates.
struct HypothesesReport {
    bool spherical_gp = false;
    GPReport image_gp;                      // underlying report for (a)
    bool witness_found = false;             // (b)
    std::optional<KSphere> witness_sphere;  // domain 2-sphere for (b)
    std::vector<int> witness_rows;          // table rows incident to it
    long long subsets_tried = 0;
    bool search_capped = false;  // fell back to random 4-subsets
    std::string reason;          // names the failing hypothesis; empty if both hold
};

HypothesesReport verify_hypotheses(const MapTable& table, std::uint64_t seed,
                                   const Tolerances& tol = {});

struct Recovered {
    MoebiusMap map;
    double max_residual;  // worst chordal residual over all table pairs
};
struct HypothesesNotSatisfied {
    std::string reason;
};
struct InconsistentData {
    int witness_row;  // table row with the largest residual, -1 if none
    double residual;
    std::string detail;
};
struct InsufficientData {
    std::string detail;
};

using RecoveryResult =
    std::variant<Recovered, HypothesesNotSatisfied, InconsistentData, InsufficientData>;

enum class RecoveryStrategy { direct, chain };

/// Recovers the Möbius map behind a table, or explains why there is none.
///
/// direct: verify hypotheses, fit on a spread-maximizing (n+3)-row subset,
/// verify against every table row.
///
/// chain: establish the map on the witness 2-sphere in the five-point
/// regime, then extend through nested spheres of growing dimension. Each
/// extension needs two or more table images off the current image span;
/// when no extension has them, the hypotheses are reported unsatisfied.
/// The final map is verified against every table row. Both strategies agree
/// on all table domain points whenever both return Recovered.
RecoveryResult recover_moebius(const MapTable& table, RecoveryStrategy strategy,
                               std::uint64_t seed, const Tolerances& tol = {});

/// Five-point regime on its own: the table's domain must span exactly a
/// 2-sphere, and its images must be >= 5 distinct points in circular general
/// position. Returns the ambient map restricted from the fitted
/// sphere-to-sphere one.
RecoveryResult five_point_recover_s2(const MapTable& table, const Tolerances& tol = {});

}  // namespace geomkit
