#pragma once

#include <optional>
#include <vector>

#include "geomkit/ksphere.hpp"

namespace geomkit {

/// Finite set of pairwise-distinct points of S^n. Duplicates (within
/// eps_member) are merged at construction and the merge count kept.
class PointSet {
public:
    PointSet(std::vector<SpherePoint> points, AmbientDim n, const Tolerances& tol = {});

    static PointSet from_extended(const std::vector<ExtendedPoint>& points,
                                  AmbientDim n, const Tolerances& tol = {});

    const std::vector<SpherePoint>& points() const { return points_; }
    AmbientDim ambient() const { return n_; }
    int size() const { return static_cast<int>(points_.size()); }
    int merged_count() const { return merged_; }

private:
    std::vector<SpherePoint> points_;
    AmbientDim n_;
    int merged_;
};

struct GPWitness {
    KSphere sphere;              // the sphere excluding at most one point
    std::vector<int> excluded;   // indices (into the set) off that sphere, <= 1
};

/// Outcome of a general-position check. The verdict certifies only the
/// supplied finite set; for a sampled map image it says nothing about
/// unsampled points. decisive_gap is the scaled singular value at the rank
/// decision closest to the threshold (below eps_rank for the failing subset,
/// above it for every subset when the verdict is true).
struct GPReport {
    bool verdict = false;
    bool cardinality_ok = false;
    std::optional<GPWitness> witness;  // present iff verdict is false
    double decisive_gap = 0.0;
};

/// Circular general position: every circle leaves out at least two points.
/// Exact finite reduction: fails iff |B| <= 3 or some subset of size
/// >= |B|-1 (the whole set or a leave-one-out) is concircular.
GPReport circular_general_position(const PointSet& b, const Tolerances& tol = {});

/// Spherical general position: every (n-1)-sphere leaves out at least two
/// points. Fails iff |B| <= n+2 or some subset of size >= |B|-1 spans
/// dimension <= n-1. cardinality_ok reports |B| >= n+3, the minimum any
/// set in spherical general position must have.
GPReport spherical_general_position(const PointSet& b, const Tolerances& tol = {});

enum class GPMode { circular, spherical };

/// Definition-driven cross-check: enumerates every sphere spanned by a
/// minimal subset (3-subsets for circles, (n+1)-subsets for (n-1)-spheres),
/// counts incidences over the whole set, and fails on any sphere covering
/// all but at most one point. Guarded to |B| <= 12; throws TooLargeError.
GPReport brute_force_gp_oracle(const PointSet& b, GPMode mode,
                               const Tolerances& tol = {});

}  // namespace geomkit
