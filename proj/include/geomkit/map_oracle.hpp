#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "geomkit/moebius.hpp"

namespace geomkit {

struct MapPair {
    ExtendedPoint domain;
    ExtendedPoint image;
};

/// Finite sample of a map T: S^n -> S^n. Domain points are pairwise
/// distinct (a function has one value per point); duplicates throw.
class MapTable {
public:
    MapTable(std::vector<MapPair> pairs, AmbientDim n, const Tolerances& tol = {});

    const std::vector<MapPair>& pairs() const { return pairs_; }
    AmbientDim ambient() const { return n_; }
    int size() const { return static_cast<int>(pairs_.size()); }

    /// Canonical lifts, cached at construction, index-aligned with pairs().
    const std::vector<SpherePoint>& domain_lifts() const { return domain_lifts_; }
    const std::vector<SpherePoint>& image_lifts() const { return image_lifts_; }

private:
    std::vector<MapPair> pairs_;
    std::vector<SpherePoint> domain_lifts_;
    std::vector<SpherePoint> image_lifts_;
    AmbientDim n_;
};

/// Deterministic black-box map of S^n. Total oracles (exact Möbius
/// evaluation, finite-image rules) answer every query; table-backed oracles
/// throw NoDataError off their table and expose the queryable points via
/// known_domain().
class MapOracle {
public:
    using Fn = std::function<ExtendedPoint(const ExtendedPoint&)>;

    MapOracle(Fn fn, AmbientDim n, std::string kind,
              std::vector<ExtendedPoint> known_domain = {});

    static MapOracle from_moebius(const MoebiusMap& m, const Tolerances& tol = {});
    static MapOracle from_table(const MapTable& table, const Tolerances& tol = {});

    ExtendedPoint operator()(const ExtendedPoint& p) const { return fn_(p); }
    AmbientDim ambient() const { return n_; }
    const std::string& kind() const { return kind_; }

    /// Points guaranteed to answer; empty for total oracles.
    const std::vector<ExtendedPoint>& known_domain() const { return known_domain_; }
    bool is_total() const { return known_domain_.empty(); }

private:
    Fn fn_;
    AmbientDim n_;
    std::string kind_;
    std::vector<ExtendedPoint> known_domain_;
};

/// Total map whose image is the given finite list: each query is assigned an
/// image by hashing its canonical coordinates with the seed. Deterministic
/// across runs. With <= 3 images the result is weakly circle-preserving by
/// cardinality alone; with <= n+1 images, weakly sphere-preserving.
MapOracle make_finite_image_oracle(std::vector<ExtendedPoint> images,
                                   std::uint64_t assignment_seed, AmbientDim n);

/// Evaluates the oracle at each domain point. NoDataError propagates.
MapTable make_table(const MapOracle& oracle,
                    const std::vector<ExtendedPoint>& domain_points, AmbientDim n,
                    const Tolerances& tol = {});

}  // namespace geomkit
