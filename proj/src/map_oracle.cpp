#include "geomkit/map_oracle.hpp"

#include <cstring>
#include <memory>

namespace geomkit {

namespace {

std::uint64_t fnv1a_mix(std::uint64_t h, std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
        h ^= (word >> (8 * b)) & 0xffu;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t hash_point(const SpherePoint& p, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a_mix(h, seed);
    for (int i = 0; i < p.vec().size(); ++i) {
        std::uint64_t bits;
        double x = p.vec()[i];
        std::memcpy(&bits, &x, sizeof bits);
        h = fnv1a_mix(h, bits);
    }
    return h;
}

}  // namespace

MapTable::MapTable(std::vector<MapPair> pairs, AmbientDim n, const Tolerances& tol)
    : pairs_(std::move(pairs)), n_(n) {
    domain_lifts_.reserve(pairs_.size());
    image_lifts_.reserve(pairs_.size());
    for (const auto& pr : pairs_) {
        if (!pr.domain.valid_for(n) || !pr.image.valid_for(n))
            throw DimensionMismatchError("MapTable: pair does not match ambient n");
        domain_lifts_.push_back(lift(pr.domain, n));
        image_lifts_.push_back(lift(pr.image, n));
    }
    for (std::size_t i = 0; i < domain_lifts_.size(); ++i)
        for (std::size_t j = i + 1; j < domain_lifts_.size(); ++j)
            if (same_point(domain_lifts_[i], domain_lifts_[j], tol))
                throw GeomError("MapTable: duplicate domain point at rows " +
                                std::to_string(i) + " and " + std::to_string(j));
}

MapOracle::MapOracle(Fn fn, AmbientDim n, std::string kind,
                     std::vector<ExtendedPoint> known_domain)
    : fn_(std::move(fn)), n_(n), kind_(std::move(kind)),
      known_domain_(std::move(known_domain)) {}

MapOracle MapOracle::from_moebius(const MoebiusMap& m, const Tolerances& tol) {
    return MapOracle(
        [m, tol](const ExtendedPoint& p) { return apply(m, p, tol); },
        m.ambient(), "moebius");
}

MapOracle MapOracle::from_table(const MapTable& table, const Tolerances& tol) {
    std::vector<ExtendedPoint> domain;
    domain.reserve(table.size());
    for (const auto& pr : table.pairs()) domain.push_back(pr.domain);
    AmbientDim n = table.ambient();
    return MapOracle(
        [table, n, tol](const ExtendedPoint& p) {
            SpherePoint q = lift(p, n);
            for (int i = 0; i < table.size(); ++i)
                if (same_point(q, table.domain_lifts()[i], tol))
                    return table.pairs()[i].image;
            throw NoDataError("table oracle: query off the tabulated domain");
        },
        n, "table", std::move(domain));
}

MapOracle make_finite_image_oracle(std::vector<ExtendedPoint> images,
                                   std::uint64_t assignment_seed, AmbientDim n) {
    if (images.empty())
        throw std::invalid_argument("make_finite_image_oracle: need at least one image");
    for (const auto& p : images)
        if (!p.valid_for(n))
            throw DimensionMismatchError("make_finite_image_oracle: image dimension mismatch");
    auto shared = std::make_shared<std::vector<ExtendedPoint>>(std::move(images));
    return MapOracle(
        [shared, assignment_seed, n](const ExtendedPoint& p) {
            std::uint64_t h = hash_point(lift(p, n), assignment_seed);
            return (*shared)[h % shared->size()];
        },
        n, "finite-image");
}

MapTable make_table(const MapOracle& oracle,
                    const std::vector<ExtendedPoint>& domain_points, AmbientDim n,
                    const Tolerances& tol) {
    std::vector<MapPair> pairs;
    pairs.reserve(domain_points.size());
    for (const auto& p : domain_points) pairs.push_back({p, oracle(p)});
    return MapTable(std::move(pairs), n, tol);
}

}  // namespace geomkit
