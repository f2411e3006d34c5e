#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace geomkit {

/// Deterministic random source. Wraps mt19937_64 but derives all variates
/// through fixed arithmetic (no std::*_distribution), so identical seeds give
/// identical streams on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in (0, 1).
    double uniform01() {
        while (true) {
            double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
            if (u > 0.0) return u;
        }
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(gen_() % span);
    }

    /// Standard normal via Box-Muller. One variate per call; the pair's
    /// second member is discarded to keep the stream position obvious.
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    Eigen::VectorXd normal_vector(int dim) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v[i] = normal();
        return v;
    }

    /// Uniform on the unit sphere of R^dim.
    Eigen::VectorXd unit_vector(int dim) {
        while (true) {
            Eigen::VectorXd v = normal_vector(dim);
            double norm = v.norm();
            if (norm > 1e-6) return v / norm;
        }
    }

    /// Derive an independent child stream; deterministic in (seed, salt).
    Rng fork(std::uint64_t salt) {
        std::uint64_t s = next_u64();
        return Rng(s ^ (salt * 0x9e3779b97f4a7c15ULL));
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace geomkit
