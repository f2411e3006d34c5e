#pragma once

#include <stdexcept>
#include <string>

namespace geomkit {

/// Ambient dimension n of the sphere S^n. All Lorentz-model vectors for a
/// computation live in R^{n+2}, with the quadratic form of signature (n+1, 1).
class AmbientDim {
public:
    explicit AmbientDim(int n) : n_(n) {
        if (n < 1) throw std::invalid_argument("AmbientDim: n must be >= 1");
    }
    int value() const { return n_; }
    int lorentz_dim() const { return n_ + 2; }

    friend bool operator==(AmbientDim a, AmbientDim b) { return a.n_ == b.n_; }
    friend bool operator!=(AmbientDim a, AmbientDim b) { return a.n_ != b.n_; }

private:
    int n_;
};

/// Relative tolerances shared by the geometry kernels. All are dimensionless;
/// vectors are normalized before any comparison against them.
struct Tolerances {
    double eps_null   = 1e-10;  // |Q(v)| <= eps_null for a unit null ray
    double eps_rank   = 1e-8;   // singular-value cutoff relative to sigma_max
    double eps_member = 1e-8;   // subspace membership residual / point identity
    double eps_verify = 1e-7;   // map verification residual (chordal)

    void validate() const {
        if (eps_null <= 0 || eps_rank <= 0 || eps_member <= 0 || eps_verify <= 0)
            throw std::invalid_argument("Tolerances: all must be strictly positive");
        if (eps_member < eps_null)
            throw std::invalid_argument("Tolerances: eps_member must be >= eps_null");
    }
};

class GeomError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A vector expected to represent a point of S^n is too far from the null cone.
class DegenerateRayError : public GeomError {
public:
    explicit DegenerateRayError(double q)
        : GeomError("degenerate ray: |Q(v)| = " + std::to_string(q) + " exceeds tolerance"),
          q_residual(q) {}
    double q_residual;
};

/// Not enough distinct points to span a sphere. Carries the observed rank.
class TooFewPointsError : public GeomError {
public:
    explicit TooFewPointsError(int rank)
        : GeomError("too few distinct points: span rank " + std::to_string(rank)),
          rank(rank) {}
    int rank;
};

/// A rank or signature decision fell inside the ambiguity band around the
/// tolerance. Carries the offending gap so callers can report it.
class IllConditionedError : public GeomError {
public:
    IllConditionedError(const std::string& what, double gap)
        : GeomError(what + " (gap " + std::to_string(gap) + ")"), gap(gap) {}
    double gap;
};

class InsufficientDataError : public GeomError {
public:
    using GeomError::GeomError;
};

/// Correspondence data admits no Lorentz-orthogonal map within tolerance.
class InconsistentDataError : public GeomError {
public:
    InconsistentDataError(const std::string& what, int witness_index, double residual)
        : GeomError(what), witness_index(witness_index), residual(residual) {}
    int witness_index;  // index of the worst-fitting pair, -1 if not applicable
    double residual;
};

/// A table-backed oracle was queried off its domain.
class NoDataError : public GeomError {
public:
    using GeomError::GeomError;
};

class DimensionMismatchError : public GeomError {
public:
    using GeomError::GeomError;
};

/// Brute-force guard tripped.
class TooLargeError : public GeomError {
public:
    using GeomError::GeomError;
};

/// Malformed or invalid input document. `where` is a key path into the file.
class ParseError : public GeomError {
public:
    ParseError(const std::string& what, const std::string& where)
        : GeomError(what + " at " + where), where(where) {}
    std::string where;
};

}  // namespace geomkit
