#pragma once

#include <string>
#include <vector>

#include "geomkit/ksphere.hpp"

namespace geomkit {

/// A Möbius transformation of S^n as a Lorentz-orthogonal matrix G acting
/// projectively on null rays: G^T J G = J with J = diag(1,...,1,-1).
///
/// G is stored in the orthochronous normalization (bottom-right entry
/// positive, so canonical rays map to the future cone). The projective
/// action is unchanged by a global sign, so this loses nothing.
class MoebiusMap {
public:
    static MoebiusMap identity(AmbientDim n);

    /// Validates ||G^T J G - J||_F <= eps_verify and fixes the sign.
    static MoebiusMap from_matrix(Eigen::MatrixXd g, AmbientDim n,
                                  std::string provenance = "matrix",
                                  const Tolerances& tol = {});

    /// Inversion in the Euclidean sphere S(center, radius). Involution.
    static MoebiusMap from_inversion(const Eigen::VectorXd& center, double radius,
                                     AmbientDim n);

    /// Reflection across the hyperplane <normal, x> = offset. Involution;
    /// fixes ∞. `normal` is normalized, `offset` rescaled to match.
    static MoebiusMap from_reflection(const Eigen::VectorXd& normal, double offset,
                                      AmbientDim n);

    const Eigen::MatrixXd& matrix() const { return g_; }
    AmbientDim ambient() const { return n_; }

    /// How the map was built ("inversion", "composition", "fit", ...).
    const std::string& provenance() const { return provenance_; }

private:
    MoebiusMap(Eigen::MatrixXd g, AmbientDim n, std::string provenance)
        : g_(std::move(g)), n_(n), provenance_(std::move(provenance)) {}

    Eigen::MatrixXd g_;
    AmbientDim n_;
    std::string provenance_;
};

/// compose(a, b) acts as a after b: apply(compose(a,b), p) = apply(a, apply(b, p)).
MoebiusMap compose(const MoebiusMap& a, const MoebiusMap& b);

/// Group inverse, J G^T J. No linear solve needed.
MoebiusMap inverse(const MoebiusMap& m);

SpherePoint apply(const MoebiusMap& m, const SpherePoint& p, const Tolerances& tol = {});

ExtendedPoint apply(const MoebiusMap& m, const ExtendedPoint& p, const Tolerances& tol = {});

/// Image sphere: the subspace G * W with dimension preserved.
KSphere apply_to_sphere(const MoebiusMap& m, const KSphere& s, const Tolerances& tol = {});

/// ||G^T J G - J||_F, the defect against the Lorentz condition.
double lorentz_residual(const Eigen::MatrixXd& g);

/// Newton iteration for the J-orthogonal polar factor, X <- (X + J X^-T J)/2,
/// quadratically convergent near the group. Used to project fitted or
/// rounding-drifted matrices back onto it; throws InconsistentDataError when
/// the iterate goes singular or the residual does not vanish.
Eigen::MatrixXd nearest_lorentz(Eigen::MatrixXd x, const Tolerances& tol = {});

struct Correspondence {
    ExtendedPoint source;
    ExtendedPoint target;
};

/// Result of the projective fit. `gap` is the ratio of the second-smallest
/// to largest singular value of the constraint matrix; a healthy problem has
/// a single vanishing singular value, so gap stays well above eps_rank.
struct DltFit {
    Eigen::MatrixXd g;    // J-orthogonal, orthochronous
    double max_residual;  // worst chordal residual over the input pairs
    int worst_index;
    double gap;
};

/// Fits G with G v_i proportional to w_i from canonical null vectors in R^N,
/// any N >= 3 (ambient fits use N = n+2, intrinsic sphere fits smaller N).
///
/// Method: each pair contributes the linear constraints
/// (I - w_i w_i^T) G v_i = 0; the stacked system has a one-dimensional
/// nullspace for >= N+1 pairs in general position. The nullspace vector is
/// scale-normalized through s = <G0^T J G0, J>_F / N and projected onto the
/// J-orthogonal matrices by Newton iteration X <- (X + J X^-T J) / 2.
///
/// Throws InsufficientDataError when the nullspace is not one-dimensional
/// (too few or degenerate pairs) and InconsistentDataError when the data
/// admits no Lorentz matrix within eps_verify (witness pair included).
DltFit fit_lorentz_dlt(const std::vector<Eigen::VectorXd>& sources,
                       const std::vector<Eigen::VectorXd>& targets,
                       const Tolerances& tol = {});

/// Ambient-space fit from point correspondences. Needs >= n+3 pairs with
/// sources in spherical general position; see fit_lorentz_dlt for errors.
MoebiusMap fit_from_correspondences(const std::vector<Correspondence>& pairs,
                                    AmbientDim n, const Tolerances& tol = {});

/// True iff the images of all witnesses agree within eps_verify (chordal).
bool maps_agree(const MoebiusMap& a, const MoebiusMap& b,
                const std::vector<ExtendedPoint>& witnesses,
                const Tolerances& tol = {});

/// A map spreading a chordally tight cluster out to unit scale (identity for
/// sets that are already spread, and always deterministic in the input).
/// Incidence predicates are Möbius-invariant, so rank decisions that drown
/// in rounding on a collapsed cluster can be made on the spread copy
/// instead. The construction tolerates a verification residual up to the
/// spread factor's own conditioning, so its provenance is "normalization".
MoebiusMap spreading_map(const std::vector<SpherePoint>& points, AmbientDim n,
                         const Tolerances& tol = {});

}  // namespace geomkit
