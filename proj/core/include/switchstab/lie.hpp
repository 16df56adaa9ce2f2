#pragma once

#include <optional>
#include <string>
#include <vector>

#include "switchstab/matkit.hpp"

namespace swst {

/// The finite generating set {A_1,...,A_N} of real n-by-n matrices.
struct MatrixFamily {
    int n = 0;
    std::vector<Mat> mats;
    std::vector<std::string> labels;

    static MatrixFamily from(std::vector<Mat> ms, std::vector<std::string> names = {});
    int size() const { return static_cast<int>(mats.size()); }
    /// Convex combination sum_k alpha_k A_k.
    Mat mean(const std::vector<double>& alpha) const;
};

/// Positive probability vector (alpha_k > 0, sum = 1).
struct ProbabilityVector {
    std::vector<double> alpha;

    static ProbabilityVector from(std::vector<double> a);
    int size() const { return static_cast<int>(alpha.size()); }
    double operator[](int k) const { return alpha[static_cast<size_t>(k)]; }
};

/// Basis of the generated Lie algebra over C, closed under the bracket.
struct LieBasis {
    int n = 0;
    std::vector<CMat> basis;
    int generation_depth = 0;

    int dim() const { return static_cast<int>(basis.size()); }
};

/// Change of basis T making every T A_i T^-1 upper-triangular.
/// T is unitary by construction, so t_inv is its adjoint.
struct Triangularization {
    CMat t;
    CMat t_inv;
    std::vector<CMat> triangulars;
    std::vector<CVec> diag;  ///< diag[i](k) = tilde a_i^{kk}
};

/// Commutator AB - BA.
Mat bracket(const Mat& a, const Mat& b);
CMat bracket(const CMat& a, const CMat& b);

/// Smallest Lie algebra over C containing the family, by bracket closure.
LieBasis generate_lie_algebra(const MatrixFamily& fam, double indep_tol = 1e-9);

/// Dimensions of the derived series until it stabilizes or reaches zero.
std::vector<int> derived_series(const LieBasis& basis, double indep_tol = 1e-9);

struct SolvabilityResult {
    bool solvable = false;
    std::optional<int> ell;       ///< first l with zero derived algebra
    std::vector<int> series_dims; ///< reported so callers can judge marginal cases
};

SolvabilityResult is_solvable(const MatrixFamily& fam, double indep_tol = 1e-9);

/// Constructive simultaneous triangularization of a solvable family
/// (inductive common-eigenvector construction with unitary deflation).
/// Throws NotSolvable / NumericalBreakdown.
Triangularization simultaneous_triangularize(const MatrixFamily& fam,
                                             double eig_tol = 1e-7);

/// Wraps a user-supplied change of basis (for families triangularizable
/// beyond solvability). Validates the triangular structure.
Triangularization triangularization_from(const CMat& t,
                                         const MatrixFamily& fam,
                                         double tol = 1e-8);

struct ClosedFormExponents {
    std::vector<double> theta;  ///< theta_i = sum_j alpha_j Re(tilde a_j^{ii})
    double chi = 0.0;           ///< max_i theta_i
};

ClosedFormExponents closed_form_exponents(const Triangularization& tri,
                                          const ProbabilityVector& alpha);

/// True iff the averaged matrix sum_k alpha_k A_k is Hurwitz.
bool star_condition(const MatrixFamily& fam, const ProbabilityVector& alpha);

}  // namespace swst
