#include "switchstab/lie.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace swst {

MatrixFamily MatrixFamily::from(std::vector<Mat> ms, std::vector<std::string> names) {
    if (ms.empty()) throw ScenarioError("matrix family must contain at least one matrix");
    const int n = static_cast<int>(ms.front().rows());
    for (const auto& m : ms) {
        if (m.rows() != n || m.cols() != n)
            throw ScenarioError("matrix family entries must all be square of the same size");
        require_finite(m, "family matrix");
    }
    if (!names.empty() && names.size() != ms.size())
        throw ScenarioError("label count does not match matrix count");
    if (names.empty())
        for (size_t k = 0; k < ms.size(); ++k)
            names.push_back("A" + std::to_string(k + 1));
    return MatrixFamily{n, std::move(ms), std::move(names)};
}

Mat MatrixFamily::mean(const std::vector<double>& alpha) const {
    if (static_cast<int>(alpha.size()) != size())
        throw ScenarioError("probability vector length does not match family size");
    Mat acc = Mat::Zero(n, n);
    for (size_t k = 0; k < mats.size(); ++k) acc += alpha[k] * mats[k];
    return acc;
}

ProbabilityVector ProbabilityVector::from(std::vector<double> a) {
    if (a.empty()) throw ScenarioError("probability vector is empty");
    double sum = 0.0;
    for (double x : a) {
        if (!(x > 0.0)) throw ScenarioError("probability vector entries must be positive");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ScenarioError("probability vector must sum to 1");
    return ProbabilityVector{std::move(a)};
}

Mat bracket(const Mat& a, const Mat& b) { return a * b - b * a; }
CMat bracket(const CMat& a, const CMat& b) { return a * b - b * a; }

namespace {

CVec vectorize(const CMat& m) {
    return Eigen::Map<const CVec>(m.data(), m.size());
}

CMat unvectorize(const CVec& v, int n) {
    return Eigen::Map<const CMat>(v.data(), n, n);
}

// Orthonormal span of vectorized matrices. Inputs are normalized before the
// independence test (angle-based); inputs below the absolute gate are treated
// as roundoff and rejected, so tiny genuine brackets still count while
// numerically zero ones do not.
class SpanBasis {
public:
    explicit SpanBasis(double tol) : tol_(tol) {}

    bool try_add(const CMat& m) {
        CVec v = vectorize(m);
        const double norm = v.norm();
        if (norm <= tol_) return false;
        v /= norm;
        CVec r = project_out(v);
        r = project_out(r);  // re-orthogonalize
        if (r.norm() > tol_) {
            ortho_.emplace_back(r / r.norm());
            return true;
        }
        return false;
    }

    int dim() const { return static_cast<int>(ortho_.size()); }

    /// The orthonormal element created by the last successful try_add.
    CMat last(int n) const { return unvectorize(ortho_.back(), n); }

    std::vector<CMat> matrices(int n) const {
        std::vector<CMat> out;
        out.reserve(ortho_.size());
        for (const auto& v : ortho_) out.push_back(unvectorize(v, n));
        return out;
    }

private:
    CVec project_out(CVec v) const {
        for (const auto& o : ortho_) v -= o.dot(v) * o;
        return v;
    }

    double tol_;
    std::vector<CVec> ortho_;
};

std::vector<CMat> derived_span(const std::vector<CMat>& basis, int n, double tol) {
    SpanBasis span(tol);
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i + 1; j < basis.size(); ++j)
            span.try_add(bracket(basis[i], basis[j]));
    return span.matrices(n);
}

// Bracket closure over an orthonormalized basis; terminates by the n^2
// dimension bound. Returns the orthonormal basis and the generation depth.
std::pair<std::vector<CMat>, int> close_under_bracket(const std::vector<CMat>& gens,
                                                      int n, double tol) {
    SpanBasis span(tol);
    std::vector<CMat> basis;
    for (const auto& g : gens)
        if (span.try_add(g)) basis.push_back(span.last(n));
    int depth = 0;
    size_t frontier_begin = 0;
    while (frontier_begin < basis.size()) {
        const size_t frontier_end = basis.size();
        bool grew = false;
        for (size_t i = frontier_begin; i < frontier_end; ++i) {
            for (size_t j = 0; j < frontier_end; ++j) {
                if (i == j) continue;
                if (span.try_add(bracket(basis[i], basis[j]))) {
                    basis.push_back(span.last(n));
                    grew = true;
                }
            }
        }
        if (grew) ++depth;
        frontier_begin = frontier_end;
    }
    return {std::move(basis), depth};
}

}  // namespace

LieBasis generate_lie_algebra(const MatrixFamily& fam, double indep_tol) {
    std::vector<CMat> gens;
    gens.reserve(fam.mats.size());
    for (const auto& a : fam.mats) gens.push_back(a.cast<Complex>());
    auto [basis, depth] = close_under_bracket(gens, fam.n, indep_tol);
    return LieBasis{fam.n, std::move(basis), depth};
}

std::vector<int> derived_series(const LieBasis& basis, double indep_tol) {
    std::vector<int> dims;
    std::vector<CMat> cur = basis.basis;
    {
        // normalize the starting span in case callers pass a dependent set
        SpanBasis span(indep_tol);
        for (const auto& m : cur) span.try_add(m);
        cur = span.matrices(basis.n);
    }
    dims.push_back(static_cast<int>(cur.size()));
    while (!cur.empty()) {
        std::vector<CMat> next = derived_span(cur, basis.n, indep_tol);
        dims.push_back(static_cast<int>(next.size()));
        if (next.size() == cur.size()) break;  // stabilized nonzero
        cur = std::move(next);
    }
    return dims;
}

SolvabilityResult is_solvable(const MatrixFamily& fam, double indep_tol) {
    LieBasis basis = generate_lie_algebra(fam, indep_tol);
    std::vector<int> dims = derived_series(basis, indep_tol);
    SolvabilityResult res;
    res.series_dims = dims;
    if (dims.back() == 0) {
        res.solvable = true;
        res.ell = static_cast<int>(dims.size()) - 1;
    }
    return res;
}

namespace {

// Null directions of the stacked matrix, with an absolute threshold scaled
// by the input magnitude (eigenspace intersection, not rank detection).
std::vector<CVec> small_singular_directions(const CMat& m, double threshold) {
    Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    std::vector<CVec> out;
    // columns of V past the singular-value count are exact null directions
    for (Eigen::Index i = 0; i < svd.matrixV().cols(); ++i)
        if (i >= sv.size() || sv(i) <= threshold)
            out.emplace_back(svd.matrixV().col(i));
    return out;
}

// Orthonormal basis of span(w) ∩ span(e): null directions of [w | -e] give
// coefficient pairs (x, y) with w x = e y.
CMat subspace_intersection(const CMat& w, const CMat& e, double tol) {
    CMat stacked(w.rows(), w.cols() + e.cols());
    stacked << w, -e;
    std::vector<CVec> null = small_singular_directions(stacked, tol);
    if (null.empty()) return CMat(w.rows(), 0);
    CMat cand(w.rows(), static_cast<Eigen::Index>(null.size()));
    for (size_t i = 0; i < null.size(); ++i)
        cand.col(static_cast<Eigen::Index>(i)) = w * null[i].head(w.cols());
    Eigen::HouseholderQR<CMat> fac(cand);
    CMat q = fac.householderQ() * CMat::Identity(w.rows(), cand.cols());
    // drop columns whose preimage degenerated to ~0
    Eigen::Index keep = 0;
    for (Eigen::Index i = 0; i < cand.cols(); ++i)
        if (std::abs(fac.matrixQR()(i, i)) > tol) ++keep;
    return q.leftCols(keep);
}

// Backtracking search: a unit vector in span(w) that is an eigenvector of
// every matrix in mats[idx..]. Branches over eigenvalue clusters of
// mats[idx]; each branch intersects w with the matching eigenspace.
bool common_eigenvector_search(const std::vector<CMat>& mats, size_t idx,
                               const CMat& w, double tol, CVec& out) {
    if (w.cols() == 0) return false;
    if (idx == mats.size()) {
        out = w.col(0);
        return true;
    }
    const CMat& a = mats[idx];
    const int n = static_cast<int>(a.rows());
    const double scale = std::max(a.norm(), 1.0);

    Eigen::ComplexEigenSolver<CMat> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NoConvergence("common_eigenvector: eigen solve failed");

    // cluster nearby eigenvalues so near-degenerate spectra branch once
    std::vector<Complex> reps;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex lam = es.eigenvalues()(i);
        bool merged = false;
        for (const Complex& r : reps)
            if (std::abs(lam - r) < 0.5 * tol * scale) merged = true;
        if (!merged) reps.push_back(lam);
    }

    for (const Complex& lam : reps) {
        std::vector<CVec> dirs = small_singular_directions(
            a - lam * CMat::Identity(n, n), tol * scale);
        if (dirs.empty()) continue;
        CMat e(n, static_cast<Eigen::Index>(dirs.size()));
        for (size_t i = 0; i < dirs.size(); ++i)
            e.col(static_cast<Eigen::Index>(i)) = dirs[i];
        CMat next = subspace_intersection(w, e, tol);
        if (common_eigenvector_search(mats, idx + 1, next, tol, out)) return true;
    }
    return false;
}

// Common eigenvector of the family generators. One exists whenever the
// generated algebra is solvable, and it is automatically an eigenvector of
// the whole algebra (brackets annihilate it).
CVec common_eigenvector(const std::vector<CMat>& mats, int n, double tol) {
    if (mats.empty()) {
        CVec e = CVec::Zero(n);
        e(0) = 1.0;
        return e;
    }
    CVec v;
    if (!common_eigenvector_search(mats, 0, CMat::Identity(n, n), tol, v))
        throw NumericalBreakdown("no common eigenvector survived tolerance");
    return v.normalized();
}

// Unitary matrix whose first column is the given unit vector.
CMat unitary_with_first_column(const CVec& v) {
    const auto n = v.size();
    Eigen::HouseholderQR<CMat> fac(v);
    CMat q = fac.householderQ() * CMat::Identity(n, n);
    const Complex r = fac.matrixQR()(0, 0);  // |r| = 1 since v is unit
    q.col(0) *= r;
    return q;
}

}  // namespace

Triangularization simultaneous_triangularize(const MatrixFamily& fam, double eig_tol) {
    SolvabilityResult sv = is_solvable(fam);
    if (!sv.solvable) throw NotSolvable("family is not solvable over C");

    const int n = fam.n;
    std::vector<CMat> cur;
    cur.reserve(fam.mats.size());
    for (const auto& a : fam.mats) cur.push_back(a.cast<Complex>());
    CMat u = CMat::Identity(n, n);

    for (int k = 0; k + 1 < n; ++k) {
        const int m = n - k;
        std::vector<CMat> sub;
        sub.reserve(cur.size());
        for (const auto& a : cur) sub.push_back(a.bottomRightCorner(m, m));

        // The deflated family spans a quotient of a solvable algebra, so a
        // common eigenvector of the generators exists.
        CVec v = common_eigenvector(sub, m, eig_tol);
        CMat h = unitary_with_first_column(v);
        CMat e = CMat::Identity(n, n);
        e.bottomRightCorner(m, m) = h;
        for (auto& a : cur) a = e.adjoint() * a * e;
        u = u * e;
    }

    Triangularization tri;
    tri.t_inv = u;
    tri.t = u.adjoint();
    tri.triangulars = cur;
    tri.diag.reserve(cur.size());
    for (auto& a : tri.triangulars) {
        const double norm = std::max(a.norm(), 1.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) {
                if (std::abs(a(i, j)) > 1e-8 * norm)
                    throw NumericalBreakdown("triangularization left sub-diagonal mass");
                a(i, j) = 0.0;
            }
        tri.diag.push_back(a.diagonal());
    }
    return tri;
}

Triangularization triangularization_from(const CMat& t, const MatrixFamily& fam,
                                         double tol) {
    Triangularization tri;
    tri.t = t;
    tri.t_inv = t.inverse();
    for (const auto& a : fam.mats) {
        CMat ta = tri.t * a.cast<Complex>() * tri.t_inv;
        const double norm = std::max(ta.norm(), 1.0);
        for (int i = 0; i < fam.n; ++i)
            for (int j = 0; j < i; ++j)
                if (std::abs(ta(i, j)) > tol * norm)
                    throw NotTriangular("supplied T does not triangularize the family");
        tri.triangulars.push_back(std::move(ta));
    }
    for (const auto& a : tri.triangulars) tri.diag.push_back(a.diagonal());
    return tri;
}

ClosedFormExponents closed_form_exponents(const Triangularization& tri,
                                          const ProbabilityVector& alpha) {
    if (tri.diag.size() != static_cast<size_t>(alpha.size()))
        throw ScenarioError("alpha length does not match family size");
    const int n = static_cast<int>(tri.diag.front().size());
    ClosedFormExponents out;
    out.theta.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < static_cast<int>(tri.diag.size()); ++j)
            out.theta[static_cast<size_t>(i)] += alpha[j] * tri.diag[static_cast<size_t>(j)](i).real();
    out.chi = *std::max_element(out.theta.begin(), out.theta.end());
    return out;
}

bool star_condition(const MatrixFamily& fam, const ProbabilityVector& alpha) {
    return is_hurwitz(fam.mean(alpha.alpha));
}

}  // namespace swst
