#include "switchstab/matkit.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace swst {

void require_finite(const Mat& m, const char* what) {
    if (!m.allFinite()) throw NonFinite(std::string(what) + " has NaN/Inf entries");
}

void require_finite(const CMat& m, const char* what) {
    if (!m.allFinite()) throw NonFinite(std::string(what) + " has NaN/Inf entries");
}

namespace {

// Householder QR, then rescale so the R diagonal is real and positive.
template <typename MatT>
std::pair<MatT, MatT> qr_positive(const MatT& m, double rank_tol) {
    using Scalar = typename MatT::Scalar;
    Eigen::HouseholderQR<MatT> fac(m);
    MatT q = fac.householderQ() * MatT::Identity(m.rows(), m.cols());
    MatT r = fac.matrixQR().template triangularView<Eigen::Upper>();

    const auto n = m.cols();
    double dmax = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) dmax = std::max(dmax, std::abs(r(i, i)));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = std::abs(r(i, i));
        if (d <= rank_tol * std::max(dmax, 1.0))
            throw SingularInput("qr: R diagonal " + std::to_string(i) +
                                " below rank tolerance");
        const Scalar phase = r(i, i) / Scalar(d);
        r.row(i) *= Scalar(1.0) / phase;
        q.col(i) *= phase;
    }
    return {std::move(q), std::move(r)};
}

}  // namespace

QrPair qr(const CMat& m, double rank_tol) {
    require_finite(m, "qr input");
    auto [q, r] = qr_positive<CMat>(m, rank_tol);
    return {std::move(q), std::move(r)};
}

QrPairReal qr(const Mat& m, double rank_tol) {
    require_finite(m, "qr input");
    auto [q, r] = qr_positive<Mat>(m, rank_tol);
    return {std::move(q), std::move(r)};
}

Mat expm(const Mat& m) {
    require_finite(m, "expm input");
    return m.exp();
}

CMat expm(const CMat& m) {
    require_finite(m, "expm input");
    return m.exp();
}

namespace {

template <typename MatT>
bool strictly_lower_is_zero(const MatT& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            if (m(i, j) != typename MatT::Scalar(0)) return false;
    return true;
}

}  // namespace

std::vector<Complex> eigenvalues(const Mat& m) {
    if (strictly_lower_is_zero(m)) {
        std::vector<Complex> out(m.rows());
        for (Eigen::Index i = 0; i < m.rows(); ++i) out[i] = m(i, i);
        return out;
    }
    Eigen::EigenSolver<Mat> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NoConvergence("eigenvalues: QR iteration did not converge");
    std::vector<Complex> out(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[i] = es.eigenvalues()[i];
    return out;
}

std::vector<Complex> eigenvalues(const CMat& m) {
    if (strictly_lower_is_zero(m)) {
        std::vector<Complex> out(m.rows());
        for (Eigen::Index i = 0; i < m.rows(); ++i) out[i] = m(i, i);
        return out;
    }
    Eigen::ComplexEigenSolver<CMat> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NoConvergence("eigenvalues: QR iteration did not converge");
    std::vector<Complex> out(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[i] = es.eigenvalues()[i];
    return out;
}

double spectral_abscissa(const Mat& m) {
    double a = -std::numeric_limits<double>::infinity();
    for (const auto& ev : eigenvalues(m)) a = std::max(a, ev.real());
    return a;
}

bool is_hurwitz(const Mat& m, double margin) {
    return spectral_abscissa(m) < -margin;
}

namespace {

template <typename MatT, typename VecT>
std::vector<VecT> nullspace_impl(const MatT& m, double tol) {
    Eigen::JacobiSVD<MatT> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    std::vector<VecT> basis;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= tol * smax) basis.emplace_back(svd.matrixV().col(i));
    }
    return basis;
}

}  // namespace

std::vector<CVec> nullspace(const CMat& m, double tol) {
    return nullspace_impl<CMat, CVec>(m, tol);
}

std::vector<Vec> nullspace(const Mat& m, double tol) {
    return nullspace_impl<Mat, Vec>(m, tol);
}

}  // namespace swst
