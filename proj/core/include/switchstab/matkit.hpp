#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "switchstab/errors.hpp"

namespace swst {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Throws NonFinite if any entry is NaN or Inf.
void require_finite(const Mat& m, const char* what = "matrix");
void require_finite(const CMat& m, const char* what = "matrix");

/// QR factorization with the positive-diagonal convention: q*r = m,
/// q unitary, r upper-triangular with strictly positive real diagonal.
/// This makes q identical to the Gram-Schmidt orthonormalization of the
/// columns of m and r the corresponding change-of-basis factor.
struct QrPair {
    CMat q;
    CMat r;
};

struct QrPairReal {
    Mat q;
    Mat r;
};

QrPair qr(const CMat& m, double rank_tol = 1e-12);
QrPairReal qr(const Mat& m, double rank_tol = 1e-12);

/// Matrix exponential (scaling-and-squaring Pade).
Mat expm(const Mat& m);
CMat expm(const CMat& m);

/// All n eigenvalues with multiplicity.
std::vector<Complex> eigenvalues(const Mat& m);
std::vector<Complex> eigenvalues(const CMat& m);

/// Largest real part over the spectrum.
double spectral_abscissa(const Mat& m);

/// True iff every eigenvalue satisfies Re(lambda) < -margin.
bool is_hurwitz(const Mat& m, double margin = 1e-9);

/// Orthonormal basis of the numerical kernel: right singular vectors whose
/// singular value is <= tol * sigma_max. Empty when full rank.
std::vector<CVec> nullspace(const CMat& m, double tol);
std::vector<Vec> nullspace(const Mat& m, double tol);

}  // namespace swst
