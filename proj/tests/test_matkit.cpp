#include <doctest.h>

#include "switchstab/matkit.hpp"
#include "test_util.hpp"

using namespace swst;
using namespace swst::testutil;

TEST_CASE("qr of the identity is trivial") {
    auto [q, r] = qr(Mat(Mat::Identity(3, 3)));
    CHECK((q - Mat::Identity(3, 3)).norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK((r - Mat::Identity(3, 3)).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("qr of a permutation keeps the columns and gives r = I") {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    auto [q, r] = qr(m);
    CHECK((q - m).norm() < 1e-14);
    CHECK((r - Mat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("qr reconstruction, orthogonality and positive diagonal") {
    Rng rng(101);
    for (int rep = 0; rep < 50; ++rep) {
        Mat m = random_matrix(4, rng);
        auto [q, r] = qr(m);
        CHECK((q * r - m).lpNorm<Eigen::Infinity>() <=
              1e-12 * m.lpNorm<Eigen::Infinity>() + 1e-13);
        CHECK((q.transpose() * q - Mat::Identity(4, 4)).lpNorm<Eigen::Infinity>() <=
              1e-12);
        for (int i = 0; i < 4; ++i) {
            CHECK(r(i, i) > 0.0);
            for (int j = 0; j < i; ++j) CHECK(r(i, j) == 0.0);
        }
    }
}

TEST_CASE("complex qr has real positive diagonal") {
    Rng rng(102);
    CMat m = random_complex_matrix(4, rng);
    auto [q, r] = qr(m);
    CHECK((q * r - m).norm() <= 1e-12 * m.norm());
    CHECK((q.adjoint() * q - CMat::Identity(4, 4)).norm() <= 1e-12);
    for (int i = 0; i < 4; ++i) {
        CHECK(r(i, i).imag() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(r(i, i).real() > 0.0);
    }
}

TEST_CASE("qr rejects a rank-deficient matrix") {
    Mat m(2, 2);
    m << 1, 2, 2, 4;
    CHECK_THROWS_AS(qr(m), SingularInput);
}

TEST_CASE("expm of zero is the identity") {
    CHECK((expm(Mat(Mat::Zero(3, 3))) - Mat::Identity(3, 3)).norm() < 1e-15);
}

TEST_CASE("expm of a diagonal matrix exponentiates the diagonal") {
    Mat m(2, 2);
    m << 1, 0, 0, -2;
    Mat e = expm(m);
    CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
    CHECK(e(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
    CHECK(std::abs(e(0, 1)) < 1e-15);
    CHECK(std::abs(e(1, 0)) < 1e-15);
}

TEST_CASE("expm of a nilpotent matrix truncates the series") {
    Mat m(2, 2);
    m << 0, 1, 0, 0;
    Mat want(2, 2);
    want << 1, 1, 0, 1;
    CHECK((expm(m) - want).norm() < 1e-14);
}

TEST_CASE("expm group property expm(m) expm(-m) = I") {
    Rng rng(103);
    for (int rep = 0; rep < 20; ++rep) {
        Mat m = random_matrix(4, rng);
        m *= 5.0 / std::max(m.norm(), 1e-30);
        Mat prod = expm(m) * expm(Mat(-m));
        CHECK((prod - Mat::Identity(4, 4)).norm() <= 1e-10);
    }
}

TEST_CASE("eigenvalues of simple matrices") {
    Mat d(2, 2);
    d << 1, 0, 0, 2;
    auto ev = sorted({eigenvalues(d)[0].real(), eigenvalues(d)[1].real()});
    CHECK(ev[0] == doctest::Approx(1.0));
    CHECK(ev[1] == doctest::Approx(2.0));

    Mat rot(2, 2);
    rot << 0, 1, -1, 0;
    auto evr = eigenvalues(rot);
    std::vector<double> imag = sorted({evr[0].imag(), evr[1].imag()});
    CHECK(imag[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(imag[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(evr[0].real()) < 1e-12);

    // characteristic polynomial lambda^2 + 3 lambda + 2
    Mat c(2, 2);
    c << 0, 1, -2, -3;
    auto evc = sorted({eigenvalues(c)[0].real(), eigenvalues(c)[1].real()});
    CHECK(evc[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(evc[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("eigenvalues of an upper-triangular matrix are its diagonal") {
    Rng rng(104);
    for (int rep = 0; rep < 20; ++rep) {
        Mat m = random_upper_triangular(5, rng, 2.0);
        auto ev = eigenvalues(m);
        std::vector<double> got, want;
        for (int i = 0; i < 5; ++i) {
            got.push_back(ev[static_cast<size_t>(i)].real());
            want.push_back(m(i, i));
            CHECK(std::abs(ev[static_cast<size_t>(i)].imag()) <= 1e-12);
        }
        got = sorted(got);
        want = sorted(want);
        for (int i = 0; i < 5; ++i)
            CHECK(std::abs(got[static_cast<size_t>(i)] -
                           want[static_cast<size_t>(i)]) <= 1e-12);
    }
}

TEST_CASE("is_hurwitz on known matrices") {
    CHECK(is_hurwitz(Mat(-Mat::Identity(3, 3))));
    Mat rot(2, 2);
    rot << 0, 1, -1, 0;
    CHECK_FALSE(is_hurwitz(rot));
    Mat c(2, 2);
    c << 0, 1, -2, -3;
    CHECK(is_hurwitz(c));
}

TEST_CASE("is_hurwitz agrees with the Lyapunov-equation oracle") {
    Rng rng(105);
    int checked = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 4);
        Mat m = random_matrix(n, rng);
        // skip matrices too close to the imaginary axis for either method
        if (std::abs(spectral_abscissa(m)) < 1e-3) continue;
        CHECK(is_hurwitz(m) == lyapunov_hurwitz_oracle(m));
        ++checked;
    }
    CHECK(checked >= 190);
}

TEST_CASE("nullspace extraction") {
    CHECK(nullspace(Mat(Mat::Identity(3, 3)), 1e-9).empty());
    CHECK(nullspace(Mat(Mat::Zero(3, 3)), 1e-9).size() == 3);

    Mat m(2, 2);
    m << 1, 0, 0, 1e-14;
    auto basis = nullspace(m, 1e-9);
    REQUIRE(basis.size() == 1);
    CHECK(std::abs(std::abs(basis[0](1)) - 1.0) < 1e-9);
    CHECK(std::abs(basis[0](0)) < 1e-9);
}

TEST_CASE("nullspace vectors are orthonormal") {
    Mat m = Mat::Zero(4, 4);
    m(0, 0) = 1.0;  // rank 1, kernel dimension 3
    auto basis = nullspace(m, 1e-9);
    REQUIRE(basis.size() == 3);
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < basis.size(); ++j)
            CHECK(std::abs(basis[i].dot(basis[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
}
