#include <doctest.h>

#include "switchstab/lie.hpp"
#include "test_util.hpp"

using namespace swst;
using namespace swst::testutil;

namespace {

Mat diag2(double a, double b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

const Mat kE = (Mat(2, 2) << 0, 1, 0, 0).finished();
const Mat kF = (Mat(2, 2) << 0, 0, 1, 0).finished();

MatrixFamily diag_pair() {
    return MatrixFamily::from({diag2(-2, 1), diag2(1, -2)});
}

/// Family A_i = T0^-1 U_i T0 with known triangular ground truth.
struct GroundTruth {
    MatrixFamily fam;
    std::vector<Mat> uppers;
};

GroundTruth conjugated_triangular_family(int n, int count, Rng& rng) {
    Mat t0 = Mat::Identity(n, n) + 0.4 * random_matrix(n, rng) / n;
    Mat t0_inv = t0.inverse();
    GroundTruth gt;
    std::vector<Mat> mats;
    for (int i = 0; i < count; ++i) {
        Mat u = random_upper_triangular(n, rng);
        gt.uppers.push_back(u);
        mats.push_back(t0_inv * u * t0);
    }
    gt.fam = MatrixFamily::from(std::move(mats));
    return gt;
}

}  // namespace

TEST_CASE("bracket basics") {
    CHECK(bracket(diag2(1, 2), diag2(3, -1)).norm() == 0.0);
    Mat a = (Mat(2, 2) << 1, 2, 3, 4).finished();
    CHECK(bracket(a, a).norm() == 0.0);
    CHECK((bracket(kE, kF) - diag2(1, -1)).norm() == 0.0);
}

TEST_CASE("lie algebra generation dimensions") {
    CHECK(generate_lie_algebra(MatrixFamily::from({diag2(1, 2)})).dim() == 1);
    CHECK(generate_lie_algebra(MatrixFamily::from({kE, kF})).dim() == 3);

    LieBasis commuting = generate_lie_algebra(diag_pair());
    CHECK(commuting.dim() == 2);
}

TEST_CASE("generated basis is closed under the bracket") {
    Rng rng(201);
    MatrixFamily fam = MatrixFamily::from(
        {random_upper_triangular(3, rng), random_upper_triangular(3, rng)});
    LieBasis basis = generate_lie_algebra(fam);
    CHECK(basis.dim() <= 9);

    // every pairwise bracket must lie in the span of the basis
    const int d = basis.dim();
    CMat span(9, d);
    for (int i = 0; i < d; ++i)
        span.col(i) = Eigen::Map<const CVec>(basis.basis[static_cast<size_t>(i)].data(), 9);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            CMat br = bracket(basis.basis[static_cast<size_t>(i)],
                              basis.basis[static_cast<size_t>(j)]);
            CVec v = Eigen::Map<const CVec>(br.data(), 9);
            CVec resid = v - span * span.colPivHouseholderQr().solve(v);
            CHECK(resid.norm() <= 1e-8 * std::max(1.0, v.norm()));
        }
    }
}

TEST_CASE("derived series of known algebras") {
    CHECK(derived_series(generate_lie_algebra(diag_pair())) ==
          std::vector<int>{2, 0});

    CHECK(derived_series(generate_lie_algebra(MatrixFamily::from({kE, kF}))) ==
          std::vector<int>{3, 3});

    // full 2x2 upper-triangular algebra: brackets are strictly upper
    Mat e11 = Mat::Zero(2, 2), e22 = Mat::Zero(2, 2);
    e11(0, 0) = 1;
    e22(1, 1) = 1;
    LieBasis tri = generate_lie_algebra(MatrixFamily::from({e11, e22, kE}));
    CHECK(derived_series(tri) == std::vector<int>{3, 1, 0});
}

TEST_CASE("solvability verdicts") {
    SolvabilityResult single = is_solvable(MatrixFamily::from({diag2(1, -1)}));
    CHECK(single.solvable);
    CHECK(*single.ell <= 1);

    SolvabilityResult sl2 = is_solvable(MatrixFamily::from({kE, kF}));
    CHECK_FALSE(sl2.solvable);
    CHECK_FALSE(sl2.ell.has_value());

    Rng rng(202);
    for (int rep = 0; rep < 5; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 3);
        MatrixFamily fam = MatrixFamily::from(
            {random_upper_triangular(n, rng), random_upper_triangular(n, rng)});
        SolvabilityResult sv = is_solvable(fam);
        CHECK(sv.solvable);
        CHECK(*sv.ell <= n);
    }
}

TEST_CASE("triangularization_from accepts an already-triangular family") {
    Rng rng(203);
    MatrixFamily fam = MatrixFamily::from(
        {random_upper_triangular(3, rng), random_upper_triangular(3, rng)});
    Triangularization tri = triangularization_from(CMat(CMat::Identity(3, 3)), fam);
    for (int i = 0; i < fam.size(); ++i)
        CHECK((tri.triangulars[static_cast<size_t>(i)] -
               fam.mats[static_cast<size_t>(i)].cast<Complex>()).norm() < 1e-12);
}

TEST_CASE("triangularization_from rejects a non-triangular result") {
    MatrixFamily fam = MatrixFamily::from({kE, kF});
    CHECK_THROWS_AS(triangularization_from(CMat(CMat::Identity(2, 2)), fam),
                    NotTriangular);
}

TEST_CASE("simultaneous triangularization recovers constructed ground truth") {
    Rng rng(204);
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 3);
        GroundTruth gt = conjugated_triangular_family(n, 2, rng);
        Triangularization tri = simultaneous_triangularize(gt.fam);

        for (int i = 0; i < gt.fam.size(); ++i) {
            const CMat& a = tri.triangulars[static_cast<size_t>(i)];
            // round trip and triangular shape
            CMat back = tri.t * gt.fam.mats[static_cast<size_t>(i)].cast<Complex>() *
                        tri.t_inv;
            CHECK((back - a).norm() <= 1e-8 * std::max(1.0, a.norm()));
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < r; ++c)
                    CHECK(std::abs(a(r, c)) <= 1e-8 * std::max(1.0, a.norm()));

            // diagonal multiset matches the ground-truth triangular diagonal
            std::vector<double> got, want;
            for (int k = 0; k < n; ++k) {
                got.push_back(tri.diag[static_cast<size_t>(i)](k).real());
                want.push_back(gt.uppers[static_cast<size_t>(i)](k, k));
            }
            got = sorted(got);
            want = sorted(want);
            for (int k = 0; k < n; ++k)
                CHECK(std::abs(got[static_cast<size_t>(k)] -
                               want[static_cast<size_t>(k)]) <= 1e-6);
        }
    }
}

TEST_CASE("diagonal multisets preserve each matrix's spectrum") {
    Rng rng(205);
    GroundTruth gt = conjugated_triangular_family(4, 3, rng);
    Triangularization tri = simultaneous_triangularize(gt.fam);
    for (int i = 0; i < gt.fam.size(); ++i) {
        std::vector<double> from_diag, from_eig;
        for (int k = 0; k < 4; ++k)
            from_diag.push_back(tri.diag[static_cast<size_t>(i)](k).real());
        for (const auto& ev : eigenvalues(gt.fam.mats[static_cast<size_t>(i)]))
            from_eig.push_back(ev.real());
        from_diag = sorted(from_diag);
        from_eig = sorted(from_eig);
        for (int k = 0; k < 4; ++k)
            CHECK(std::abs(from_diag[static_cast<size_t>(k)] -
                           from_eig[static_cast<size_t>(k)]) <= 1e-6);
    }
}

TEST_CASE("sl(2) families are rejected by the triangularizer") {
    CHECK_THROWS_AS(simultaneous_triangularize(MatrixFamily::from({kE, kF})),
                    NotSolvable);
}

TEST_CASE("closed-form exponents on the diagonal example") {
    Triangularization tri = simultaneous_triangularize(diag_pair());

    ClosedFormExponents even =
        closed_form_exponents(tri, ProbabilityVector::from({0.5, 0.5}));
    CHECK(even.theta.size() == 2);
    CHECK(even.theta[0] == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(even.theta[1] == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(even.chi == doctest::Approx(-0.5).epsilon(1e-10));

    ClosedFormExponents skew =
        closed_form_exponents(tri, ProbabilityVector::from({0.9, 0.1}));
    auto theta = sorted(skew.theta);
    CHECK(theta[0] == doctest::Approx(-1.7).epsilon(1e-10));
    CHECK(theta[1] == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(skew.chi == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("single-matrix closed form reduces to the spectrum") {
    Rng rng(206);
    Mat u = random_upper_triangular(3, rng);
    MatrixFamily fam = MatrixFamily::from({u});
    Triangularization tri = simultaneous_triangularize(fam);
    ClosedFormExponents cf = closed_form_exponents(tri, ProbabilityVector::from({1.0}));
    std::vector<double> want;
    for (const auto& ev : eigenvalues(u)) want.push_back(ev.real());
    auto got = sorted(cf.theta);
    want = sorted(want);
    for (int k = 0; k < 3; ++k)
        CHECK(got[static_cast<size_t>(k)] ==
              doctest::Approx(want[static_cast<size_t>(k)]).epsilon(1e-8));
    CHECK(cf.chi == doctest::Approx(spectral_abscissa(u)).epsilon(1e-8));
}

TEST_CASE("star condition on the diagonal example") {
    MatrixFamily fam = diag_pair();
    CHECK(star_condition(fam, ProbabilityVector::from({0.5, 0.5})));
    CHECK_FALSE(star_condition(fam, ProbabilityVector::from({0.9, 0.1})));

    MatrixFamily hurwitz_diags =
        MatrixFamily::from({diag2(-1, -2), diag2(-3, -0.5)});
    CHECK(star_condition(hurwitz_diags, ProbabilityVector::from({0.3, 0.7})));
}

TEST_CASE("star condition is equivalent to all theta negative for solvable families") {
    Rng rng(207);
    int checked = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 3);
        GroundTruth gt = conjugated_triangular_family(n, 2, rng);
        ProbabilityVector alpha = ProbabilityVector::from({0.5, 0.5});
        ClosedFormExponents cf =
            closed_form_exponents(simultaneous_triangularize(gt.fam), alpha);
        if (std::abs(cf.chi) < 1e-3) continue;  // too close to the axis to judge
        CHECK(star_condition(gt.fam, alpha) == (cf.chi < 0.0));
        ++checked;
    }
    CHECK(checked >= 40);
}

TEST_CASE("probability vector validation") {
    CHECK_THROWS_AS(ProbabilityVector::from({0.5, 0.4}), ScenarioError);
    CHECK_THROWS_AS(ProbabilityVector::from({1.5, -0.5}), ScenarioError);
    CHECK_NOTHROW(ProbabilityVector::from({0.2, 0.3, 0.5}));
}
