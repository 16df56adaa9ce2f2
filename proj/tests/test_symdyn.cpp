#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "switchstab/symdyn.hpp"
#include "test_util.hpp"

using namespace swst;

namespace {

ProbabilityVector half_half() { return ProbabilityVector::from({0.5, 0.5}); }

}  // namespace

TEST_CASE("rng streams are deterministic and distinct") {
    Rng a = Rng::stream(42, 0);
    Rng b = Rng::stream(42, 0);
    Rng c = Rng::stream(42, 1);
    CHECK(a.next_u64() == b.next_u64());
    CHECK(a.next_u64() == b.next_u64());
    CHECK(Rng::stream(42, 0).next_u64() != c.next_u64());
}

TEST_CASE("uniform01 stays in range and looks uniform") {
    Rng rng(7);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("degenerate alphabet produces constant sequences") {
    SymbolSeq seq = sample_sequence(ProbabilityVector::from({1.0}), 100, 5);
    for (int s : seq.symbols) CHECK(s == 1);
}

TEST_CASE("sampled symbol frequencies match alpha") {
    SymbolSeq seq = sample_sequence(half_half(), 100000, 11);
    const double f1 =
        static_cast<double>(std::count(seq.symbols.begin(), seq.symbols.end(), 1)) /
        seq.length();
    CHECK(f1 >= 0.495);
    CHECK(f1 <= 0.505);

    ProbabilityVector alpha = ProbabilityVector::from({0.2, 0.3, 0.5});
    SymbolSeq seq3 = sample_sequence(alpha, 100000, 13);
    for (int k = 1; k <= 3; ++k) {
        const double fk = static_cast<double>(std::count(seq3.symbols.begin(),
                                                         seq3.symbols.end(), k)) /
                          seq3.length();
        const double p = alpha[k - 1];
        const double sigma = std::sqrt(p * (1 - p) / 100000);
        CHECK(std::abs(fk - p) <= 3 * sigma + 1e-12);
    }
}

TEST_CASE("cylinder probabilities multiply") {
    CHECK(cylinder_probability(half_half(), {1, 2}) == doctest::Approx(0.25));
    CHECK(cylinder_probability(half_half(), {}) == 1.0);
    CHECK(cylinder_probability(ProbabilityVector::from({0.2, 0.3, 0.5}), {3, 3}) ==
          doctest::Approx(0.25));
    CHECK_THROWS_AS(cylinder_probability(half_half(), {3}), SymbolOutOfRange);
}

TEST_CASE("cylinder probabilities sum to one over all words") {
    for (int n_sym = 1; n_sym <= 3; ++n_sym) {
        std::vector<double> a(static_cast<size_t>(n_sym));
        double rest = 1.0;
        for (int k = 0; k < n_sym - 1; ++k) {
            a[static_cast<size_t>(k)] = rest * 0.6;
            rest -= a[static_cast<size_t>(k)];
        }
        a[static_cast<size_t>(n_sym - 1)] = rest;
        ProbabilityVector alpha = ProbabilityVector::from(a);
        for (int len = 1; len <= 6; ++len) {
            double total = 0.0;
            std::vector<int> word(static_cast<size_t>(len), 1);
            // odometer over all words of the given length
            for (;;) {
                total += cylinder_probability(alpha, word);
                int pos = len - 1;
                while (pos >= 0 && word[static_cast<size_t>(pos)] == n_sym) {
                    word[static_cast<size_t>(pos)] = 1;
                    --pos;
                }
                if (pos < 0) break;
                ++word[static_cast<size_t>(pos)];
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("shift drops symbols and composes") {
    SymbolSeq seq{{1, 2, 3, 4, 5}, 5};
    CHECK(shift(seq, 0).symbols == seq.symbols);
    CHECK(shift(seq, 1).symbols == std::vector<int>{2, 3, 4, 5});
    CHECK(shift(shift(seq, 1), 1).symbols == shift(seq, 2).symbols);
    CHECK_THROWS_AS(shift(seq, 6), PrefixExhausted);
}

TEST_CASE("signal_at is left-continuous with unit dwell") {
    SymbolSeq seq{{1, 2, 1, 2}, 2};
    CHECK(signal_at(seq, 0.5) == 1);
    CHECK(signal_at(seq, 1.0) == 1);
    CHECK(signal_at(seq, 1.5) == 2);
    CHECK(signal_at(seq, 2.0) == 2);
    CHECK_THROWS_AS(signal_at(seq, 5.0), PrefixExhausted);
}

TEST_CASE("suspension advance normal form") {
    SwitchPoint p{SymbolSeq{{1, 2, 3, 4, 5}, 5}, 0.5};

    SwitchPoint q = suspension_advance(p, 1.5);
    CHECK(q.tau == doctest::Approx(0.0));
    CHECK(q.seq.symbols == std::vector<int>{3, 4, 5});

    SwitchPoint same = suspension_advance(p, 0.0);
    CHECK(same.tau == p.tau);
    CHECK(same.seq.symbols == p.seq.symbols);

    SwitchPoint r = suspension_advance(SwitchPoint{p.seq, 0.25}, 0.5);
    CHECK(r.tau == doctest::Approx(0.75));
    CHECK(r.seq.symbols == p.seq.symbols);
}

TEST_CASE("semiflow law in normal form") {
    Rng rng(17);
    SwitchPoint p = sample_switch_point(half_half(), 20, 99);
    for (int rep = 0; rep < 50; ++rep) {
        const double s = 8.0 * rng.uniform01();
        const double t = 8.0 * rng.uniform01();
        SwitchPoint two_steps = suspension_advance(suspension_advance(p, s), t);
        SwitchPoint one_step = suspension_advance(p, s + t);
        CHECK(two_steps.tau == doctest::Approx(one_step.tau).epsilon(1e-9));
        CHECK(two_steps.seq.symbols.front() == one_step.seq.symbols.front());
    }
}

TEST_CASE("signal consistency between shifted and unshifted coordinates") {
    SwitchPoint p = sample_switch_point(half_half(), 30, 123);
    Rng rng(19);
    for (int rep = 0; rep < 100; ++rep) {
        const double t = 0.001 + 25.0 * rng.uniform01();
        // sigma_iota(tau + t) should equal the first symbol after advancing
        SwitchPoint moved = suspension_advance(p, t);
        const double eps = 1e-9;
        if (moved.tau < eps || moved.tau > 1.0 - eps) continue;  // boundary
        CHECK(signal_at(p.seq, p.tau + t) == signal_at(moved.seq, moved.tau));
    }
}

TEST_CASE("sample_switch_point is reproducible and covers the horizon") {
    SwitchPoint a = sample_switch_point(half_half(), 50, 7);
    SwitchPoint b = sample_switch_point(half_half(), 50, 7);
    CHECK(a.tau == b.tau);
    CHECK(a.seq.symbols == b.seq.symbols);
    CHECK(a.seq.length() >= 51);
    CHECK(a.tau >= 0.0);
    CHECK(a.tau < 1.0);
}

TEST_CASE("tau is uniform on [0,1)") {
    const int n = 10000;
    std::vector<double> taus;
    for (int i = 0; i < n; ++i)
        taus.push_back(sample_switch_point(half_half(), 1,
                                           Rng::stream(3, static_cast<std::uint64_t>(i))
                                               .next_u64())
                           .tau);
    std::sort(taus.begin(), taus.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ecdf_hi = static_cast<double>(i + 1) / n;
        const double ecdf_lo = static_cast<double>(i) / n;
        ks = std::max(ks, std::abs(ecdf_hi - taus[static_cast<size_t>(i)]));
        ks = std::max(ks, std::abs(taus[static_cast<size_t>(i)] - ecdf_lo));
    }
    CHECK(ks <= 0.02);
}
