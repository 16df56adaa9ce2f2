#pragma once

#include <cstdint>
#include <vector>

#include "switchstab/errors.hpp"
#include "switchstab/lie.hpp"

namespace swst {

/// Counter-based splittable generator (splitmix64 core). Streams derived
/// from (master seed, trial index) are independent and reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static Rng stream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t next_u64();
    /// Uniform on [0, 1).
    double uniform01();
    /// Categorical sample with the given weights (must sum to ~1).
    int categorical(const std::vector<double>& weights);
    /// Standard normal (Box-Muller, one value per call).
    double normal();

private:
    std::uint64_t state_;
};

/// Finite prefix of a one-sided symbol sequence over {1,...,N}.
struct SymbolSeq {
    std::vector<int> symbols;  ///< 1-based symbols
    int alphabet = 0;

    int length() const { return static_cast<int>(symbols.size()); }
    /// k-th symbol, 1-based. Throws PrefixExhausted past the prefix.
    int at(int k) const;
};

/// Point of the suspension space: sequence plus phase offset tau in [0,1).
struct SwitchPoint {
    SymbolSeq seq;
    double tau = 0.0;
};

/// i.i.d. symbols, symbol k with probability alpha_k; deterministic per seed.
SymbolSeq sample_sequence(const ProbabilityVector& alpha, int length,
                          std::uint64_t seed);

/// Product measure of a cylinder: prod alpha over the word.
double cylinder_probability(const ProbabilityVector& alpha,
                            const std::vector<int>& word);

/// Drops the first k symbols.
SymbolSeq shift(const SymbolSeq& seq, int k);

/// sigma_iota(t) = iota_k for k-1 < t <= k (left-continuous); t must be > 0.
int signal_at(const SymbolSeq& seq, double t);

/// Normal form of [iota, tau + t]: shift by floor(tau+t), keep the fraction.
SwitchPoint suspension_advance(const SwitchPoint& p, double t);

/// Sequence per P_alpha covering ceil(horizon)+1 symbols, tau uniform [0,1).
SwitchPoint sample_switch_point(const ProbabilityVector& alpha, int horizon,
                                std::uint64_t seed);

}  // namespace swst
