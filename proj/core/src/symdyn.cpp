#include "switchstab/symdyn.hpp"

#include <cmath>

namespace swst {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng Rng::stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    // hash(master, index) so per-trial streams never overlap
    std::uint64_t s = master_seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (stream_index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    return Rng(splitmix64(s));
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::categorical(const std::vector<double>& weights) {
    const double u = uniform01();
    double acc = 0.0;
    for (size_t k = 0; k < weights.size(); ++k) {
        acc += weights[k];
        if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(weights.size()) - 1;
}

double Rng::normal() {
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int SymbolSeq::at(int k) const {
    if (k < 1 || k > length())
        throw PrefixExhausted("symbol index " + std::to_string(k) +
                              " beyond prefix of length " + std::to_string(length()));
    return symbols[static_cast<size_t>(k - 1)];
}

SymbolSeq sample_sequence(const ProbabilityVector& alpha, int length,
                          std::uint64_t seed) {
    if (length < 1) throw ScenarioError("sequence length must be >= 1");
    Rng rng(seed);
    SymbolSeq seq;
    seq.alphabet = alpha.size();
    seq.symbols.reserve(static_cast<size_t>(length));
    for (int i = 0; i < length; ++i)
        seq.symbols.push_back(rng.categorical(alpha.alpha) + 1);
    return seq;
}

double cylinder_probability(const ProbabilityVector& alpha,
                            const std::vector<int>& word) {
    double p = 1.0;
    for (int s : word) {
        if (s < 1 || s > alpha.size())
            throw SymbolOutOfRange("symbol " + std::to_string(s) +
                                   " outside alphabet of size " +
                                   std::to_string(alpha.size()));
        p *= alpha[s - 1];
    }
    return p;
}

SymbolSeq shift(const SymbolSeq& seq, int k) {
    if (k < 0) throw ScenarioError("shift amount must be >= 0");
    if (k > seq.length())
        throw PrefixExhausted("cannot shift past the sampled prefix");
    SymbolSeq out;
    out.alphabet = seq.alphabet;
    out.symbols.assign(seq.symbols.begin() + k, seq.symbols.end());
    return out;
}

int signal_at(const SymbolSeq& seq, double t) {
    if (!(t > 0.0)) throw ScenarioError("signal_at requires t > 0");
    // sigma(t) = iota_k on (k-1, k]
    const int k = static_cast<int>(std::ceil(t - 1e-12));
    return seq.at(k);
}

SwitchPoint suspension_advance(const SwitchPoint& p, double t) {
    if (t < 0.0) throw ScenarioError("suspension_advance requires t >= 0");
    const double total = p.tau + t;
    const int k = static_cast<int>(std::floor(total));
    SwitchPoint out;
    out.seq = shift(p.seq, k);
    out.tau = total - k;
    if (out.tau >= 1.0) {  // guard the floor boundary
        out.seq = shift(out.seq, 1);
        out.tau -= 1.0;
    }
    return out;
}

SwitchPoint sample_switch_point(const ProbabilityVector& alpha, int horizon,
                                std::uint64_t seed) {
    Rng rng(seed);
    SwitchPoint p;
    p.tau = rng.uniform01();
    const int len = horizon + 2;  // covers ceil(tau + horizon) + 1 symbols
    p.seq.alphabet = alpha.size();
    p.seq.symbols.reserve(static_cast<size_t>(len));
    for (int i = 0; i < len; ++i)
        p.seq.symbols.push_back(rng.categorical(alpha.alpha) + 1);
    return p;
}

}  // namespace swst
