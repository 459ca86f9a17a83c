#include "freeride/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace freeride {

ShortCode ShortCode::from_generator(const DenseBitMatrix& g) {
    if (g.rows() > 16) throw std::invalid_argument("ShortCode: k must be <= 16");
    if (gf2_rank(g) != g.rows()) throw std::invalid_argument("ShortCode: generator not full rank");
    ShortCode sc;
    sc.n_ = g.cols();
    sc.k_ = g.rows();
    sc.codewords_.reserve(std::size_t{1} << sc.k_);
    for (std::uint64_t u = 0; u < (std::uint64_t{1} << sc.k_); ++u) {
        BitVector msg(sc.k_);
        for (std::size_t i = 0; i < sc.k_; ++i)
            if ((u >> i) & 1) msg.set(i, true);
        sc.codewords_.push_back(vec_mat_mul(msg, g));
    }
    return sc;
}

ShortCode ShortCode::repetition2() {
    return from_generator(DenseBitMatrix::from_strings({"11"}));
}

ShortCode ShortCode::extended_hamming8() {
    return from_generator(DenseBitMatrix::from_strings({
        "10000111",
        "01001011",
        "00101101",
        "00011110",
    }));
}

namespace {

struct MiAccumulator {
    double sum = 0.0, sum_sq = 0.0;
    void add(double v) {
        sum += v;
        sum_sq += v * v;
    }
    CapacityEstimate estimate(std::size_t samples) const {
        CapacityEstimate e;
        e.samples = samples;
        e.value = sum / static_cast<double>(samples);
        const double var = std::max(0.0, sum_sq / static_cast<double>(samples) - e.value * e.value);
        e.std_err = std::sqrt(var / static_cast<double>(samples));
        return e;
    }
};

// One mutual-information sample (bits/use): draw a uniform codeword, pass it
// through the channel with the provided noise, and score the transmitted
// codeword against the log-domain equiprobable mixture.
double mi_sample(const ShortCode& sc, const BiosChannel& ch, const RealVector& y,
                 std::size_t sent) {
    const std::size_t n = sc.n();
    const auto& cws = sc.codewords();
    // Per-position log densities for both inputs.
    std::vector<double> lp0(n), lp1(n);
    for (std::size_t j = 0; j < n; ++j) {
        lp0[j] = ch.log_density(y[j], false);
        lp1[j] = ch.log_density(y[j], true);
    }
    double sent_lp = 0.0, max_lp = -1e300;
    std::vector<double> lps(cws.size());
    for (std::size_t c = 0; c < cws.size(); ++c) {
        double lp = 0.0;
        for (std::size_t j = 0; j < n; ++j) lp += cws[c].get(j) ? lp1[j] : lp0[j];
        lps[c] = lp;
        max_lp = std::max(max_lp, lp);
        if (c == sent) sent_lp = lp;
    }
    double mix = 0.0;
    for (double lp : lps) mix += std::exp(lp - max_lp);
    const double log_mix = max_lp + std::log(mix) - static_cast<double>(sc.k()) * std::numbers::ln2_v<double>;
    return (sent_lp - log_mix) / (static_cast<double>(n) * std::numbers::ln2_v<double>);
}

// Per-position C_BIOS sample for the same noise realization, evaluated on the
// all-zero input by channel symmetry.
double cbios_sample(const BiosChannel& ch, const RealVector& y_zero) {
    double acc = 0.0;
    for (double y : y_zero) {
        const double lam = ch.llr_one(y);
        double log2_term;
        if (std::isinf(lam))
            log2_term = lam > 0 ? 0.0 : 1e300;
        else if (lam > 0)
            log2_term = std::log1p(std::exp(-lam)) / std::numbers::ln2_v<double>;
        else
            log2_term = (-lam + std::log1p(std::exp(lam))) / std::numbers::ln2_v<double>;
        acc += 1.0 - log2_term;
    }
    return acc / static_cast<double>(y_zero.size());
}

} // namespace

CapacityEstimate code_mutual_information(const ShortCode& sc, const BiosChannel& ch,
                                         std::size_t samples, std::mt19937_64& rng) {
    if (samples == 0) throw std::invalid_argument("code_mutual_information: samples must be >= 1");
    MiAccumulator acc;
    std::uniform_int_distribution<std::size_t> pick(0, sc.codewords().size() - 1);
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t sent = pick(rng);
        const RealVector y = ch.transmit(sc.codewords()[sent], rng);
        acc.add(mi_sample(sc, ch, y, sent));
    }
    return acc.estimate(samples);
}

CapacityEstimate accessible_capacity(const ShortCode& sc, const BiosChannel& ch,
                                     std::size_t samples, std::mt19937_64& rng) {
    if (samples == 0) throw std::invalid_argument("accessible_capacity: samples must be >= 1");
    MiAccumulator acc;
    std::uniform_int_distribution<std::size_t> pick(0, sc.codewords().size() - 1);
    const BitVector zero(sc.n());
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t sent = pick(rng);
        const RealVector y_zero = ch.transmit(zero, rng);
        // Common random numbers: superimpose the codeword on the same noise.
        RealVector y = y_zero;
        if (ch.kind() == BiosChannel::Kind::BpskAwgn) {
            for (std::size_t j = 0; j < y.size(); ++j)
                if (sc.codewords()[sent].get(j)) y[j] -= 2.0;
        } else {
            for (std::size_t j = 0; j < y.size(); ++j)
                if (sc.codewords()[sent].get(j)) y[j] = 1.0 - y[j];
        }
        acc.add(cbios_sample(ch, y_zero) - mi_sample(sc, ch, y, sent));
    }
    return acc.estimate(samples);
}

CapacityEstimate lower_bound(const BiosChannel& ch, double r0, std::size_t samples,
                             std::mt19937_64& rng) {
    if (r0 < 0.0 || r0 > 1.0) throw std::invalid_argument("lower_bound: R0 must be in [0,1]");
    auto [cb, se] = ch.bios_capacity(samples, rng);
    return {cb - r0, se, samples};
}

} // namespace freeride
