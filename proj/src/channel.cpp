#include "freeride/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace freeride {

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

BiosChannel::BiosChannel(Kind k, double param) : kind_(k) {
    if (k == Kind::BpskAwgn) {
        if (param < 0.0) throw std::invalid_argument("BiosChannel: sigma must be >= 0");
        sigma_ = param;
    } else {
        if (param < 0.0 || param > 1.0) throw std::invalid_argument("BiosChannel: p must be in [0,1]");
        p_ = param;
    }
}

BiosChannel BiosChannel::bpsk_awgn(double sigma) { return {Kind::BpskAwgn, sigma}; }

BiosChannel BiosChannel::awgn_from_snr_db(double snr_db) {
    return bpsk_awgn(std::pow(10.0, -snr_db / 20.0));
}

BiosChannel BiosChannel::bsc(double p) { return {Kind::Bsc, p}; }

double BiosChannel::snr_db() const {
    if (kind_ != Kind::BpskAwgn) throw std::logic_error("snr_db: AWGN only");
    return -20.0 * std::log10(sigma_);
}

RealVector BiosChannel::transmit(const BitVector& x, std::mt19937_64& rng) const {
    RealVector y(x.size());
    if (kind_ == Kind::BpskAwgn) {
        std::normal_distribution<double> noise(0.0, sigma_);
        for (std::size_t j = 0; j < x.size(); ++j)
            y[j] = (x.get(j) ? -1.0 : 1.0) + (sigma_ > 0.0 ? noise(rng) : 0.0);
    } else {
        std::bernoulli_distribution flip_bit(p_);
        for (std::size_t j = 0; j < x.size(); ++j)
            y[j] = static_cast<double>(x.get(j) ^ (p_ > 0.0 && flip_bit(rng)));
    }
    return y;
}

double BiosChannel::llr_one(double y) const {
    if (kind_ == Kind::BpskAwgn) {
        if (sigma_ == 0.0)
            return y > 0.0 ? std::numeric_limits<double>::infinity()
                           : (y < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0);
        return 2.0 * y / (sigma_ * sigma_);
    }
    // BSC: p in {0,1} yields +/-inf by convention.
    const double mag = std::log((1.0 - p_) / p_);
    return y < 0.5 ? mag : -mag;
}

RealVector BiosChannel::llr(const RealVector& y) const {
    RealVector out(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) out[j] = llr_one(y[j]);
    return out;
}

RealVector BiosChannel::flip(RealVector y, const BitVector& w) const {
    if (y.size() != w.size()) throw std::invalid_argument("flip: length mismatch");
    if (kind_ == Kind::BpskAwgn) {
        for (std::size_t j = 0; j < y.size(); ++j)
            if (w.get(j)) y[j] = -y[j];
    } else {
        for (std::size_t j = 0; j < y.size(); ++j)
            if (w.get(j)) y[j] = 1.0 - y[j];
    }
    return y;
}

BitVector BiosChannel::hard_decision(const RealVector& y) const {
    BitVector v(y.size());
    if (kind_ == Kind::BpskAwgn) {
        for (std::size_t j = 0; j < y.size(); ++j)
            if (y[j] < 0.0) v.set(j, true);
    } else {
        for (std::size_t j = 0; j < y.size(); ++j)
            if (y[j] > 0.5) v.set(j, true);
    }
    return v;
}

double BiosChannel::hard_crossover() const {
    if (kind_ == Kind::Bsc) return p_;
    if (sigma_ == 0.0) return 0.0;
    return q_func(1.0 / sigma_);
}

double BiosChannel::posterior_flip_prob(double y_j) const {
    const double lam = std::fabs(llr_one(y_j));
    if (std::isinf(lam)) return 0.0;
    return 1.0 / (1.0 + std::exp(lam));
}

double BiosChannel::log_density(double y, bool bit) const {
    if (kind_ == Kind::BpskAwgn) {
        const double mean = bit ? -1.0 : 1.0;
        const double d = y - mean;
        return -d * d / (2.0 * sigma_ * sigma_);
    }
    const bool hit = (y > 0.5) == bit;
    const double prob = hit ? 1.0 - p_ : p_;
    return prob > 0.0 ? std::log(prob) : -std::numeric_limits<double>::infinity();
}

std::pair<double, double> BiosChannel::bios_capacity(std::size_t samples, std::mt19937_64& rng) const {
    if (samples == 0) throw std::invalid_argument("bios_capacity: samples must be >= 1");
    if (kind_ == Kind::Bsc) {
        double h2 = 0.0;
        if (p_ > 0.0 && p_ < 1.0)
            h2 = -p_ * std::log2(p_) - (1.0 - p_) * std::log2(1.0 - p_);
        return {1.0 - h2, 0.0};
    }
    if (sigma_ == 0.0) return {1.0, 0.0};

    // Y ~ P(.|0); info sample = 1 - log2(1 + exp(-LLR)).
    std::normal_distribution<double> noise(0.0, sigma_);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double y = 1.0 + noise(rng);
        const double lam = 2.0 * y / (sigma_ * sigma_);
        double log2_term; // log2(1 + e^{-lam})
        if (lam > 0)
            log2_term = std::log1p(std::exp(-lam)) / std::numbers::ln2_v<double>;
        else
            log2_term = (-lam + std::log1p(std::exp(lam))) / std::numbers::ln2_v<double>;
        const double v = 1.0 - log2_term;
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / static_cast<double>(samples);
    const double var = std::max(0.0, sum_sq / static_cast<double>(samples) - mean * mean);
    const double se = std::sqrt(var / static_cast<double>(samples));
    return {mean, se};
}

} // namespace freeride
