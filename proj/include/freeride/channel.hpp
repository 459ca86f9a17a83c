#pragma once

// Binary-input output-symmetric (BIOS) memoryless channels: BPSK over AWGN
// and the binary symmetric channel. Covers transmission, LLR computation,
// the flipping operation (applying the symmetry map where a superimposed
// codeword has a one), hard-decision statistics and capacity estimation.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "freeride/gf2.hpp"

namespace freeride {

using RealVector = std::vector<double>;

/// LLR magnitude used in place of +/-infinity before any tanh-rule step.
inline constexpr double kLlrClamp = 40.0;

/// Gaussian upper-tail probability Q(x).
double q_func(double x);

class BiosChannel {
  public:
    enum class Kind { BpskAwgn, Bsc };

    static BiosChannel bpsk_awgn(double sigma);
    /// SNR_dB = 10*log10(1/sigma^2) with unit-energy BPSK; equals Eb/N0 for rate 1/2.
    static BiosChannel awgn_from_snr_db(double snr_db);
    static BiosChannel bsc(double p);

    Kind kind() const { return kind_; }
    double sigma() const { return sigma_; }
    double snr_db() const;

    /// AWGN: y_j = (-1)^{x_j} + z_j with z ~ N(0, sigma^2). BSC: y_j in {0,1}.
    RealVector transmit(const BitVector& x, std::mt19937_64& rng) const;

    /// Per-symbol log P(y|0)/P(y|1). May contain +/-inf for degenerate channels.
    RealVector llr(const RealVector& y) const;
    double llr_one(double y) const;

    /// y_j if w_j = 0, else pi(y_j); involutive.
    RealVector flip(RealVector y, const BitVector& w) const;

    BitVector hard_decision(const RealVector& y) const;

    /// Crossover probability of the hard-decision channel: Q(1/sigma) for AWGN, p for BSC.
    double hard_crossover() const;

    /// Pr{hard decision wrong | y_j} = min(P(y|0),P(y|1)) / (P(y|0)+P(y|1)).
    double posterior_flip_prob(double y_j) const;

    /// Monte Carlo estimate of E[log2 P(Y|0)/P(Y)] in bits per use, with its
    /// standard error. BSC is evaluated in closed form 1 - H2(p).
    std::pair<double, double> bios_capacity(std::size_t samples, std::mt19937_64& rng) const;

    /// Log-density (up to a per-channel constant) of output y given input bit.
    double log_density(double y, bool bit) const;

  private:
    BiosChannel(Kind k, double param);
    Kind kind_;
    double sigma_ = 0.0; // AWGN noise std-dev
    double p_ = 0.0;     // BSC crossover
};

} // namespace freeride
