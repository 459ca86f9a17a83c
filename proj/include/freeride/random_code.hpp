#pragma once

// Random free-ride codes: Bernoulli(1/2) generator matrices superimposed on
// the LDPC payload, exhaustive-search hard- and soft-decision decoders over
// the 2^{k1} candidate codewords, syndrome statistics and the analytic WER
// estimate for hard-decision decoding.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "freeride/channel.hpp"
#include "freeride/gf2.hpp"
#include "freeride/ldpc.hpp"

namespace freeride {

enum class ExtraDecoder { Hdd, Sdd };

class RandomFreeRideCode {
  public:
    /// Draws G1 with i.i.d. fair-coin entries, redrawing until all 2^{k1}
    /// codewords fall in distinct cosets of the payload code
    /// (rank(G1*H^T) = k1). Deterministic for a fixed rng state.
    static RandomFreeRideCode generate(std::size_t k1, const LdpcCode& code, std::mt19937_64& rng);

    std::size_t k1() const { return k1_; }
    const DenseBitMatrix& g1() const { return g1_; }

    /// w = v * G1.
    BitVector encode(const BitVector& v) const;
    BitVector encode_index(std::uint64_t v) const;

    /// N(s) = W_H((y_hard + s) H^T), the number of unsatisfied parity checks.
    std::size_t unsat_count(const LdpcCode& code, const BitVector& y_hard, const BitVector& s) const;
    /// Same via the precomputed s*H^T table (falls back to direct computation).
    std::size_t unsat_count_indexed(const LdpcCode& code, const BitVector& y_hard,
                                    std::uint64_t v) const;

    bool has_syndrome_table() const { return !syndrome_table_.empty(); }

    /// Exhaustive search over all candidates s = v*G1 for the smallest N(s);
    /// ties go to the smallest integer v. Returns (v_hat, w_hat).
    std::pair<BitVector, BitVector> hdd_decode(const LdpcCode& code, const BiosChannel& ch,
                                               const RealVector& y) const;

    /// Exhaustive search for the largest Lambda(s), the sum over checks of
    /// the tanh-rule LLR of the sign-flipped channel LLRs; ties to smallest v.
    std::pair<BitVector, BitVector> sdd_decode(const LdpcCode& code, const BiosChannel& ch,
                                               const RealVector& y) const;

  private:
    std::size_t k1_ = 0;
    DenseBitMatrix g1_;            // k1 x n
    DenseBitMatrix row_syndromes_; // k1 x m, G1*H^T
    std::vector<std::uint32_t> syndrome_cols_; // column i of G1*H^T as a k1-bit pattern
    std::vector<std::uint64_t> syndrome_table_; // s*H^T for all 2^{k1} candidates (k1 <= 20)
    std::size_t syn_words_ = 0;

    std::uint64_t argbest_walsh(std::vector<double> bucket) const;
};

struct SyndromeStatModel {
    std::size_t m = 0;
    std::size_t rho = 0;
    double p_b = 0.0;      // hard-decision crossover
    double p = 0.0;        // probability a parity check is unsatisfied
    double mu0 = 0.0;      // mean of N(w)
    double sigma0_sq = 0.0;
    double mu1 = 0.0;      // mean of N(s), s != w
    double sigma1_sq = 0.0;
};

/// Normal-approximation moments of the unsatisfied-check counts:
/// p = (1/2)[1-(1-2 p_b)^rho], mu0 = m p, sigma0^2 = (m/4)[1-(1-2 p_b)^{2 rho}],
/// mu1 = m/2, sigma1^2 = m/4. Requires a regular code.
SyndromeStatModel stat_model(const LdpcCode& code, const BiosChannel& ch);

/// Gaussian-approximation estimate of the HDD word error rate: one minus the
/// integral of Q((2t-m)/sqrt(m))^{2^{k1}-1} against the N(mu0, sigma0^2)
/// density over t in mu0 +/- 10 sigma0.
double wer_estimate(const SyndromeStatModel& model, std::size_t k1);

struct SyndromeHistogram {
    std::map<std::uint32_t, std::uint64_t> correct; // N(w)
    std::map<std::uint32_t, std::uint64_t> wrong;   // N(s) for one random s != w per trial
};

SyndromeHistogram syndrome_histogram(const LdpcCode& code, const RandomFreeRideCode& frc,
                                     const BiosChannel& ch, std::size_t trials,
                                     std::mt19937_64& rng);

struct ScResult {
    BitVector u_hat;
    BitVector v_hat;
    DecodeResult payload;
};

/// Successive cancellation: decode the extra bits, flip their codeword out of
/// the observation, then run the payload sum-product decoder.
ScResult successive_cancellation(const LdpcCode& code, const RandomFreeRideCode& frc,
                                 const BiosChannel& ch, const RealVector& y,
                                 std::size_t max_iters, ExtraDecoder dec);

} // namespace freeride
