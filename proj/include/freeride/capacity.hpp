#pragma once

// Accessible-capacity evaluation for short payload codes: Monte Carlo
// estimates of the per-use mutual information of the coded link, the
// accessible capacity C_a = C_BIOS - I(C^n;Y^n)/n, and the C_BIOS - R0
// lower bound.

#include <cstdint>
#include <random>
#include <vector>

#include "freeride/channel.hpp"
#include "freeride/gf2.hpp"

namespace freeride {

/// A short binary linear block code held as its explicit codeword list.
class ShortCode {
  public:
    /// Enumerates all 2^k codewords of a generator matrix (k <= 16).
    static ShortCode from_generator(const DenseBitMatrix& g);
    static ShortCode repetition2();       // [2,1]
    static ShortCode extended_hamming8(); // [8,4]

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    const std::vector<BitVector>& codewords() const { return codewords_; }

  private:
    std::size_t n_ = 0, k_ = 0;
    std::vector<BitVector> codewords_;
};

struct CapacityEstimate {
    double value = 0.0;   // bits per channel use
    double std_err = 0.0;
    std::size_t samples = 0;
};

/// Monte Carlo estimate of I(C^n;Y^n)/n in bits per use with uniform
/// codewords; the 2^k-term output mixture is evaluated in the log domain.
CapacityEstimate code_mutual_information(const ShortCode& sc, const BiosChannel& ch,
                                         std::size_t samples, std::mt19937_64& rng);

/// C_a = C_BIOS - I(C^n;Y^n)/n, with both terms driven by common noise
/// realizations so the difference estimator stays tight.
CapacityEstimate accessible_capacity(const ShortCode& sc, const BiosChannel& ch,
                                     std::size_t samples, std::mt19937_64& rng);

/// C_BIOS - R0 (may be negative; reported as-is).
CapacityEstimate lower_bound(const BiosChannel& ch, double r0, std::size_t samples,
                             std::mt19937_64& rng);

} // namespace freeride
