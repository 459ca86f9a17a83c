#pragma once

// Structured free-ride codes built on the syndrome channel y_hat*H^T =
// w*H^T + z_hat*H^T: repetition and first-order Reed-Muller syndrome codes,
// their lifting to length-n codes through the inverse of an invertible
// column set of H, majority-logic and fast-Hadamard-transform ML decoding.

#include <cstdint>
#include <vector>

#include "freeride/channel.hpp"
#include "freeride/gf2.hpp"
#include "freeride/ldpc.hpp"
#include "freeride/random_code.hpp"

namespace freeride {

struct RmBlock {
    std::size_t col_offset = 0;
    std::size_t cols = 0; // 2^eta, shorter when punctured
    std::size_t rows = 0; // eta+1, fewer for a padded trailing block
};

struct SyndromeCode {
    enum class Kind { RepetitionProduct, Rm1Product };

    Kind kind = Kind::RepetitionProduct;
    std::size_t k1 = 0;
    std::size_t m = 0;
    DenseBitMatrix gs; // k1 x m, rank k1

    // RepetitionProduct
    std::size_t block_len = 0; // m1 = floor(m/k1)
    std::size_t blocks = 0;

    // Rm1Product
    std::size_t eta = 0;
    std::vector<RmBlock> rm_blocks;
};

/// k1 disjoint all-ones blocks of length floor(m/k1); trailing columns zero.
SyndromeCode build_repetition(std::size_t k1, std::size_t m);

/// Cartesian product of RM(1,eta) blocks on disjoint column ranges. Chooses
/// the largest eta with (eta+1) | k1 and (k1/(eta+1)) * 2^eta <= 2m; when no
/// eta divides, the dimension is padded and the trailing block keeps only the
/// first k1 mod (eta+1) generator rows. A block overrunning m is punctured
/// (trailing columns dropped) and the rank re-verified.
SyndromeCode build_rm1(std::size_t k1, std::size_t m);

struct StructuredFreeRideCode {
    SyndromeCode syndrome_code;
    DenseBitMatrix g1; // k1 x n, zero outside pivot_cols
    std::vector<std::size_t> pivot_cols;

    std::size_t k1() const { return syndrome_code.k1; }

    /// w = v * G1; w * H^T = v * Gs.
    BitVector encode(const BitVector& v) const;
    BitVector encode_index(std::uint64_t v) const;
};

/// Lifts a syndrome code to a free-ride code with G1*H^T = Gs, scattering
/// Gs*(H1^{-1})^T into the pivot columns of H. Verifies the postcondition.
StructuredFreeRideCode lift(const LdpcCode& code, SyndromeCode sc);

/// Memoryless BSC model of the syndrome channel. The llrs carry the observed
/// syndrome through their sign; magnitudes come from Eq.-style reliabilities:
/// constant log((1-p)/p) for hard decisions, the tanh rule over the raw
/// channel LLRs for soft decisions.
struct SyndromeChannelModel {
    ExtraDecoder mode = ExtraDecoder::Hdd;
    std::vector<double> cross_probs; // per-check Pr{(Z H^T)_i = 1}, in [0, 1/2]
    RealVector llrs;                 // length m, signed
};

SyndromeChannelModel syndrome_channel(const LdpcCode& code, const BiosChannel& ch,
                                      const RealVector& y, ExtraDecoder mode);

/// Majority-logic decoding of a repetition-product syndrome code. Hard mode
/// votes on syndrome bits (ties to 0); soft mode takes the sign of the summed
/// block LLRs (zero sum to 0).
BitVector mlg_decode_repetition(const SyndromeCode& sc, const SyndromeChannelModel& model);

/// Exact per-block ML decoding of an RM(1,eta)-product syndrome code via the
/// fast Hadamard transform; punctured positions contribute zero LLR. Ties go
/// to the smallest message.
BitVector fht_ml_decode_rm(const SyndromeCode& sc, const SyndromeChannelModel& model);

/// Exhaustive minimum-distance decoding over all 2^{k1} messages (k1 <= 24).
BitVector hdd_min_distance_decode(const SyndromeCode& sc, const BitVector& syndrome);

/// Ideal-BSC estimate for repetition blocks: per-block error is the binomial
/// upper tail from ceil(m1/2), and the word estimate is 1 - (1-beta)^{k1}.
double wer_estimate_repetition(std::size_t m1, double p, std::size_t k1);

BitVector decode_structured_extra(const StructuredFreeRideCode& frc,
                                  const SyndromeChannelModel& model);

ScResult successive_cancellation(const LdpcCode& code, const StructuredFreeRideCode& frc,
                                 const BiosChannel& ch, const RealVector& y,
                                 std::size_t max_iters, ExtraDecoder dec);

} // namespace freeride
