#include "freeride/structured_code.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace freeride {

SyndromeCode build_repetition(std::size_t k1, std::size_t m) {
    if (k1 == 0) throw std::invalid_argument("build_repetition: k1 must be >= 1");
    if (k1 > m) throw std::invalid_argument("build_repetition: k1 must be <= m");
    SyndromeCode sc;
    sc.kind = SyndromeCode::Kind::RepetitionProduct;
    sc.k1 = k1;
    sc.m = m;
    sc.block_len = m / k1;
    sc.blocks = k1;
    sc.gs = DenseBitMatrix(k1, m);
    for (std::size_t b = 0; b < k1; ++b)
        for (std::size_t j = 0; j < sc.block_len; ++j) sc.gs.set(b, b * sc.block_len + j, true);
    return sc;
}

namespace {

// One construction attempt for a fixed eta. A short trailing block (when
// eta+1 does not divide k1) keeps the all-ones row plus the lowest monomials,
// which survive puncturing; full blocks use the order all-ones, x_{eta-1},
// ..., x_0. Returns nothing when the blocks do not fit or the rank drops.
std::optional<SyndromeCode> try_build_rm1(std::size_t k1, std::size_t m, std::size_t eta) {
    const std::size_t block_size = std::size_t{1} << eta;
    const std::size_t nblocks = (k1 + eta) / (eta + 1);

    SyndromeCode sc;
    sc.kind = SyndromeCode::Kind::Rm1Product;
    sc.k1 = k1;
    sc.m = m;
    sc.eta = eta;
    sc.gs = DenseBitMatrix(k1, m);

    std::size_t row_base = 0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        RmBlock blk;
        blk.col_offset = b * block_size;
        if (blk.col_offset >= m) return std::nullopt;
        blk.cols = std::min(block_size, m - blk.col_offset); // punctured if short
        blk.rows = std::min(eta + 1, k1 - row_base);
        for (std::size_t r = 1; r < blk.rows; ++r)
            for (std::size_t j = 0; j < blk.cols; ++j)
                if ((j >> (blk.rows - 1 - r)) & 1) sc.gs.set(row_base + r, blk.col_offset + j, true);
        for (std::size_t j = 0; j < blk.cols; ++j) sc.gs.set(row_base, blk.col_offset + j, true);
        row_base += blk.rows;
        sc.rm_blocks.push_back(blk);
    }
    if (gf2_rank(sc.gs) != k1) return std::nullopt;
    return sc;
}

} // namespace

SyndromeCode build_rm1(std::size_t k1, std::size_t m) {
    if (k1 == 0) throw std::invalid_argument("build_rm1: k1 must be >= 1");

    const std::size_t budget = 2 * m;
    std::size_t eta_max = 0;
    while ((std::size_t{1} << (eta_max + 1)) <= budget) ++eta_max;

    // Prefer the largest eta whose dimension divides k1; fall back to padding
    // the dimension, with a short trailing block carrying the leftover rows.
    for (std::size_t e = eta_max; e >= 1; --e) {
        if (k1 % (e + 1) != 0) continue;
        if ((k1 / (e + 1)) * (std::size_t{1} << e) > budget) continue;
        if (auto sc = try_build_rm1(k1, m, e)) return std::move(*sc);
    }
    for (std::size_t e = eta_max; e >= 1; --e) {
        const std::size_t blocks = (k1 + e) / (e + 1);
        if (blocks * (std::size_t{1} << e) > budget) continue;
        if (auto sc = try_build_rm1(k1, m, e)) return std::move(*sc);
    }
    throw ConstructionError("build_rm1: no feasible eta");
}

BitVector StructuredFreeRideCode::encode(const BitVector& v) const {
    if (v.size() != k1()) throw std::invalid_argument("encode: extra-bit length mismatch");
    return vec_mat_mul(v, g1);
}

BitVector StructuredFreeRideCode::encode_index(std::uint64_t v) const {
    BitVector bits(k1());
    for (std::size_t i = 0; i < k1(); ++i)
        if ((v >> i) & 1) bits.set(i, true);
    return encode(bits);
}

StructuredFreeRideCode lift(const LdpcCode& code, SyndromeCode sc) {
    if (sc.m != code.m()) throw std::invalid_argument("lift: syndrome length mismatch");
    const auto& pivots = code.pivot_cols();
    const std::size_t m = code.m();

    DenseBitMatrix h1(m, m);
    const DenseBitMatrix h_dense = code.h().to_dense();
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j < m; ++j) h1.set(r, j, h_dense.get(r, pivots[j]));
    const DenseBitMatrix h1_inv = invert(h1);

    StructuredFreeRideCode frc;
    frc.pivot_cols = pivots;
    frc.g1 = DenseBitMatrix(sc.k1, code.n());
    for (std::size_t r = 0; r < sc.k1; ++r) {
        const BitVector packed = mat_vec_mul(h1_inv, sc.gs.row_vector(r)); // Gs (H1^{-1})^T
        for (std::size_t j = 0; j < m; ++j)
            if (packed.get(j)) frc.g1.set(r, pivots[j], true);
        if (code.syndrome(frc.g1.row_vector(r)) != sc.gs.row_vector(r))
            throw ConstructionError("lift: G1*H^T != Gs");
    }
    frc.syndrome_code = std::move(sc);
    return frc;
}

SyndromeChannelModel syndrome_channel(const LdpcCode& code, const BiosChannel& ch,
                                      const RealVector& y, ExtraDecoder mode) {
    const std::size_t m = code.m();
    SyndromeChannelModel model;
    model.mode = mode;
    model.cross_probs.resize(m);
    model.llrs.resize(m);
    const auto& h = code.h();

    if (mode == ExtraDecoder::Hdd) {
        const BitVector b = code.syndrome(ch.hard_decision(y));
        const double p_b = ch.hard_crossover();
        for (std::size_t i = 0; i < m; ++i) {
            const double p =
                0.5 * (1.0 - std::pow(1.0 - 2.0 * p_b, static_cast<double>(h.row_weight(i))));
            model.cross_probs[i] = p;
            const double mag =
                p > 0.0 ? std::min(std::log((1.0 - p) / p), kLlrClamp) : kLlrClamp;
            model.llrs[i] = b.get(i) ? -mag : mag;
        }
        return model;
    }

    const RealVector lam = ch.llr(y);
    constexpr double kTanhCap = 1.0 - 1e-15;
    for (std::size_t i = 0; i < m; ++i) {
        double prod = 1.0;
        for (auto j : h.row(i)) prod *= std::tanh(0.5 * std::clamp(lam[j], -kLlrClamp, kLlrClamp));
        model.cross_probs[i] = 0.5 * (1.0 - std::fabs(prod));
        model.llrs[i] = 2.0 * std::atanh(std::clamp(prod, -kTanhCap, kTanhCap));
    }
    return model;
}

BitVector mlg_decode_repetition(const SyndromeCode& sc, const SyndromeChannelModel& model) {
    if (sc.kind != SyndromeCode::Kind::RepetitionProduct)
        throw std::invalid_argument("mlg_decode_repetition: repetition-product code required");
    BitVector out(sc.k1);
    for (std::size_t b = 0; b < sc.blocks; ++b) {
        const std::size_t off = b * sc.block_len;
        if (model.mode == ExtraDecoder::Hdd) {
            std::size_t ones = 0;
            for (std::size_t j = 0; j < sc.block_len; ++j)
                if (model.llrs[off + j] < 0.0) ++ones;
            out.set(b, 2 * ones > sc.block_len); // tie -> 0
        } else {
            double sum = 0.0;
            for (std::size_t j = 0; j < sc.block_len; ++j) sum += model.llrs[off + j];
            out.set(b, sum < 0.0); // zero sum -> 0
        }
    }
    return out;
}

namespace {

void wht(std::vector<double>& a) {
    for (std::size_t h = 1; h < a.size(); h <<= 1)
        for (std::size_t i = 0; i < a.size(); i += h << 1)
            for (std::size_t j = i; j < i + h; ++j) {
                const double x = a[j], y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
}

} // namespace

BitVector fht_ml_decode_rm(const SyndromeCode& sc, const SyndromeChannelModel& model) {
    if (sc.kind != SyndromeCode::Kind::Rm1Product)
        throw std::invalid_argument("fht_ml_decode_rm: RM(1,eta)-product code required");
    BitVector out(sc.k1);
    const std::size_t len = std::size_t{1} << sc.eta;
    std::vector<double> t(len);

    std::size_t row_base = 0;
    for (const auto& blk : sc.rm_blocks) {
        std::fill(t.begin(), t.end(), 0.0);
        for (std::size_t pos = 0; pos < blk.cols; ++pos) t[pos] = model.llrs[blk.col_offset + pos];
        wht(t);

        // Message bit 0 is the all-ones coefficient (the sign); bit r >= 1 is
        // the coefficient of monomial x_{rows-1-r}, i.e. transform index bit
        // rows-1-r. Ascending message order resolves ties to the smallest value.
        std::uint64_t best_msg = 0;
        double best_val = t[0];
        for (std::uint64_t msg = 1; msg < (std::uint64_t{1} << blk.rows); ++msg) {
            std::size_t u = 0;
            for (std::size_t r = 1; r < blk.rows; ++r)
                if ((msg >> r) & 1) u |= std::size_t{1} << (blk.rows - 1 - r);
            const double val = (msg & 1) ? -t[u] : t[u];
            if (val > best_val) {
                best_val = val;
                best_msg = msg;
            }
        }
        for (std::size_t r = 0; r < blk.rows; ++r)
            if ((best_msg >> r) & 1) out.set(row_base + r, true);
        row_base += blk.rows;
    }
    return out;
}

BitVector hdd_min_distance_decode(const SyndromeCode& sc, const BitVector& syndrome) {
    if (syndrome.size() != sc.m) throw std::invalid_argument("hdd_min_distance_decode: length mismatch");
    if (sc.k1 > 24) throw std::invalid_argument("hdd_min_distance_decode: k1 exceeds search guard");

    // Gray-code walk over all messages; best (weight, v) lexicographically.
    BitVector current = syndrome;
    std::uint64_t best_v = 0, gray = 0;
    std::size_t best_w = current.weight();
    for (std::uint64_t idx = 1; idx < (std::uint64_t{1} << sc.k1); ++idx) {
        const std::size_t bit = static_cast<std::size_t>(std::countr_zero(idx));
        gray ^= std::uint64_t{1} << bit;
        current ^= sc.gs.row_vector(bit);
        const std::size_t w = current.weight();
        if (w < best_w || (w == best_w && gray < best_v)) {
            best_w = w;
            best_v = gray;
        }
    }
    BitVector out(sc.k1);
    for (std::size_t i = 0; i < sc.k1; ++i)
        if ((best_v >> i) & 1) out.set(i, true);
    return out;
}

double wer_estimate_repetition(std::size_t m1, double p, std::size_t k1) {
    if (p < 0.0 || p > 0.5) throw std::invalid_argument("wer_estimate_repetition: p must be in [0,1/2]");
    if (m1 == 0 || k1 == 0) throw std::invalid_argument("wer_estimate_repetition: m1, k1 must be >= 1");
    if (p == 0.0) return 0.0;

    // Binomial upper tail from ceil(m1/2), accumulated in the log domain.
    const double lp = std::log(p), lq = std::log1p(-p);
    const double n = static_cast<double>(m1);
    double beta = 0.0;
    for (std::size_t i = (m1 + 1) / 2; i <= m1; ++i) {
        const double x = static_cast<double>(i);
        const double log_c = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0);
        beta += std::exp(log_c + x * lp + (n - x) * lq);
    }
    beta = std::min(beta, 1.0);
    return 1.0 - std::pow(1.0 - beta, static_cast<double>(k1));
}

BitVector decode_structured_extra(const StructuredFreeRideCode& frc,
                                  const SyndromeChannelModel& model) {
    return frc.syndrome_code.kind == SyndromeCode::Kind::RepetitionProduct
               ? mlg_decode_repetition(frc.syndrome_code, model)
               : fht_ml_decode_rm(frc.syndrome_code, model);
}

ScResult successive_cancellation(const LdpcCode& code, const StructuredFreeRideCode& frc,
                                 const BiosChannel& ch, const RealVector& y,
                                 std::size_t max_iters, ExtraDecoder dec) {
    const SyndromeChannelModel model = syndrome_channel(code, ch, y, dec);
    BitVector v_hat = decode_structured_extra(frc, model);
    const RealVector y_clean = ch.flip(y, frc.encode(v_hat));
    ScResult res;
    res.payload = code.sum_product_decode(ch.llr(y_clean), max_iters);
    res.u_hat = code.extract_message(res.payload.codeword_estimate);
    res.v_hat = std::move(v_hat);
    return res;
}

} // namespace freeride
