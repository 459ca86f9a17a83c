#include "freeride/random_code.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace freeride {

namespace {

constexpr std::size_t kTableMaxK1 = 20;   // s*H^T table budget, 2^{k1} * m bits
constexpr std::size_t kSearchMaxK1 = 24;  // exhaustive-search guard

// In-place Walsh-Hadamard transform, natural binary ordering.
void wht(std::vector<double>& a) {
    for (std::size_t h = 1; h < a.size(); h <<= 1) {
        for (std::size_t i = 0; i < a.size(); i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double x = a[j], y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
        }
    }
}

BitVector index_to_bits(std::uint64_t v, std::size_t k1) {
    BitVector out(k1);
    for (std::size_t i = 0; i < k1; ++i)
        if ((v >> i) & 1) out.set(i, true);
    return out;
}

} // namespace

RandomFreeRideCode RandomFreeRideCode::generate(std::size_t k1, const LdpcCode& code,
                                                std::mt19937_64& rng) {
    if (k1 > code.m()) throw std::invalid_argument("generate: k1 must be <= m");
    const std::size_t n = code.n(), m = code.m();

    RandomFreeRideCode frc;
    frc.k1_ = k1;
    constexpr int kMaxRetries = 64;
    for (int attempt = 0;; ++attempt) {
        frc.g1_ = DenseBitMatrix(k1, n);
        std::uniform_int_distribution<std::uint64_t> word;
        for (std::size_t r = 0; r < k1; ++r) {
            auto row = frc.g1_.row(r);
            for (auto& w : row) w = word(rng);
            // mask tail bits beyond n
            if (n % 64) row[row.size() - 1] &= (std::uint64_t{1} << (n % 64)) - 1;
        }
        frc.row_syndromes_ = DenseBitMatrix(k1, m);
        for (std::size_t r = 0; r < k1; ++r)
            frc.row_syndromes_.set_row(r, code.syndrome(frc.g1_.row_vector(r)));
        if (gf2_rank(frc.row_syndromes_) == k1) break;
        if (attempt + 1 >= kMaxRetries)
            throw ConstructionError("generate: could not reach coset-distinct G1");
    }

    frc.syndrome_cols_.assign(m, 0);
    for (std::size_t r = 0; r < k1; ++r)
        for (std::size_t i = 0; i < m; ++i)
            if (frc.row_syndromes_.get(r, i))
                frc.syndrome_cols_[i] |= std::uint32_t{1} << r;

    // Candidate syndromes do not depend on the channel observation, so they
    // can be precomputed and stored (subset-XOR over the rows of G1*H^T).
    if (k1 > 0 && k1 <= kTableMaxK1) {
        frc.syn_words_ = (m + 63) / 64;
        frc.syndrome_table_.assign((std::size_t{1} << k1) * frc.syn_words_, 0);
        for (std::uint64_t v = 1; v < (std::uint64_t{1} << k1); ++v) {
            const std::uint64_t prev = v & (v - 1);
            const std::size_t bit = static_cast<std::size_t>(std::countr_zero(v));
            const auto row = frc.row_syndromes_.row(bit);
            auto* dst = frc.syndrome_table_.data() + v * frc.syn_words_;
            const auto* src = frc.syndrome_table_.data() + prev * frc.syn_words_;
            for (std::size_t i = 0; i < frc.syn_words_; ++i) dst[i] = src[i] ^ row[i];
        }
    }
    return frc;
}

BitVector RandomFreeRideCode::encode(const BitVector& v) const {
    if (v.size() != k1_) throw std::invalid_argument("encode: extra-bit length mismatch");
    if (k1_ == 0) return BitVector(g1_.cols());
    return vec_mat_mul(v, g1_);
}

BitVector RandomFreeRideCode::encode_index(std::uint64_t v) const {
    return encode(index_to_bits(v, k1_));
}

std::size_t RandomFreeRideCode::unsat_count(const LdpcCode& code, const BitVector& y_hard,
                                            const BitVector& s) const {
    return code.syndrome(y_hard ^ s).weight();
}

std::size_t RandomFreeRideCode::unsat_count_indexed(const LdpcCode& code, const BitVector& y_hard,
                                                    std::uint64_t v) const {
    const BitVector base = code.syndrome(y_hard);
    if (!syndrome_table_.empty()) {
        const auto* entry = syndrome_table_.data() + v * syn_words_;
        const auto words = base.words();
        std::size_t w = 0;
        for (std::size_t i = 0; i < syn_words_; ++i)
            w += static_cast<std::size_t>(std::popcount(words[i] ^ entry[i]));
        return w;
    }
    BitVector syn = base;
    for (std::size_t r = 0; r < k1_; ++r)
        if ((v >> r) & 1) syn ^= row_syndromes_.row_vector(r);
    return syn.weight();
}

// Scans all 2^{k1} candidates for the strictly largest Walsh coefficient;
// ascending order makes ties resolve to the smallest v.
std::uint64_t RandomFreeRideCode::argbest_walsh(std::vector<double> bucket) const {
    wht(bucket);
    std::uint64_t best = 0;
    double best_val = bucket[0];
    for (std::uint64_t v = 1; v < bucket.size(); ++v) {
        if (bucket[v] > best_val) {
            best_val = bucket[v];
            best = v;
        }
    }
    return best;
}

std::pair<BitVector, BitVector> RandomFreeRideCode::hdd_decode(const LdpcCode& code,
                                                               const BiosChannel& ch,
                                                               const RealVector& y) const {
    if (k1_ == 0) return {BitVector(0), BitVector(code.n())};
    if (k1_ > kSearchMaxK1) throw std::invalid_argument("hdd_decode: k1 exceeds search guard");
    const BitVector y_hard = ch.hard_decision(y);
    const BitVector base = code.syndrome(y_hard);

    // N(v) = m/2 - W[v]/2 where W is the Walsh transform of the per-check
    // signs bucketed by candidate-syndrome column patterns, so the smallest
    // N(s) is the largest Walsh coefficient. Exact: all terms are integers.
    std::vector<double> bucket(std::size_t{1} << k1_, 0.0);
    for (std::size_t i = 0; i < base.size(); ++i)
        bucket[syndrome_cols_[i]] += base.get(i) ? -1.0 : 1.0;
    const std::uint64_t v = argbest_walsh(std::move(bucket));
    return {index_to_bits(v, k1_), encode_index(v)};
}

std::pair<BitVector, BitVector> RandomFreeRideCode::sdd_decode(const LdpcCode& code,
                                                               const BiosChannel& ch,
                                                               const RealVector& y) const {
    if (k1_ == 0) return {BitVector(0), BitVector(code.n())};
    if (k1_ > kSearchMaxK1) throw std::invalid_argument("sdd_decode: k1 exceeds search guard");
    const RealVector lam = ch.llr(y);

    // Flipping by s only toggles the sign of each check LLR by the parity of
    // s on that check, so Lambda(s) = sum_i (-1)^{(s H^T)_i} L_i with L_i
    // computed once from the raw LLRs.
    constexpr double kTanhCap = 1.0 - 1e-15;
    std::vector<double> bucket(std::size_t{1} << k1_, 0.0);
    const auto& h = code.h();
    for (std::size_t i = 0; i < code.m(); ++i) {
        double prod = 1.0;
        for (auto j : h.row(i)) prod *= std::tanh(0.5 * std::clamp(lam[j], -kLlrClamp, kLlrClamp));
        bucket[syndrome_cols_[i]] += 2.0 * std::atanh(std::clamp(prod, -kTanhCap, kTanhCap));
    }
    const std::uint64_t v = argbest_walsh(std::move(bucket));
    return {index_to_bits(v, k1_), encode_index(v)};
}

SyndromeStatModel stat_model(const LdpcCode& code, const BiosChannel& ch) {
    if (!code.regular()) throw std::invalid_argument("stat_model: regular code required");
    SyndromeStatModel sm;
    sm.m = code.m();
    sm.rho = code.rho();
    sm.p_b = ch.hard_crossover();
    const double base = 1.0 - 2.0 * sm.p_b;
    sm.p = 0.5 * (1.0 - std::pow(base, static_cast<double>(sm.rho)));
    sm.mu0 = static_cast<double>(sm.m) * sm.p;
    sm.sigma0_sq = static_cast<double>(sm.m) / 4.0 *
                   (1.0 - std::pow(base, 2.0 * static_cast<double>(sm.rho)));
    sm.mu1 = static_cast<double>(sm.m) / 2.0;
    sm.sigma1_sq = static_cast<double>(sm.m) / 4.0;
    return sm;
}

namespace {

// Adaptive Simpson quadrature to absolute tolerance `tol`.
template <typename F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double lm = 0.5 * (a + mid), rm = 0.5 * (mid + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, mid, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, mid, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
    const double mid = 0.5 * (a + b);
    const double fa = f(a), fm = f(mid), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace

double wer_estimate(const SyndromeStatModel& model, std::size_t k1) {
    if (k1 == 0) throw std::invalid_argument("wer_estimate: k1 must be >= 1");
    const double m = static_cast<double>(model.m);
    const double power = std::pow(2.0, static_cast<double>(k1)) - 1.0;
    auto q_pow = [&](double t) {
        const double q = q_func((2.0 * t - m) / std::sqrt(m));
        return q > 0.0 ? std::exp(power * std::log(q)) : 0.0;
    };
    const double sigma0 = std::sqrt(model.sigma0_sq);
    if (sigma0 == 0.0) return std::clamp(1.0 - q_pow(model.mu0), 0.0, 1.0);

    const double inv_norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi_v<double>) * sigma0);
    auto weighted = [&](double t) {
        const double z = (t - model.mu0) / sigma0;
        return q_pow(t) * inv_norm * std::exp(-0.5 * z * z);
    };
    const double total =
        integrate(weighted, model.mu0 - 10.0 * sigma0, model.mu0 + 10.0 * sigma0, 1e-10);
    return std::clamp(1.0 - total, 0.0, 1.0);
}

SyndromeHistogram syndrome_histogram(const LdpcCode& code, const RandomFreeRideCode& frc,
                                     const BiosChannel& ch, std::size_t trials,
                                     std::mt19937_64& rng) {
    if (trials == 0) throw std::invalid_argument("syndrome_histogram: trials must be >= 1");
    if (frc.k1() == 0) throw std::invalid_argument("syndrome_histogram: k1 must be >= 1");
    SyndromeHistogram hist;
    const std::uint64_t count = std::uint64_t{1} << frc.k1();
    std::uniform_int_distribution<std::uint64_t> pick_v(0, count - 1);
    std::uniform_int_distribution<std::uint64_t> pick_offset(1, count - 1);
    std::bernoulli_distribution coin(0.5);

    for (std::size_t t = 0; t < trials; ++t) {
        BitVector u(code.k());
        for (std::size_t i = 0; i < u.size(); ++i) u.set(i, coin(rng));
        const std::uint64_t v = pick_v(rng);
        const BitVector x = code.encode(u) ^ frc.encode_index(v);
        const BitVector y_hard = ch.hard_decision(ch.transmit(x, rng));
        const std::uint64_t v_wrong = (v + pick_offset(rng)) % count; // uniform over s != w
        ++hist.correct[static_cast<std::uint32_t>(frc.unsat_count_indexed(code, y_hard, v))];
        ++hist.wrong[static_cast<std::uint32_t>(frc.unsat_count_indexed(code, y_hard, v_wrong))];
    }
    return hist;
}

ScResult successive_cancellation(const LdpcCode& code, const RandomFreeRideCode& frc,
                                 const BiosChannel& ch, const RealVector& y,
                                 std::size_t max_iters, ExtraDecoder dec) {
    auto [v_hat, w_hat] = dec == ExtraDecoder::Hdd ? frc.hdd_decode(code, ch, y)
                                                   : frc.sdd_decode(code, ch, y);
    const RealVector y_clean = ch.flip(y, w_hat);
    ScResult res;
    res.payload = code.sum_product_decode(ch.llr(y_clean), max_iters);
    res.u_hat = code.extract_message(res.payload.codeword_estimate);
    res.v_hat = std::move(v_hat);
    return res;
}

} // namespace freeride
