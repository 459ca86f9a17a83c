#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "freeride/structured_code.hpp"

using namespace freeride;

namespace {

BitVector random_bits(std::size_t len, std::mt19937_64& rng) {
    BitVector v(len);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < len; ++i) v.set(i, coin(rng));
    return v;
}

BitVector index_bits(std::uint64_t v, std::size_t k1) {
    BitVector out(k1);
    for (std::size_t i = 0; i < k1; ++i)
        if ((v >> i) & 1) out.set(i, true);
    return out;
}

// Exhaustive inner-product ML oracle over all messages of the syndrome code.
BitVector ml_inner_product_oracle(const SyndromeCode& sc, const RealVector& llrs) {
    std::uint64_t best = 0;
    double best_score = -1e300;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << sc.k1); ++v) {
        const BitVector ws = vec_mat_mul(index_bits(v, sc.k1), sc.gs);
        double score = 0.0;
        for (std::size_t i = 0; i < sc.m; ++i) score += (ws.get(i) ? -1.0 : 1.0) * llrs[i];
        if (score > best_score) {
            best_score = score;
            best = v;
        }
    }
    return index_bits(best, sc.k1);
}

SyndromeChannelModel sdd_model_from_llrs(RealVector llrs) {
    SyndromeChannelModel model;
    model.mode = ExtraDecoder::Sdd;
    model.llrs = std::move(llrs);
    model.cross_probs.assign(model.llrs.size(), 0.0);
    return model;
}

} // namespace

TEST_CASE("build_repetition shapes") {
    const SyndromeCode one = build_repetition(1, 5);
    CHECK(one.gs.rows() == 1);
    CHECK(one.gs.cols() == 5);
    CHECK(one.gs.row_vector(0).to_string() == "11111");

    const SyndromeCode two = build_repetition(2, 6);
    CHECK(two.gs.row_vector(0).to_string() == "111000");
    CHECK(two.gs.row_vector(1).to_string() == "000111");

    const SyndromeCode big = build_repetition(18, 4032);
    CHECK(big.block_len == 224);
    CHECK(gf2_rank(big.gs) == 18);

    // Leftover columns stay zero.
    const SyndromeCode pad = build_repetition(3, 10);
    CHECK(pad.block_len == 3);
    for (std::size_t r = 0; r < 3; ++r) {
        CHECK_FALSE(pad.gs.get(r, 9));
    }
    CHECK_THROWS_AS(build_repetition(11, 10), std::invalid_argument);
}

TEST_CASE("build_rm1 canonical RM(1,2) block") {
    const SyndromeCode sc = build_rm1(3, 4);
    CHECK(sc.eta == 2);
    CHECK(sc.rm_blocks.size() == 1);
    // Documented row order: all-ones, x1, x0.
    CHECK(sc.gs.row_vector(0).to_string() == "1111");
    CHECK(sc.gs.row_vector(1).to_string() == "0011");
    CHECK(sc.gs.row_vector(2).to_string() == "0101");
}

TEST_CASE("build_rm1 paper-scale configurations") {
    const SyndromeCode k10 = build_rm1(10, 4032);
    CHECK(k10.eta == 9);
    CHECK(k10.rm_blocks.size() == 1);
    CHECK(k10.rm_blocks[0].cols == 512);
    CHECK(gf2_rank(k10.gs) == 10);

    const SyndromeCode k60 = build_rm1(60, 4032);
    CHECK(k60.eta == 9);
    CHECK(k60.rm_blocks.size() == 6);
    for (const auto& blk : k60.rm_blocks) CHECK(blk.cols == 512);
    CHECK(gf2_rank(k60.gs) == 60);
}

TEST_CASE("build_rm1 puncturing and dimension padding") {
    // k1 = 4 (eta = 3 divides), m = 6 < 8: single punctured block.
    const SyndromeCode punct = build_rm1(4, 6);
    CHECK(punct.eta == 3);
    CHECK(punct.rm_blocks.size() == 1);
    CHECK(punct.rm_blocks[0].cols == 6);
    CHECK(gf2_rank(punct.gs) == 4);

    // k1 = 7: the divisible candidate eta = 6 would puncture a monomial row
    // to zero, so the search falls back to a padded two-block layout.
    const SyndromeCode padded = build_rm1(7, 32);
    CHECK(gf2_rank(padded.gs) == 7);
    std::size_t rows = 0;
    for (const auto& blk : padded.rm_blocks) rows += blk.rows;
    CHECK(rows == 7);
    CHECK(padded.rm_blocks.back().rows < padded.eta + 1);

    const SyndromeCode tight = build_rm1(7, 12);
    CHECK(gf2_rank(tight.gs) == 7);
    CHECK(tight.rm_blocks.size() == 2);
    CHECK(tight.rm_blocks.back().cols < (std::size_t{1} << tight.eta));

    // No layout at all fits here.
    CHECK_THROWS_AS(build_rm1(2, 1), ConstructionError);
}

TEST_CASE("lift: trivial and structured cases") {
    std::mt19937_64 rng(3);

    SUBCASE("zero syndrome rows give zero G1 rows") {
        const LdpcCode code = LdpcCode::construct_regular(32, 3, 6, 7);
        SyndromeCode sc = build_repetition(2, code.m());
        sc.gs = DenseBitMatrix(2, code.m()); // zero out
        const StructuredFreeRideCode frc = lift(code, sc);
        CHECK_FALSE(frc.g1.row_vector(0).any());
        CHECK_FALSE(frc.g1.row_vector(1).any());
    }

    SUBCASE("H = [I | A]: pivots are the first m columns and G1 = [Gs, 0]") {
        std::vector<std::vector<std::uint32_t>> rows(4);
        for (std::size_t r = 0; r < 4; ++r) {
            rows[r].push_back(static_cast<std::uint32_t>(r));
            rows[r].push_back(static_cast<std::uint32_t>(4 + r));
            rows[r].push_back(static_cast<std::uint32_t>(4 + ((r + 1) % 4)));
            std::sort(rows[r].begin(), rows[r].end());
        }
        const LdpcCode code = LdpcCode::from_parity_check(SparseBitMatrix(4, 8, rows));
        const SyndromeCode sc = build_repetition(2, 4);
        const StructuredFreeRideCode frc = lift(code, sc);
        CHECK(frc.pivot_cols == std::vector<std::size_t>{0, 1, 2, 3});
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 8; ++c)
                CHECK(frc.g1.get(r, c) == (c < 4 && sc.gs.get(r, c)));
    }

    SUBCASE("random (3,6) H, repetition Gs: G1*H^T = Gs bit-exactly") {
        const LdpcCode code = LdpcCode::construct_regular(96, 3, 6, 11);
        const StructuredFreeRideCode frc = lift(code, build_repetition(6, code.m()));
        for (std::size_t r = 0; r < 6; ++r)
            CHECK(code.syndrome(frc.g1.row_vector(r)) == frc.syndrome_code.gs.row_vector(r));
        // G1 vanishes off the pivot columns.
        std::vector<bool> pivot(code.n(), false);
        for (auto c : frc.pivot_cols) pivot[c] = true;
        for (std::size_t r = 0; r < 6; ++r)
            for (std::size_t c = 0; c < code.n(); ++c)
                if (!pivot[c]) CHECK_FALSE(frc.g1.get(r, c));
    }
}

TEST_CASE("coset distinctness for structured codes") {
    const LdpcCode code = LdpcCode::construct_regular(64, 3, 6, 13);
    for (const SyndromeCode& sc :
         {build_repetition(4, code.m()), build_rm1(4, code.m()), build_rm1(3, code.m())}) {
        const StructuredFreeRideCode frc = lift(code, sc);
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << sc.k1); ++a)
            for (std::uint64_t b = a + 1; b < (std::uint64_t{1} << sc.k1); ++b) {
                const BitVector diff =
                    frc.encode(index_bits(a, sc.k1)) ^ frc.encode(index_bits(b, sc.k1));
                CHECK(code.syndrome(diff).any());
            }
    }
}

TEST_CASE("encode_structured: units and syndrome postcondition") {
    const LdpcCode code = LdpcCode::construct_regular(64, 3, 6, 17);
    const StructuredFreeRideCode frc = lift(code, build_rm1(4, code.m()));
    CHECK_FALSE(frc.encode(BitVector(4)).any());
    for (std::size_t i = 0; i < 4; ++i) {
        BitVector e(4);
        e.set(i, true);
        CHECK(frc.encode(e) == frc.g1.row_vector(i));
    }
    std::mt19937_64 rng(17);
    for (int t = 0; t < 20; ++t) {
        const BitVector v = random_bits(4, rng);
        CHECK(code.syndrome(frc.encode(v)) == vec_mat_mul(v, frc.syndrome_code.gs));
    }
    CHECK_THROWS_AS(frc.encode(BitVector(5)), std::invalid_argument);
}

TEST_CASE("syndrome_channel values") {
    const LdpcCode code = LdpcCode::construct_regular(64, 3, 6, 19);
    std::mt19937_64 rng(19);

    SUBCASE("noiseless: zero cross probabilities, clamp-scale llrs") {
        const auto ch = BiosChannel::bpsk_awgn(0.0);
        const RealVector y = ch.transmit(code.encode(random_bits(code.k(), rng)), rng);
        for (auto mode : {ExtraDecoder::Hdd, ExtraDecoder::Sdd}) {
            const auto model = syndrome_channel(code, ch, y, mode);
            for (std::size_t i = 0; i < code.m(); ++i) {
                CHECK(model.cross_probs[i] == 0.0);
                CHECK(model.llrs[i] >= 30.0); // clamp scale, all checks satisfied
            }
        }
    }

    SUBCASE("hdd cross probability from the Q/odd-term composition") {
        const auto ch = BiosChannel::bpsk_awgn(1.0);
        const RealVector y = ch.transmit(code.encode(random_bits(code.k(), rng)), rng);
        const auto model = syndrome_channel(code, ch, y, ExtraDecoder::Hdd);
        // Oracle: odd-term binomial sum with p_b = Q(1).
        const double p_b = 0.15865525393145707;
        double oracle = 0.0;
        const double c6[] = {1, 6, 15, 20, 15, 6, 1};
        for (int j = 1; j <= 5; j += 2)
            oracle += c6[j] * std::pow(p_b, j) * std::pow(1 - p_b, 6 - j);
        for (std::size_t i = 0; i < code.m(); ++i)
            CHECK(model.cross_probs[i] == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(model.cross_probs[0] == doctest::Approx(0.449357).epsilon(1e-4));
        // Sign carries the observed syndrome.
        const BitVector b = code.syndrome(ch.hard_decision(y));
        for (std::size_t i = 0; i < code.m(); ++i)
            CHECK((model.llrs[i] < 0.0) == b.get(i));
    }

    SUBCASE("sdd: two-position check against the product formula") {
        const LdpcCode tiny = LdpcCode::from_parity_check(SparseBitMatrix(1, 2, {{0, 1}}));
        const auto ch = BiosChannel::bpsk_awgn(1.0);
        // Posterior flip probs 0.1 and 0.2 <-> |llr| = log(9), log(4).
        const RealVector y{std::log(9.0) / 2.0, std::log(4.0) / 2.0}; // llr = 2y/sigma^2
        const auto model = syndrome_channel(tiny, ch, y, ExtraDecoder::Sdd);
        CHECK(model.cross_probs[0] == doctest::Approx(0.5 * (1 - 0.8 * 0.6)).epsilon(1e-12));
        CHECK(model.cross_probs[0] == doctest::Approx(0.26).epsilon(1e-12));
        // Check-LLR via the scalar tanh rule with both inputs at +2.
        const RealVector y2{1.0, 1.0};
        const auto model2 = syndrome_channel(tiny, ch, y2, ExtraDecoder::Sdd);
        const double expect = 2.0 * std::atanh(std::tanh(1.0) * std::tanh(1.0));
        CHECK(model2.llrs[0] == doctest::Approx(expect).epsilon(1e-12));
        CHECK(model2.llrs[0] == doctest::Approx(1.3251).epsilon(1e-4));
    }
}

TEST_CASE("mlg decoding of repetition blocks") {
    SyndromeCode sc = build_repetition(2, 6); // blocks of 3

    SUBCASE("hdd majority") {
        SyndromeChannelModel model;
        model.mode = ExtraDecoder::Hdd;
        // Block 0 sees (1,1,0) -> majority 1; block 1 sees (0,0,1) -> 0.
        model.llrs = {-1.0, -1.0, 1.0, 1.0, 1.0, -1.0};
        model.cross_probs.assign(6, 0.2);
        const BitVector out = mlg_decode_repetition(sc, model);
        CHECK(out.get(0));
        CHECK_FALSE(out.get(1));
    }

    SUBCASE("sdd sign of sum, tie to zero") {
        SyndromeChannelModel model;
        model.mode = ExtraDecoder::Sdd;
        model.llrs = {3.0, -1.0, -1.0, 2.0, -2.0, 0.0}; // +1 -> 0; exact zero -> 0
        model.cross_probs.assign(6, 0.2);
        const BitVector out = mlg_decode_repetition(sc, model);
        CHECK_FALSE(out.get(0));
        CHECK_FALSE(out.get(1));
        model.llrs = {-3.0, 1.0, 1.0, 0.0, 0.0, 0.0};
        const BitVector out2 = mlg_decode_repetition(sc, model);
        CHECK(out2.get(0));
        CHECK_FALSE(out2.get(1));
    }

    SUBCASE("hdd even-block tie goes to zero") {
        SyndromeCode sc4 = build_repetition(1, 4);
        SyndromeChannelModel model;
        model.mode = ExtraDecoder::Hdd;
        model.llrs = {-1.0, -1.0, 1.0, 1.0};
        model.cross_probs.assign(4, 0.2);
        CHECK_FALSE(mlg_decode_repetition(sc4, model).get(0));
    }

    SUBCASE("kind mismatch throws") {
        const SyndromeCode rm = build_rm1(3, 8);
        SyndromeChannelModel model;
        model.mode = ExtraDecoder::Hdd;
        model.llrs.assign(8, 1.0);
        CHECK_THROWS_AS(mlg_decode_repetition(rm, model), std::invalid_argument);
    }
}

TEST_CASE("mlg per-bit error matches the binomial-tail estimate scale") {
    // m1 = 3, p = 0.1: beta = C(3,2) 0.01*0.9 + 0.001 = 0.028
    CHECK(wer_estimate_repetition(3, 0.1, 1) == doctest::Approx(0.028).epsilon(1e-12));
}

TEST_CASE("fht decoding of RM(1,eta) blocks") {
    SUBCASE("all-positive constant LLRs decode to zero") {
        const SyndromeCode sc = build_rm1(4, 8); // one RM(1,3) block
        const auto model = sdd_model_from_llrs(RealVector(8, 2.5));
        CHECK_FALSE(fht_ml_decode_rm(sc, model).any());
    }

    SUBCASE("matched filter: scaled codeword signs decode to its message") {
        const SyndromeCode sc = build_rm1(3, 4); // RM(1,2)
        for (std::uint64_t msg = 0; msg < 8; ++msg) {
            const BitVector cw = vec_mat_mul(index_bits(msg, 3), sc.gs);
            RealVector llrs(4);
            for (std::size_t j = 0; j < 4; ++j) llrs[j] = (cw.get(j) ? -1.0 : 1.0) * 1.7;
            CHECK(fht_ml_decode_rm(sc, sdd_model_from_llrs(llrs)) == index_bits(msg, 3));
        }
    }

    SUBCASE("random LLRs equal the exhaustive inner-product oracle (eta=3)") {
        const SyndromeCode sc = build_rm1(4, 8);
        std::mt19937_64 rng(23);
        std::normal_distribution<double> noise(0.0, 2.0);
        for (int t = 0; t < 2000; ++t) {
            RealVector llrs(8);
            for (auto& l : llrs) l = noise(rng);
            CHECK(fht_ml_decode_rm(sc, sdd_model_from_llrs(llrs)) ==
                  ml_inner_product_oracle(sc, llrs));
        }
    }

    SUBCASE("punctured and padded blocks still match the oracle") {
        std::mt19937_64 rng(29);
        std::normal_distribution<double> noise(0.0, 2.0);
        for (const SyndromeCode& sc : {build_rm1(4, 6), build_rm1(7, 12), build_rm1(6, 20)}) {
            for (int t = 0; t < 500; ++t) {
                RealVector llrs(sc.m);
                for (auto& l : llrs) l = noise(rng);
                CHECK(fht_ml_decode_rm(sc, sdd_model_from_llrs(llrs)) ==
                      ml_inner_product_oracle(sc, llrs));
            }
        }
    }

    SUBCASE("kind mismatch throws") {
        const SyndromeCode rep = build_repetition(2, 8);
        CHECK_THROWS_AS(fht_ml_decode_rm(rep, sdd_model_from_llrs(RealVector(8, 1.0))),
                        std::invalid_argument);
    }
}

TEST_CASE("hdd_min_distance_decode") {
    const SyndromeCode sc = build_rm1(4, 16);
    std::mt19937_64 rng(31);

    SUBCASE("exact syndromes and zero") {
        CHECK_FALSE(hdd_min_distance_decode(sc, BitVector(16)).any());
        for (std::uint64_t v = 0; v < 16; ++v) {
            const BitVector ws = vec_mat_mul(index_bits(v, 4), sc.gs);
            CHECK(hdd_min_distance_decode(sc, ws) == index_bits(v, 4));
        }
    }

    SUBCASE("random syndromes match an independent exhaustive oracle") {
        for (int t = 0; t < 500; ++t) {
            const BitVector syn = random_bits(16, rng);
            std::uint64_t best = 0;
            std::size_t best_w = SIZE_MAX;
            for (std::uint64_t v = 0; v < 16; ++v) {
                const std::size_t w = (syn ^ vec_mat_mul(index_bits(v, 4), sc.gs)).weight();
                if (w < best_w) {
                    best_w = w;
                    best = v;
                }
            }
            CHECK(hdd_min_distance_decode(sc, syn) == index_bits(best, 4));
        }
    }
}

TEST_CASE("wer_estimate_repetition properties") {
    CHECK(wer_estimate_repetition(5, 0.0, 3) == 0.0);
    // p = 1/2: block tail from the median is at least 1/2.
    const double beta_half = 1.0 - std::sqrt(1.0 - wer_estimate_repetition(3, 0.5, 2));
    CHECK(1.0 - std::pow(1.0 - wer_estimate_repetition(3, 0.5, 1), 1.0) >= 0.5);
    CHECK(beta_half >= 0.49);
    // Large m1 in the log-domain path stays finite and sane.
    const double est = wer_estimate_repetition(672, 0.45, 6);
    CHECK(est > 0.0);
    CHECK(est < 1.0);
}

TEST_CASE("structured successive cancellation, noiseless round trip") {
    const LdpcCode code = LdpcCode::construct_regular(64, 3, 6, 37);
    std::mt19937_64 rng(37);
    const auto ch = BiosChannel::bpsk_awgn(0.0);
    for (const SyndromeCode& sc : {build_repetition(4, code.m()), build_rm1(4, code.m())}) {
        const StructuredFreeRideCode frc = lift(code, sc);
        for (int t = 0; t < 10; ++t) {
            const BitVector u = random_bits(code.k(), rng);
            const BitVector v = random_bits(4, rng);
            const RealVector y = ch.transmit(code.encode(u) ^ frc.encode(v), rng);
            for (auto dec : {ExtraDecoder::Hdd, ExtraDecoder::Sdd}) {
                const ScResult res = successive_cancellation(code, frc, ch, y, 50, dec);
                CHECK(res.u_hat == u);
                CHECK(res.v_hat == v);
            }
        }
    }
}
