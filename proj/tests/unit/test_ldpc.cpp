#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "freeride/ldpc.hpp"

using namespace freeride;

namespace {

// Extended Hamming [8,4] parity-check basis. Column 0 has degree one; the
// others have degree >= 2, which matters for the single-flip decoder test.
LdpcCode extended_hamming() {
    std::vector<std::vector<std::uint32_t>> rows{
        {0, 1, 2, 3, 4, 5, 6, 7},
        {4, 5, 6, 7},
        {2, 3, 6, 7},
        {1, 3, 5, 7},
    };
    return LdpcCode::from_parity_check(SparseBitMatrix(4, 8, rows));
}

BitVector random_bits(std::size_t len, std::mt19937_64& rng) {
    BitVector v(len);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < len; ++i) v.set(i, coin(rng));
    return v;
}

// Exhaustive ML over all 2^k codewords by LLR correlation.
BitVector ml_decode(const LdpcCode& code, const RealVector& llr) {
    BitVector best(code.n());
    double best_score = -1e300;
    for (std::uint64_t u = 0; u < (std::uint64_t{1} << code.k()); ++u) {
        BitVector msg(code.k());
        for (std::size_t i = 0; i < code.k(); ++i)
            if ((u >> i) & 1) msg.set(i, true);
        const BitVector c = code.encode(msg);
        double score = 0.0;
        for (std::size_t j = 0; j < code.n(); ++j) score += (c.get(j) ? -1.0 : 1.0) * llr[j];
        if (score > best_score) {
            best_score = score;
            best = c;
        }
    }
    return best;
}

} // namespace

TEST_CASE("construct_regular small degenerate geometry") {
    // 4x8 with column weight 3 and row weight 6 (4-cycles unavoidable here).
    const LdpcCode code = LdpcCode::construct_regular(8, 3, 6, 3);
    CHECK(code.n() == 8);
    CHECK(code.m() == 4);
    CHECK(code.k() == 4);
    std::vector<std::size_t> col_w(8, 0);
    for (std::size_t r = 0; r < 4; ++r) {
        CHECK(code.h().row_weight(r) == 6);
        for (auto c : code.h().row(r)) ++col_w[c];
    }
    for (auto w : col_w) CHECK(w == 3);
}

TEST_CASE("construct_regular 128: rank, weights, girth >= 6") {
    const LdpcCode code = LdpcCode::construct_regular(128, 3, 6, 42);
    CHECK(code.m() == 64);
    CHECK(gf2_rank(code.h().to_dense()) == 64);

    std::vector<std::size_t> col_w(128, 0);
    for (std::size_t r = 0; r < 64; ++r) {
        CHECK(code.h().row_weight(r) == 6);
        for (auto c : code.h().row(r)) ++col_w[c];
    }
    for (auto w : col_w) CHECK(w == 3);

    // 4-cycle oracle: no two columns share two rows.
    std::vector<std::vector<std::uint32_t>> cols(128);
    for (std::size_t r = 0; r < 64; ++r)
        for (auto c : code.h().row(r)) cols[c].push_back(static_cast<std::uint32_t>(r));
    for (std::size_t a = 0; a < 128; ++a)
        for (std::size_t b = a + 1; b < 128; ++b) {
            std::size_t shared = 0;
            for (auto ra : cols[a])
                for (auto rb : cols[b])
                    if (ra == rb) ++shared;
            CHECK(shared <= 1);
        }
}

TEST_CASE("construct_regular deterministic for fixed seed") {
    const LdpcCode a = LdpcCode::construct_regular(128, 3, 6, 7);
    const LdpcCode b = LdpcCode::construct_regular(128, 3, 6, 7);
    CHECK(a.h().to_dense() == b.h().to_dense());
    const LdpcCode c = LdpcCode::construct_regular(128, 3, 6, 8);
    CHECK(a.h().to_dense() != c.h().to_dense());
}

TEST_CASE("construct_regular rejects bad parameters") {
    CHECK_THROWS_AS(LdpcCode::construct_regular(9, 3, 6, 1), std::invalid_argument);
    CHECK_THROWS_AS(LdpcCode::construct_regular(8, 6, 3, 1), std::invalid_argument);
}

TEST_CASE("generator for H = [I | A] is [A^T | I]") {
    std::mt19937_64 rng(5);
    DenseBitMatrix a(4, 4);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) a.set(r, c, coin(rng));

    std::vector<std::vector<std::uint32_t>> rows(4);
    for (std::size_t r = 0; r < 4; ++r) {
        rows[r].push_back(static_cast<std::uint32_t>(r));
        for (std::size_t c = 0; c < 4; ++c)
            if (a.get(r, c)) rows[r].push_back(static_cast<std::uint32_t>(4 + c));
    }
    const LdpcCode code = LdpcCode::from_parity_check(SparseBitMatrix(4, 8, rows));
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 8; ++c) {
            const bool expected = c < 4 ? a.get(c, r) : (c - 4 == r);
            CHECK(code.g().get(r, c) == expected);
        }
}

TEST_CASE("repetition [2,1]: H = [1 1] gives G = [1 1]") {
    const LdpcCode code = LdpcCode::from_parity_check(SparseBitMatrix(1, 2, {{0, 1}}));
    CHECK(code.k() == 1);
    CHECK(code.g().get(0, 0));
    CHECK(code.g().get(0, 1));
}

TEST_CASE("extended Hamming generator spans the brute-force null space") {
    const LdpcCode code = extended_hamming();
    std::set<std::string> null_space;
    for (unsigned x = 0; x < 256; ++x) {
        BitVector v(8);
        for (unsigned i = 0; i < 8; ++i)
            if ((x >> i) & 1) v.set(i, true);
        if (!code.syndrome(v).any()) null_space.insert(v.to_string());
    }
    CHECK(null_space.size() == 16);

    std::set<std::string> span;
    for (unsigned u = 0; u < 16; ++u) {
        BitVector msg(4);
        for (unsigned i = 0; i < 4; ++i)
            if ((u >> i) & 1) msg.set(i, true);
        span.insert(code.encode(msg).to_string());
    }
    CHECK(span == null_space);
}

TEST_CASE("encode basics and syndrome property") {
    const LdpcCode code = LdpcCode::construct_regular(64, 3, 6, 11);
    CHECK_FALSE(code.encode(BitVector(code.k())).any());
    for (std::size_t i = 0; i < code.k(); ++i) {
        BitVector e(code.k());
        e.set(i, true);
        CHECK(code.encode(e) == code.g().row_vector(i));
    }
    std::mt19937_64 rng(13);
    for (int t = 0; t < 50; ++t) {
        const BitVector u = random_bits(code.k(), rng);
        const BitVector c = code.encode(u);
        CHECK_FALSE(code.syndrome(c).any());
        CHECK(code.extract_message(c) == u);
    }
    CHECK_THROWS_AS(code.encode(BitVector(code.k() + 1)), std::invalid_argument);
}

TEST_CASE("syndrome of single error is the H column") {
    const LdpcCode code = extended_hamming();
    for (std::size_t j = 0; j < 8; ++j) {
        BitVector e(8);
        e.set(j, true);
        const BitVector s = code.syndrome(e);
        for (std::size_t r = 0; r < 4; ++r) {
            bool in_row = false;
            for (auto c : code.h().row(r)) in_row |= (c == j);
            CHECK(s.get(r) == in_row);
        }
    }
    // Random v matches a naive per-check parity oracle.
    std::mt19937_64 rng(17);
    for (int t = 0; t < 20; ++t) {
        const BitVector v = random_bits(8, rng);
        const BitVector s = code.syndrome(v);
        for (std::size_t r = 0; r < 4; ++r) {
            int acc = 0;
            for (auto c : code.h().row(r)) acc ^= v.get(c) ? 1 : 0;
            CHECK(s.get(r) == (acc != 0));
        }
    }
}

TEST_CASE("sum-product: noiseless input converges in the iteration-0 check") {
    const LdpcCode code = extended_hamming();
    std::mt19937_64 rng(19);
    const BitVector c = code.encode(random_bits(4, rng));
    RealVector llr(8);
    for (std::size_t j = 0; j < 8; ++j) llr[j] = c.get(j) ? -50.0 : 50.0;
    const DecodeResult res = code.sum_product_decode(llr, 50);
    CHECK(res.converged);
    CHECK(res.iterations_used == 0);
    CHECK(res.codeword_estimate == c);
}

TEST_CASE("sum-product corrects a strong single flip (degree >= 2 positions)") {
    const LdpcCode code = extended_hamming();
    std::mt19937_64 rng(23);
    for (int t = 0; t < 20; ++t) {
        const BitVector c = code.encode(random_bits(4, rng));
        for (std::size_t j = 1; j < 8; ++j) { // column 0 has degree 1
            RealVector llr(8);
            for (std::size_t i = 0; i < 8; ++i) llr[i] = c.get(i) ? -20.0 : 20.0;
            llr[j] = -llr[j];
            const DecodeResult res = code.sum_product_decode(llr, 50);
            CHECK(res.converged);
            CHECK(res.codeword_estimate == c);
            CHECK(res.codeword_estimate == ml_decode(code, llr));
        }
    }
}

TEST_CASE("sum-product: all-zero LLRs never converge") {
    const LdpcCode code = extended_hamming();
    const DecodeResult res = code.sum_product_decode(RealVector(8, 0.0), 10);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations_used == 10);
}

TEST_CASE("decoder symmetry under BIOS sign flips") {
    // Decoding (-1)^c * llr yields the estimate shifted by c.
    const LdpcCode code = LdpcCode::construct_regular(64, 3, 6, 29);
    const auto ch = BiosChannel::bpsk_awgn(0.8);
    std::mt19937_64 rng(31);
    for (int t = 0; t < 25; ++t) {
        const RealVector y = ch.transmit(BitVector(64), rng); // all-zero codeword
        const RealVector base = ch.llr(y);
        const BitVector c = code.encode(random_bits(code.k(), rng));
        RealVector shifted(64);
        for (std::size_t j = 0; j < 64; ++j) shifted[j] = (c.get(j) ? -1.0 : 1.0) * base[j];
        const DecodeResult r0 = code.sum_product_decode(base, 50);
        const DecodeResult r1 = code.sum_product_decode(shifted, 50);
        CHECK(r0.converged == r1.converged);
        CHECK((r0.codeword_estimate ^ r1.codeword_estimate) == c);
    }
}

TEST_CASE("alist round trip") {
    const LdpcCode code = LdpcCode::construct_regular(48, 3, 6, 37);
    std::stringstream ss;
    code.to_alist(ss);
    const LdpcCode loaded = LdpcCode::from_alist(ss);
    CHECK(loaded.h().to_dense() == code.h().to_dense());
    CHECK(loaded.n() == 48);
    CHECK(loaded.gamma() == 3);
    CHECK(loaded.rho() == 6);
    CHECK(loaded.regular());
}

TEST_CASE("alist rejects malformed input") {
    std::stringstream ss("8");
    CHECK_THROWS_AS(LdpcCode::from_alist(ss), std::invalid_argument);
}
