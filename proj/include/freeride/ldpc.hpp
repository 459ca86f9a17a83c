#pragma once

// (gamma,rho)-regular LDPC payload codes: seeded greedy construction with
// 4-cycle rejection, systematic generator derivation, encoding, syndrome
// computation and flooding sum-product decoding with the exact tanh rule.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "freeride/channel.hpp"
#include "freeride/gf2.hpp"

namespace freeride {

struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DecodeResult {
    BitVector codeword_estimate;
    bool converged = false;
    std::size_t iterations_used = 0;
};

class LdpcCode {
  public:
    /// Builds a (gamma,rho)-regular parity-check matrix of length n with no
    /// 4-cycles (where geometrically attainable) and full row rank, then
    /// derives a systematic generator. Deterministic for a fixed seed.
    static LdpcCode construct_regular(std::size_t n, std::size_t gamma, std::size_t rho,
                                      std::uint64_t seed);

    static LdpcCode from_parity_check(SparseBitMatrix h);

    static LdpcCode from_alist(std::istream& in);
    static LdpcCode from_alist_file(const std::string& path);
    void to_alist(std::ostream& out) const;
    void to_alist_file(const std::string& path) const;

    const SparseBitMatrix& h() const { return h_; }
    const DenseBitMatrix& g() const { return g_; }
    std::size_t n() const { return h_.cols(); }
    std::size_t m() const { return h_.rows(); }
    std::size_t k() const { return n() - m(); }
    std::size_t gamma() const { return gamma_; }
    std::size_t rho() const { return rho_; }
    bool regular() const { return regular_; }

    /// Columns carrying the message in the systematic generator (the
    /// non-pivot columns of H), increasing.
    const std::vector<std::size_t>& message_cols() const { return message_cols_; }

    /// Leftmost linearly independent column set of H (the invertible H1).
    const std::vector<std::size_t>& pivot_cols() const { return pivot_cols_; }

    /// c = u * G; u.size() must equal k().
    BitVector encode(const BitVector& u) const;

    /// v * H^T; v.size() must equal n().
    BitVector syndrome(const BitVector& v) const;

    BitVector extract_message(const BitVector& codeword) const;

    /// Flooding sum-product decoding of channel LLRs (log P(y|0)/P(y|1)).
    /// Stops as soon as the running hard decision satisfies every check.
    DecodeResult sum_product_decode(const RealVector& llr, std::size_t max_iters) const;

  private:
    LdpcCode() = default;
    void finalize(); // derives generator, degree profile and decoder layout

    SparseBitMatrix h_;
    DenseBitMatrix g_;
    std::size_t gamma_ = 0, rho_ = 0;
    bool regular_ = false;
    std::vector<std::size_t> message_cols_;
    std::vector<std::size_t> pivot_cols_;

    // Edge layout for the decoder: edges sorted by check, with per-variable
    // index lists built once.
    std::vector<std::uint32_t> edge_col_;     // column of edge e
    std::vector<std::uint32_t> check_offset_; // m()+1 prefix offsets into edge_col_
    std::vector<std::uint32_t> var_edges_;    // edge ids grouped by variable
    std::vector<std::uint32_t> var_offset_;   // n()+1 prefix offsets into var_edges_
};

} // namespace freeride
