#pragma once

// Bit-packed linear algebra over GF(2): vectors, dense and sparse matrices,
// Gaussian elimination, rank and inversion. All vector-times-matrix products
// follow the row-vector convention (x = u*G), matching the rest of the
// library; mat_vec_mul(M, v) computes v*M^T.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace freeride {

struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(std::size_t len) : words_((len + 63) / 64, 0), len_(len) {}

    static BitVector from_string(std::string_view bits);

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    /// Number of set bits.
    std::size_t weight() const;

    bool any() const;

    BitVector& operator^=(const BitVector& o);
    friend BitVector operator^(BitVector a, const BitVector& b) {
        a ^= b;
        return a;
    }

    bool operator==(const BitVector&) const = default;

    std::string to_string() const;

    std::span<const std::uint64_t> words() const { return {words_.data(), words_.size()}; }
    // Callers touching raw words must keep bits beyond size() zero.
    std::span<std::uint64_t> words() { return {words_.data(), words_.size()}; }

  private:
    std::vector<std::uint64_t> words_;
    std::size_t len_ = 0;
};

class DenseBitMatrix {
  public:
    DenseBitMatrix() = default;
    DenseBitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), data_(rows * wpr_, 0) {}

    static DenseBitMatrix identity(std::size_t n);
    static DenseBitMatrix from_strings(const std::vector<std::string>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return wpr_; }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (c & 63);
        if (v)
            data_[r * wpr_ + (c >> 6)] |= mask;
        else
            data_[r * wpr_ + (c >> 6)] &= ~mask;
    }

    std::span<const std::uint64_t> row(std::size_t r) const { return {data_.data() + r * wpr_, wpr_}; }
    std::span<std::uint64_t> row(std::size_t r) { return {data_.data() + r * wpr_, wpr_}; }

    BitVector row_vector(std::size_t r) const;
    void set_row(std::size_t r, const BitVector& v);

    /// rows[dst] ^= rows[src]
    void xor_rows(std::size_t dst, std::size_t src);
    void swap_rows(std::size_t a, std::size_t b);

    bool operator==(const DenseBitMatrix&) const = default;

  private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<std::uint64_t> data_;
};

/// Row-index-list sparse matrix; column indices strictly increasing per row.
class SparseBitMatrix {
  public:
    SparseBitMatrix() = default;
    SparseBitMatrix(std::size_t rows, std::size_t cols, std::vector<std::vector<std::uint32_t>> row_cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::span<const std::uint32_t> row(std::size_t r) const {
        return {row_cols_[r].data(), row_cols_[r].size()};
    }
    std::size_t row_weight(std::size_t r) const { return row_cols_[r].size(); }

    DenseBitMatrix to_dense() const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::vector<std::uint32_t>> row_cols_;
};

struct RowReduceResult {
    DenseBitMatrix reduced;              // reduced row-echelon form
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols; // strictly increasing
};

/// v * M^T (equivalently M * v^T); v.size() must equal M.cols().
BitVector mat_vec_mul(const DenseBitMatrix& m, const BitVector& v);
BitVector mat_vec_mul(const SparseBitMatrix& m, const BitVector& v);

/// v * M; v.size() must equal M.rows(). XOR-combination of rows.
BitVector vec_mat_mul(const BitVector& v, const DenseBitMatrix& m);

DenseBitMatrix mat_mat_mul(const DenseBitMatrix& a, const DenseBitMatrix& b);

RowReduceResult row_reduce(const DenseBitMatrix& m);
std::size_t gf2_rank(const DenseBitMatrix& m);

/// Inverse of a square full-rank matrix; throws SingularMatrixError otherwise.
DenseBitMatrix invert(const DenseBitMatrix& m);

} // namespace freeride
