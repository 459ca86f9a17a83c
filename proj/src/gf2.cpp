#include "freeride/gf2.hpp"

#include <algorithm>
#include <bit>

namespace freeride {

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            v.set(i, true);
        else if (bits[i] != '0')
            throw std::invalid_argument("BitVector::from_string: expected '0'/'1'");
    }
    return v;
}

std::size_t BitVector::weight() const {
    std::size_t w = 0;
    for (auto word : words_) w += static_cast<std::size_t>(std::popcount(word));
    return w;
}

bool BitVector::any() const {
    for (auto word : words_)
        if (word) return true;
    return false;
}

BitVector& BitVector::operator^=(const BitVector& o) {
    if (len_ != o.len_) throw std::invalid_argument("BitVector xor: length mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
}

std::string BitVector::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

DenseBitMatrix DenseBitMatrix::identity(std::size_t n) {
    DenseBitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

DenseBitMatrix DenseBitMatrix::from_strings(const std::vector<std::string>& rows) {
    if (rows.empty()) return {};
    DenseBitMatrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols())
            throw std::invalid_argument("DenseBitMatrix::from_strings: ragged rows");
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (rows[r][c] == '1')
                m.set(r, c, true);
            else if (rows[r][c] != '0')
                throw std::invalid_argument("DenseBitMatrix::from_strings: expected '0'/'1'");
        }
    }
    return m;
}

BitVector DenseBitMatrix::row_vector(std::size_t r) const {
    BitVector v(cols_);
    std::copy_n(data_.data() + r * wpr_, wpr_, v.words().data());
    return v;
}

void DenseBitMatrix::set_row(std::size_t r, const BitVector& v) {
    if (v.size() != cols_) throw std::invalid_argument("set_row: length mismatch");
    std::copy_n(v.words().data(), wpr_, data_.data() + r * wpr_);
}

void DenseBitMatrix::xor_rows(std::size_t dst, std::size_t src) {
    auto* d = data_.data() + dst * wpr_;
    const auto* s = data_.data() + src * wpr_;
    for (std::size_t i = 0; i < wpr_; ++i) d[i] ^= s[i];
}

void DenseBitMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(data_.begin() + a * wpr_, data_.begin() + (a + 1) * wpr_, data_.begin() + b * wpr_);
}

SparseBitMatrix::SparseBitMatrix(std::size_t rows, std::size_t cols,
                                 std::vector<std::vector<std::uint32_t>> row_cols)
    : rows_(rows), cols_(cols), row_cols_(std::move(row_cols)) {
    if (row_cols_.size() != rows_) throw std::invalid_argument("SparseBitMatrix: row count mismatch");
    for (auto& r : row_cols_) {
        if (!std::is_sorted(r.begin(), r.end()) || std::adjacent_find(r.begin(), r.end()) != r.end())
            throw std::invalid_argument("SparseBitMatrix: indices must be strictly increasing");
        if (!r.empty() && r.back() >= cols_)
            throw std::invalid_argument("SparseBitMatrix: column index out of range");
    }
}

DenseBitMatrix SparseBitMatrix::to_dense() const {
    DenseBitMatrix m(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (auto c : row_cols_[r]) m.set(r, c, true);
    return m;
}

BitVector mat_vec_mul(const DenseBitMatrix& m, const BitVector& v) {
    if (v.size() != m.cols()) throw std::invalid_argument("mat_vec_mul: dimension mismatch");
    BitVector out(m.rows());
    const auto vw = v.words();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto rw = m.row(r);
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < rw.size(); ++i) acc ^= rw[i] & vw[i];
        out.set(r, std::popcount(acc) & 1);
    }
    return out;
}

BitVector mat_vec_mul(const SparseBitMatrix& m, const BitVector& v) {
    if (v.size() != m.cols()) throw std::invalid_argument("mat_vec_mul: dimension mismatch");
    BitVector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        unsigned acc = 0;
        for (auto c : m.row(r)) acc ^= static_cast<unsigned>(v.get(c));
        out.set(r, acc & 1);
    }
    return out;
}

BitVector vec_mat_mul(const BitVector& v, const DenseBitMatrix& m) {
    if (v.size() != m.rows()) throw std::invalid_argument("vec_mat_mul: dimension mismatch");
    BitVector out(m.cols());
    auto ow = out.words();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (!v.get(r)) continue;
        const auto rw = m.row(r);
        for (std::size_t i = 0; i < rw.size(); ++i) ow[i] ^= rw[i];
    }
    return out;
}

DenseBitMatrix mat_mat_mul(const DenseBitMatrix& a, const DenseBitMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mat_mul: dimension mismatch");
    DenseBitMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto ow = out.row(r);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (!a.get(r, k)) continue;
            const auto bw = b.row(k);
            for (std::size_t i = 0; i < bw.size(); ++i) ow[i] ^= bw[i];
        }
    }
    return out;
}

RowReduceResult row_reduce(const DenseBitMatrix& m) {
    RowReduceResult res;
    res.reduced = m;
    auto& a = res.reduced;
    const std::size_t rows = a.rows(), cols = a.cols();

    std::size_t pr = 0; // next pivot row
    for (std::size_t c = 0; c < cols && pr < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t r = pr; r < rows; ++r) {
            if (a.get(r, c)) {
                sel = r;
                break;
            }
        }
        if (sel == rows) continue;
        a.swap_rows(pr, sel);
        for (std::size_t r = pr + 1; r < rows; ++r)
            if (a.get(r, c)) a.xor_rows(r, pr);
        res.pivot_cols.push_back(c);
        ++pr;
    }
    res.rank = pr;
    // Back-substitution to reduced echelon form.
    for (std::size_t i = res.rank; i-- > 0;) {
        const std::size_t c = res.pivot_cols[i];
        for (std::size_t r = 0; r < i; ++r)
            if (a.get(r, c)) a.xor_rows(r, i);
    }
    return res;
}

std::size_t gf2_rank(const DenseBitMatrix& m) {
    DenseBitMatrix a = m;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::size_t pr = 0;
    for (std::size_t c = 0; c < cols && pr < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t r = pr; r < rows; ++r) {
            if (a.get(r, c)) {
                sel = r;
                break;
            }
        }
        if (sel == rows) continue;
        a.swap_rows(pr, sel);
        for (std::size_t r = pr + 1; r < rows; ++r)
            if (a.get(r, c)) a.xor_rows(r, pr);
        ++pr;
    }
    return pr;
}

DenseBitMatrix invert(const DenseBitMatrix& m) {
    if (m.rows() != m.cols()) throw SingularMatrixError("invert: matrix not square");
    const std::size_t n = m.rows();
    DenseBitMatrix a = m;
    DenseBitMatrix inv = DenseBitMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = n;
        for (std::size_t r = c; r < n; ++r) {
            if (a.get(r, c)) {
                sel = r;
                break;
            }
        }
        if (sel == n) throw SingularMatrixError("invert: singular matrix");
        a.swap_rows(c, sel);
        inv.swap_rows(c, sel);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != c && a.get(r, c)) {
                a.xor_rows(r, c);
                inv.xor_rows(r, c);
            }
        }
    }
    return inv;
}

} // namespace freeride
