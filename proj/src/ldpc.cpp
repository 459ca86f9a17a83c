#include "freeride/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace freeride {

namespace {

// One construction attempt: greedy column-by-column placement. Each column
// gets `gamma` distinct rows chosen among those with the most remaining
// capacity, rejecting rows that would close a 4-cycle (two columns sharing
// two rows) unless `allow_4cycles` is set.
bool try_place(std::size_t n, std::size_t gamma, std::size_t rho, std::size_t m,
               std::mt19937_64& rng, bool allow_4cycles,
               std::vector<std::vector<std::uint32_t>>& row_cols) {
    std::vector<std::uint32_t> capacity(m, static_cast<std::uint32_t>(rho));
    std::vector<BitVector> paired(m, BitVector(m)); // rows co-occurring in some column
    row_cols.assign(m, {});
    std::vector<std::uint32_t> chosen, candidates;
    chosen.reserve(gamma);

    for (std::size_t col = 0; col < n; ++col) {
        chosen.clear();
        for (std::size_t e = 0; e < gamma; ++e) {
            std::uint32_t best_cap = 0;
            candidates.clear();
            for (std::uint32_t r = 0; r < m; ++r) {
                if (capacity[r] == 0) continue;
                bool taken = false;
                for (auto c : chosen)
                    if (c == r || (!allow_4cycles && paired[c].get(r))) {
                        taken = true;
                        break;
                    }
                if (taken) continue;
                if (capacity[r] > best_cap) {
                    best_cap = capacity[r];
                    candidates.clear();
                }
                if (capacity[r] == best_cap) candidates.push_back(r);
            }
            if (candidates.empty()) return false;
            std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
            chosen.push_back(candidates[pick(rng)]);
        }
        for (auto r : chosen) {
            --capacity[r];
            row_cols[r].push_back(static_cast<std::uint32_t>(col));
        }
        for (std::size_t a = 0; a < gamma; ++a)
            for (std::size_t b = a + 1; b < gamma; ++b) {
                paired[chosen[a]].set(chosen[b], true);
                paired[chosen[b]].set(chosen[a], true);
            }
    }
    return true;
}

} // namespace

LdpcCode LdpcCode::construct_regular(std::size_t n, std::size_t gamma, std::size_t rho,
                                     std::uint64_t seed) {
    if (gamma == 0 || rho == 0 || gamma >= rho)
        throw std::invalid_argument("construct_regular: need 0 < gamma < rho");
    if ((n * gamma) % rho != 0)
        throw std::invalid_argument("construct_regular: n*gamma must be divisible by rho");
    const std::size_t m = n * gamma / rho;
    if (m >= n) throw std::invalid_argument("construct_regular: m must be < n");

    std::mt19937_64 rng(seed);
    constexpr int kStrictAttempts = 40;
    constexpr int kRelaxedAttempts = 20;
    std::vector<std::vector<std::uint32_t>> row_cols;
    for (int attempt = 0; attempt < kStrictAttempts + kRelaxedAttempts; ++attempt) {
        const bool relaxed = attempt >= kStrictAttempts;
        if (!try_place(n, gamma, rho, m, rng, relaxed, row_cols)) continue;
        SparseBitMatrix h(m, n, row_cols);
        if (gf2_rank(h.to_dense()) != m) continue;
        return from_parity_check(std::move(h));
    }
    throw ConstructionError("construct_regular: no full-rank placement found");
}

LdpcCode LdpcCode::from_parity_check(SparseBitMatrix h) {
    LdpcCode code;
    code.h_ = std::move(h);
    code.finalize();
    return code;
}

void LdpcCode::finalize() {
    const std::size_t m = h_.rows(), n = h_.cols();
    if (m == 0 || n == 0 || m >= n) throw std::invalid_argument("LdpcCode: bad H dimensions");

    auto rr = row_reduce(h_.to_dense());
    if (rr.rank != m) throw ConstructionError("LdpcCode: H is rank deficient");
    pivot_cols_ = rr.pivot_cols;

    // Systematic generator on the non-pivot columns: column P[j] of a
    // codeword equals the XOR of its free columns s where RREF[j][s] = 1.
    message_cols_.clear();
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivot_cols_) is_pivot[c] = true;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) message_cols_.push_back(c);

    const std::size_t k = n - m;
    g_ = DenseBitMatrix(k, n);
    for (std::size_t r = 0; r < k; ++r) {
        g_.set(r, message_cols_[r], true);
        for (std::size_t j = 0; j < m; ++j)
            if (rr.reduced.get(j, message_cols_[r])) g_.set(r, pivot_cols_[j], true);
    }

    // Degree profile.
    std::vector<std::size_t> col_weight(n, 0);
    std::size_t max_row = 0, min_row = SIZE_MAX;
    for (std::size_t r = 0; r < m; ++r) {
        max_row = std::max(max_row, h_.row_weight(r));
        min_row = std::min(min_row, h_.row_weight(r));
        for (auto c : h_.row(r)) ++col_weight[c];
    }
    auto [mn, mx] = std::minmax_element(col_weight.begin(), col_weight.end());
    gamma_ = *mx;
    rho_ = max_row;
    regular_ = (*mn == *mx) && (min_row == max_row);

    // Decoder edge layout.
    const std::size_t edges = std::accumulate(col_weight.begin(), col_weight.end(), std::size_t{0});
    edge_col_.reserve(edges);
    check_offset_.assign(m + 1, 0);
    for (std::size_t r = 0; r < m; ++r) {
        for (auto c : h_.row(r)) edge_col_.push_back(c);
        check_offset_[r + 1] = static_cast<std::uint32_t>(edge_col_.size());
    }
    var_offset_.assign(n + 1, 0);
    for (auto c : edge_col_) ++var_offset_[c + 1];
    for (std::size_t c = 0; c < n; ++c) var_offset_[c + 1] += var_offset_[c];
    var_edges_.resize(edges);
    std::vector<std::uint32_t> cursor(var_offset_.begin(), var_offset_.end() - 1);
    for (std::uint32_t e = 0; e < edges; ++e) var_edges_[cursor[edge_col_[e]]++] = e;
}

BitVector LdpcCode::encode(const BitVector& u) const {
    if (u.size() != k()) throw std::invalid_argument("encode: message length mismatch");
    return vec_mat_mul(u, g_);
}

BitVector LdpcCode::syndrome(const BitVector& v) const {
    if (v.size() != n()) throw std::invalid_argument("syndrome: length mismatch");
    return mat_vec_mul(h_, v);
}

BitVector LdpcCode::extract_message(const BitVector& codeword) const {
    if (codeword.size() != n()) throw std::invalid_argument("extract_message: length mismatch");
    BitVector u(k());
    for (std::size_t r = 0; r < k(); ++r)
        if (codeword.get(message_cols_[r])) u.set(r, true);
    return u;
}

DecodeResult LdpcCode::sum_product_decode(const RealVector& llr_in, std::size_t max_iters) const {
    if (llr_in.size() != n()) throw std::invalid_argument("sum_product_decode: LLR length mismatch");
    if (max_iters == 0) throw std::invalid_argument("sum_product_decode: max_iters must be >= 1");
    const std::size_t m = this->m(), n = this->n(), edges = edge_col_.size();

    RealVector channel(n);
    for (std::size_t j = 0; j < n; ++j)
        channel[j] = std::clamp(llr_in[j], -kLlrClamp, kLlrClamp);

    // A zero posterior carries no decision, so it never counts as converged.
    auto check_hard = [&](const RealVector& post, BitVector& hard) {
        bool committed = true;
        for (std::size_t j = 0; j < n; ++j) {
            hard.set(j, post[j] < 0.0);
            committed &= post[j] != 0.0;
        }
        if (!committed) return false;
        for (std::size_t i = 0; i < m; ++i) {
            unsigned parity = 0;
            for (std::uint32_t e = check_offset_[i]; e < check_offset_[i + 1]; ++e)
                parity ^= static_cast<unsigned>(hard.get(edge_col_[e]));
            if (parity & 1) return false;
        }
        return true;
    };

    DecodeResult res;
    res.codeword_estimate = BitVector(n);
    if (check_hard(channel, res.codeword_estimate)) {
        res.converged = true;
        return res;
    }

    RealVector v2c(edges), c2v(edges, 0.0), post(n), t(edges);
    for (std::uint32_t e = 0; e < edges; ++e) v2c[e] = channel[edge_col_[e]];
    constexpr double kTanhCap = 1.0 - 1e-15;

    for (std::size_t iter = 1; iter <= max_iters; ++iter) {
        // Check update: exact tanh rule via forward/backward partial products.
        for (std::size_t i = 0; i < m; ++i) {
            const std::uint32_t lo = check_offset_[i], hi = check_offset_[i + 1];
            for (std::uint32_t e = lo; e < hi; ++e) t[e] = std::tanh(0.5 * v2c[e]);
            double fwd = 1.0;
            for (std::uint32_t e = lo; e < hi; ++e) {
                c2v[e] = fwd; // product over edges before e
                fwd *= t[e];
            }
            double bwd = 1.0;
            for (std::uint32_t e = hi; e-- > lo;) {
                const double prod = std::clamp(c2v[e] * bwd, -kTanhCap, kTanhCap);
                c2v[e] = 2.0 * std::atanh(prod);
                bwd *= t[e];
            }
        }
        // Variable update and posteriors.
        for (std::size_t j = 0; j < n; ++j) {
            double total = channel[j];
            for (std::uint32_t idx = var_offset_[j]; idx < var_offset_[j + 1]; ++idx)
                total += c2v[var_edges_[idx]];
            post[j] = total;
            for (std::uint32_t idx = var_offset_[j]; idx < var_offset_[j + 1]; ++idx) {
                const std::uint32_t e = var_edges_[idx];
                v2c[e] = total - c2v[e];
            }
        }
        res.iterations_used = iter;
        if (check_hard(post, res.codeword_estimate)) {
            res.converged = true;
            return res;
        }
    }
    return res;
}

// ---- alist I/O (MacKay format, 1-based indices, zero-padded rows allowed) ----

LdpcCode LdpcCode::from_alist(std::istream& in) {
    std::size_t n = 0, m = 0;
    if (!(in >> n >> m)) throw std::invalid_argument("alist: missing dimensions");
    std::size_t max_col = 0, max_row = 0;
    if (!(in >> max_col >> max_row)) throw std::invalid_argument("alist: missing max degrees");
    std::vector<std::size_t> col_w(n), row_w(m);
    for (auto& w : col_w) in >> w;
    for (auto& w : row_w) in >> w;
    if (!in) throw std::invalid_argument("alist: truncated degree lists");

    // Column adjacency (skipped except for validation), then row adjacency.
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < max_col; ++i) {
            long v = 0;
            if (!(in >> v)) throw std::invalid_argument("alist: truncated column lists");
            if (v < 0 || static_cast<std::size_t>(v) > m)
                throw std::invalid_argument("alist: row index out of range");
        }
    }
    std::vector<std::vector<std::uint32_t>> rows(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t i = 0; i < max_row; ++i) {
            long v = 0;
            if (!(in >> v)) throw std::invalid_argument("alist: truncated row lists");
            if (v < 0 || static_cast<std::size_t>(v) > n)
                throw std::invalid_argument("alist: column index out of range");
            if (v > 0) rows[r].push_back(static_cast<std::uint32_t>(v - 1));
        }
        std::sort(rows[r].begin(), rows[r].end());
        if (rows[r].size() != row_w[r]) throw std::invalid_argument("alist: row weight mismatch");
    }
    return from_parity_check(SparseBitMatrix(m, n, std::move(rows)));
}

LdpcCode LdpcCode::from_alist_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open alist file: " + path);
    return from_alist(f);
}

void LdpcCode::to_alist(std::ostream& out) const {
    const std::size_t n = this->n(), m = this->m();
    std::vector<std::vector<std::uint32_t>> cols(n);
    std::size_t max_row = 0;
    for (std::size_t r = 0; r < m; ++r) {
        max_row = std::max(max_row, h_.row_weight(r));
        for (auto c : h_.row(r)) cols[c].push_back(static_cast<std::uint32_t>(r));
    }
    std::size_t max_col = 0;
    for (auto& c : cols) max_col = std::max(max_col, c.size());

    out << n << ' ' << m << '\n' << max_col << ' ' << max_row << '\n';
    for (std::size_t c = 0; c < n; ++c) out << cols[c].size() << (c + 1 < n ? ' ' : '\n');
    for (std::size_t r = 0; r < m; ++r) out << h_.row_weight(r) << (r + 1 < m ? ' ' : '\n');
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < max_col; ++i)
            out << (i < cols[c].size() ? cols[c][i] + 1 : 0) << (i + 1 < max_col ? ' ' : '\n');
    }
    for (std::size_t r = 0; r < m; ++r) {
        const auto row = h_.row(r);
        for (std::size_t i = 0; i < max_row; ++i)
            out << (i < row.size() ? row[i] + 1 : 0) << (i + 1 < max_row ? ' ' : '\n');
    }
}

void LdpcCode::to_alist_file(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open alist file for writing: " + path);
    to_alist(f);
}

} // namespace freeride
