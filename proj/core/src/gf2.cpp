#include "ddecc/gf2.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <utility>

#include "ddecc/error.hpp"

namespace ddecc {

std::size_t PackedRow::popcount() const noexcept {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

bool PackedRow::any() const noexcept {
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

bool PackedRow::dot(std::span<const std::uint64_t> other) const noexcept {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other[w];
    return (std::popcount(acc) & 1) != 0;
}

PackedRow PackedRow::from_bits(std::span<const std::uint8_t> bits) {
    PackedRow row(bits.size());
    for (std::size_t j = 0; j < bits.size(); ++j)
        if (bits[j] & 1U) row.set(j, true);
    return row;
}

Bits PackedRow::to_bits() const {
    Bits out(size_);
    for (std::size_t j = 0; j < size_; ++j) out[j] = get(j) ? 1 : 0;
    return out;
}

namespace {

// Row-reduces a copy of `rows` and returns the rank.
std::size_t gf2_rank(std::vector<PackedRow> rows, std::size_t n) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && !rows[pivot].get(col)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && rows[r].get(col)) rows[r] ^= rows[rank];
        ++rank;
    }
    return rank;
}

}  // namespace

ParityCheckMatrix::ParityCheckMatrix(std::size_t n, std::vector<std::vector<std::size_t>> rows)
    : n_(n), row_support_(std::move(rows)), col_support_(n) {
    const std::size_t m = row_support_.size();
    if (m == 0 || m >= n_)
        throw ShapeError("parity-check matrix needs 0 < rows < n (got rows=" + std::to_string(m) +
                         ", n=" + std::to_string(n_) + ")");
    rows_.reserve(m);
    for (std::size_t r = 0; r < m; ++r) {
        auto& support = row_support_[r];
        std::sort(support.begin(), support.end());
        if (std::adjacent_find(support.begin(), support.end()) != support.end())
            throw ParseError("row " + std::to_string(r) + " lists a column twice");
        if (support.empty()) throw ShapeError("row " + std::to_string(r) + " of H is empty");
        PackedRow row(n_);
        for (auto c : support) {
            if (c >= n_)
                throw ParseError("column index " + std::to_string(c) + " out of range in row " +
                                 std::to_string(r));
            row.set(c, true);
            col_support_[c].push_back(r);
        }
        nnz_ += support.size();
        rows_.push_back(std::move(row));
    }
    if (gf2_rank(rows_, n_) != m)
        throw RankError("parity-check rows are linearly dependent over GF(2)");
}

ParityCheckMatrix ParityCheckMatrix::from_dense(const std::vector<Bits>& dense) {
    if (dense.empty()) throw ShapeError("empty parity-check matrix");
    const std::size_t n = dense.front().size();
    std::vector<std::vector<std::size_t>> rows(dense.size());
    for (std::size_t r = 0; r < dense.size(); ++r) {
        if (dense[r].size() != n) throw ShapeError("ragged dense parity-check matrix");
        for (std::size_t c = 0; c < n; ++c)
            if (dense[r][c]) rows[r].push_back(c);
    }
    return ParityCheckMatrix(n, std::move(rows));
}

Syndrome ParityCheckMatrix::syndrome_of_packed(const PackedRow& word) const {
    Syndrome s;
    s.bits.resize(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        s.bits[r] = rows_[r].dot(word.words()) ? 1 : 0;
        s.weight += s.bits[r];
    }
    return s;
}

std::size_t ParityCheckMatrix::syndrome_weight(const PackedRow& word) const noexcept {
    std::size_t weight = 0;
    for (const auto& row : rows_) weight += row.dot(word.words()) ? 1 : 0;
    return weight;
}

Syndrome ParityCheckMatrix::syndrome_of_bits(std::span<const std::uint8_t> bits) const {
    if (bits.size() != n_)
        throw ShapeError("word length " + std::to_string(bits.size()) + " != n=" + std::to_string(n_));
    return syndrome_of_packed(PackedRow::from_bits(bits));
}

std::vector<Bits> ParityCheckMatrix::dense() const {
    std::vector<Bits> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) out.push_back(row.to_bits());
    return out;
}

GeneratorMatrix::GeneratorMatrix(std::vector<PackedRow> rows, std::vector<std::size_t> column_order)
    : rows_(std::move(rows)), column_order_(std::move(column_order)) {}

bool GeneratorMatrix::is_identity_order() const noexcept {
    for (std::size_t j = 0; j < column_order_.size(); ++j)
        if (column_order_[j] != j) return false;
    return true;
}

Bits hard_decision(std::span<const double> y) {
    Bits out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = hard_bit(y[i]);
    return out;
}

PackedRow hard_decision_packed(std::span<const double> y) {
    PackedRow row(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] < 0.0) row.set(i, true);
    return row;
}

GeneratorMatrix systematic_generator(const ParityCheckMatrix& h) {
    const std::size_t n = h.n();
    const std::size_t m = h.checks();
    const std::size_t k = h.k();

    std::vector<PackedRow> a;
    a.reserve(m);
    for (std::size_t r = 0; r < m; ++r) a.push_back(h.row(r));

    // order[p] = original column placed at reduced position p; pivots go to positions k..n-1.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    auto find_row = [&](std::size_t col, std::size_t from) -> std::size_t {
        for (std::size_t i = from; i < m; ++i)
            if (a[i].get(col)) return i;
        return m;
    };

    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t p = k + r;
        std::size_t pivot_row = find_row(order[p], r);
        if (pivot_row == m) {
            // Prefer later positions, then message positions; earlier pivots are fixed.
            std::vector<std::size_t> candidates;
            for (std::size_t q = p + 1; q < n; ++q) candidates.push_back(q);
            for (std::size_t q = 0; q < k; ++q) candidates.push_back(q);
            for (auto q : candidates) {
                pivot_row = find_row(order[q], r);
                if (pivot_row != m) {
                    std::swap(order[p], order[q]);
                    break;
                }
            }
            if (pivot_row == m) throw RankError("parity-check matrix is rank deficient");
        }
        std::swap(a[r], a[pivot_row]);
        const std::size_t col = order[p];
        for (std::size_t i = 0; i < m; ++i)
            if (i != r && a[i].get(col)) a[i] ^= a[r];
    }

    std::vector<PackedRow> g;
    g.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        PackedRow row(n);
        row.set(order[i], true);
        for (std::size_t r = 0; r < m; ++r)
            if (a[r].get(order[i])) row.set(order[k + r], true);
        g.push_back(std::move(row));
    }

    for (const auto& gr : g)
        for (std::size_t r = 0; r < m; ++r)
            if (h.row(r).dot(gr.words())) throw RankError("generator construction failed: G H^T != 0");

    return GeneratorMatrix(std::move(g), std::move(order));
}

Codeword encode(const GeneratorMatrix& g, std::span<const std::uint8_t> message) {
    if (message.size() != g.k())
        throw ShapeError("message length " + std::to_string(message.size()) +
                         " != k=" + std::to_string(g.k()));
    PackedRow acc(g.n());
    for (std::size_t i = 0; i < message.size(); ++i)
        if (message[i] & 1U) acc ^= g.row(i);
    return Codeword{acc.to_bits()};
}

Codeword make_codeword(const ParityCheckMatrix& h, Bits bits) {
    if (h.syndrome_of_bits(bits).weight != 0) throw RangeError("word is not a codeword (H x != 0)");
    return Codeword{std::move(bits)};
}

Syndrome syndrome(const ParityCheckMatrix& h, std::span<const double> y) {
    if (y.size() != h.n())
        throw ShapeError("word length " + std::to_string(y.size()) + " != n=" + std::to_string(h.n()));
    return h.syndrome_of_packed(hard_decision_packed(y));
}

MlDecoder::MlDecoder(const ParityCheckMatrix& h, const GeneratorMatrix& g) : n_(h.n()) {
    if (g.k() > max_k)
        throw RangeError("ML enumeration limited to k <= " + std::to_string(max_k) + " (got " +
                         std::to_string(g.k()) + ")");
    if (g.n() != h.n()) throw ShapeError("generator and parity-check lengths differ");
    const std::size_t count = std::size_t{1} << g.k();
    codebook_.reserve(count);
    Bits message(g.k());
    for (std::size_t idx = 0; idx < count; ++idx) {
        for (std::size_t j = 0; j < g.k(); ++j) message[j] = (idx >> j) & 1U;
        codebook_.push_back(encode(g, message).bits);
    }
}

std::size_t MlDecoder::decode_index(std::span<const double> y) const {
    if (y.size() != n_) throw ShapeError("word length mismatch in ML decode");
    double total = 0.0;
    for (double v : y) total += v;
    std::size_t best = 0;
    double best_corr = -std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < codebook_.size(); ++idx) {
        const auto& cw = codebook_[idx];
        double neg = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            if (cw[i]) neg += y[i];
        const double corr = total - 2.0 * neg;
        if (corr > best_corr) {
            best_corr = corr;
            best = idx;
        }
    }
    return best;
}

Codeword MlDecoder::decode(std::span<const double> y) const { return Codeword{codebook_[decode_index(y)]}; }

Codeword ml_decode(const ParityCheckMatrix& h, const GeneratorMatrix& g, std::span<const double> y,
                   double /*sigma*/) {
    return MlDecoder(h, g).decode(y);
}

ParityCheckMatrix hamming_code(std::size_t r) {
    if (r < 2 || r > 16) throw RangeError("hamming_code supports 2 <= r <= 16");
    const std::size_t total = (std::size_t{1} << r) - 1;
    std::vector<std::size_t> columns;
    for (std::size_t v = 1; v <= total; ++v)
        if (std::popcount(v) >= 2) columns.push_back(v);
    for (std::size_t b = 0; b < r; ++b) columns.push_back(std::size_t{1} << b);
    std::vector<std::vector<std::size_t>> rows(r);
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (std::size_t b = 0; b < r; ++b)
            if ((columns[c] >> b) & 1U) rows[b].push_back(c);
    return ParityCheckMatrix(total, std::move(rows));
}

ParityCheckMatrix builtin_code(std::string_view name) {
    if (name == "rep31") return ParityCheckMatrix(3, {{0, 1}, {0, 2}});
    if (name == "hamming74") return hamming_code(3);
    if (name == "hamming1511") return hamming_code(4);
    throw RangeError("unknown built-in code '" + std::string(name) + "'");
}

std::vector<std::string> builtin_code_names() { return {"rep31", "hamming74", "hamming1511"}; }

}  // namespace ddecc
