#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ddecc {

using Bits = std::vector<std::uint8_t>;

// Bit-packed GF(2) row; bit j lives in word j/64 at position j%64.
class PackedRow {
public:
    PackedRow() = default;
    explicit PackedRow(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    std::size_t size() const noexcept { return size_; }
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    bool get(std::size_t j) const noexcept { return (words_[j >> 6] >> (j & 63)) & 1U; }
    void set(std::size_t j, bool v) noexcept {
        const std::uint64_t mask = std::uint64_t{1} << (j & 63);
        if (v)
            words_[j >> 6] |= mask;
        else
            words_[j >> 6] &= ~mask;
    }
    void flip(std::size_t j) noexcept { words_[j >> 6] ^= std::uint64_t{1} << (j & 63); }

    PackedRow& operator^=(const PackedRow& other) noexcept {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
        return *this;
    }

    std::size_t popcount() const noexcept;
    bool any() const noexcept;

    // Parity of popcount(this AND other), i.e. the GF(2) inner product.
    bool dot(std::span<const std::uint64_t> other) const noexcept;

    friend bool operator==(const PackedRow&, const PackedRow&) = default;

    static PackedRow from_bits(std::span<const std::uint8_t> bits);
    Bits to_bits() const;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct Syndrome {
    Bits bits;
    std::size_t weight = 0;
};

/// Binary (n-k) x n parity-check matrix.
///
/// Construction validates that every row is non-empty, that 0 < k < n and
/// that the rows are linearly independent over GF(2). The sparse adjacency
/// (row and column supports) is derived once and shared with the belief
/// propagation decoder and the attention mask.
class ParityCheckMatrix {
public:
    // rows[r] lists the (0-based) column indices set in row r.
    ParityCheckMatrix(std::size_t n, std::vector<std::vector<std::size_t>> rows);

    static ParityCheckMatrix from_dense(const std::vector<Bits>& dense);

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return n_ - rows_.size(); }
    std::size_t checks() const noexcept { return rows_.size(); }
    std::size_t nnz() const noexcept { return nnz_; }
    double rate() const noexcept { return static_cast<double>(k()) / static_cast<double>(n_); }

    bool at(std::size_t r, std::size_t c) const noexcept { return rows_[r].get(c); }
    const PackedRow& row(std::size_t r) const noexcept { return rows_[r]; }
    const std::vector<std::size_t>& row_support(std::size_t r) const noexcept { return row_support_[r]; }
    const std::vector<std::size_t>& col_support(std::size_t c) const noexcept { return col_support_[c]; }

    Syndrome syndrome_of_bits(std::span<const std::uint8_t> bits) const;
    Syndrome syndrome_of_packed(const PackedRow& word) const;
    std::size_t syndrome_weight(const PackedRow& word) const noexcept;

    std::vector<Bits> dense() const;

private:
    std::size_t n_ = 0;
    std::size_t nnz_ = 0;
    std::vector<PackedRow> rows_;
    std::vector<std::vector<std::size_t>> row_support_;
    std::vector<std::vector<std::size_t>> col_support_;
};

/// k x n generator with G * H^T = 0.
///
/// Built from H by Gaussian elimination: column j of the reduced system is
/// column `column_order()[j]` of H. The first k entries of the order are the
/// message (systematic) positions, so encode(m) carries m[i] at codeword bit
/// column_order()[i].
class GeneratorMatrix {
public:
    GeneratorMatrix(std::vector<PackedRow> rows, std::vector<std::size_t> column_order);

    std::size_t k() const noexcept { return rows_.size(); }
    std::size_t n() const noexcept { return column_order_.size(); }
    const PackedRow& row(std::size_t i) const noexcept { return rows_[i]; }
    const std::vector<std::size_t>& column_order() const noexcept { return column_order_; }
    std::span<const std::size_t> message_positions() const noexcept {
        return std::span<const std::size_t>(column_order_).first(k());
    }
    bool is_identity_order() const noexcept;

private:
    std::vector<PackedRow> rows_;
    std::vector<std::size_t> column_order_;
};

struct Codeword {
    Bits bits;
};

// bin(y) = 0.5 (1 - sign(y)) with sign(0) = +1, so bin(0) = 0.
inline std::uint8_t hard_bit(double v) noexcept { return v < 0.0 ? 1 : 0; }
Bits hard_decision(std::span<const double> y);
PackedRow hard_decision_packed(std::span<const double> y);

GeneratorMatrix systematic_generator(const ParityCheckMatrix& h);

Codeword encode(const GeneratorMatrix& g, std::span<const std::uint8_t> message);

// Validates H x = 0.
Codeword make_codeword(const ParityCheckMatrix& h, Bits bits);

Syndrome syndrome(const ParityCheckMatrix& h, std::span<const double> y);

inline std::size_t parity_error_count(const Syndrome& s) noexcept { return s.weight; }

/// Exhaustive maximum-likelihood decoder (correlation maximisation).
///
/// The codebook is enumerated once at construction in message-index order:
/// message integer i has bit j equal to (i >> j) & 1. Ties resolve to the
/// lowest index.
class MlDecoder {
public:
    static constexpr std::size_t max_k = 16;

    MlDecoder(const ParityCheckMatrix& h, const GeneratorMatrix& g);

    Codeword decode(std::span<const double> y) const;
    std::size_t decode_index(std::span<const double> y) const;

    std::size_t size() const noexcept { return codebook_.size(); }
    const Bits& codeword(std::size_t index) const noexcept { return codebook_[index]; }

private:
    std::size_t n_ = 0;
    std::vector<Bits> codebook_;
};

// sigma does not change the argmax under AWGN; it is accepted for interface symmetry.
Codeword ml_decode(const ParityCheckMatrix& h, const GeneratorMatrix& g, std::span<const double> y,
                   double sigma);

// Built-in codes: "rep31", "hamming74", "hamming1511".
ParityCheckMatrix builtin_code(std::string_view name);
std::vector<std::string> builtin_code_names();

// Hamming code with r parity bits in [P^T | I] form.
ParityCheckMatrix hamming_code(std::size_t r);

}  // namespace ddecc
