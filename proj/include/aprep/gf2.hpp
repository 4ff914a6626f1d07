#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace aprep {

/// Fixed-length bit vector packed into 64-bit words. Bits past size() are kept zero.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    static BitVector from_indices(size_t n, std::span<const uint32_t> indices);

    size_t size() const { return size_; }
    size_t num_words() const { return words_.size(); }

    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(size_t i, bool v) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= m;
        } else {
            words_[i >> 6] &= ~m;
        }
    }
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

    BitVector &operator^=(const BitVector &o) {
        for (size_t k = 0; k < words_.size(); ++k) {
            words_[k] ^= o.words_[k];
        }
        return *this;
    }
    friend BitVector operator^(BitVector a, const BitVector &b) { return a ^= b; }

    size_t popcount() const {
        size_t c = 0;
        for (uint64_t w : words_) {
            c += static_cast<size_t>(std::popcount(w));
        }
        return c;
    }
    bool any() const {
        for (uint64_t w : words_) {
            if (w) {
                return true;
            }
        }
        return false;
    }
    /// Parity of popcount(this & o).
    bool dot(const BitVector &o) const {
        uint64_t acc = 0;
        for (size_t k = 0; k < words_.size(); ++k) {
            acc ^= words_[k] & o.words_[k];
        }
        return std::popcount(acc) & 1;
    }
    std::vector<uint32_t> indices() const;

    std::span<uint64_t> words() { return words_; }
    std::span<const uint64_t> words() const { return words_; }

    friend bool operator==(const BitVector &, const BitVector &) = default;

private:
    size_t size_ = 0;
    std::vector<uint64_t> words_;
};

/// Dense GF(2) matrix as a list of packed rows.
class BitMatrix {
public:
    BitMatrix(size_t rows, size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}
    explicit BitMatrix(std::vector<BitVector> rows, size_t cols) : cols_(cols), rows_(std::move(rows)) {}

    size_t num_rows() const { return rows_.size(); }
    size_t num_cols() const { return cols_; }
    BitVector &row(size_t r) { return rows_[r]; }
    const BitVector &row(size_t r) const { return rows_[r]; }
    bool get(size_t r, size_t c) const { return rows_[r].get(c); }
    void set(size_t r, size_t c, bool v) { rows_[r].set(c, v); }

    BitVector multiply(const BitVector &x) const;

private:
    size_t cols_;
    std::vector<BitVector> rows_;
};

/// Rank over GF(2) by Gaussian elimination on a copy.
size_t gf2_rank(const BitMatrix &m);
size_t gf2_rank(std::span<const BitVector> rows);

/// A solution of m x = b with free variables set to zero, or nullopt if inconsistent.
std::optional<BitVector> gf2_solve(const BitMatrix &m, const BitVector &b);

/// True iff v lies in the GF(2) row span of basis.
bool gf2_in_span(std::span<const BitVector> basis, const BitVector &v);

}  // namespace aprep
