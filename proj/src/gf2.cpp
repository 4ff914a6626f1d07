#include "aprep/gf2.hpp"

#include <stdexcept>

namespace aprep {

BitVector BitVector::from_indices(size_t n, std::span<const uint32_t> indices) {
    BitVector v(n);
    for (uint32_t i : indices) {
        if (i >= n) {
            throw std::out_of_range("bit index out of range");
        }
        v.flip(i);
    }
    return v;
}

std::vector<uint32_t> BitVector::indices() const {
    std::vector<uint32_t> out;
    for (size_t k = 0; k < words_.size(); ++k) {
        uint64_t w = words_[k];
        while (w) {
            out.push_back(static_cast<uint32_t>(k * 64 + std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

BitVector BitMatrix::multiply(const BitVector &x) const {
    BitVector out(rows_.size());
    for (size_t r = 0; r < rows_.size(); ++r) {
        out.set(r, rows_[r].dot(x));
    }
    return out;
}

namespace {

// Reduces rows in place to row-echelon form; returns pivot column per pivot row.
std::vector<size_t> eliminate(std::vector<BitVector> &rows, size_t cols, BitVector *rhs) {
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows.size(); ++c) {
        size_t p = r;
        while (p < rows.size() && !rows[p].get(c)) {
            ++p;
        }
        if (p == rows.size()) {
            continue;
        }
        if (p != r) {
            std::swap(rows[p], rows[r]);
            if (rhs) {
                bool t = rhs->get(p);
                rhs->set(p, rhs->get(r));
                rhs->set(r, t);
            }
        }
        for (size_t k = 0; k < rows.size(); ++k) {
            if (k != r && rows[k].get(c)) {
                rows[k] ^= rows[r];
                if (rhs && rhs->get(r)) {
                    rhs->flip(k);
                }
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

size_t gf2_rank(std::span<const BitVector> rows) {
    if (rows.empty()) {
        return 0;
    }
    std::vector<BitVector> copy(rows.begin(), rows.end());
    return eliminate(copy, rows.front().size(), nullptr).size();
}

size_t gf2_rank(const BitMatrix &m) {
    std::vector<BitVector> copy;
    copy.reserve(m.num_rows());
    for (size_t r = 0; r < m.num_rows(); ++r) {
        copy.push_back(m.row(r));
    }
    return eliminate(copy, m.num_cols(), nullptr).size();
}

std::optional<BitVector> gf2_solve(const BitMatrix &m, const BitVector &b) {
    if (b.size() != m.num_rows()) {
        throw std::invalid_argument("gf2_solve: right-hand side length mismatch");
    }
    std::vector<BitVector> rows;
    rows.reserve(m.num_rows());
    for (size_t r = 0; r < m.num_rows(); ++r) {
        rows.push_back(m.row(r));
    }
    BitVector rhs = b;
    auto pivots = eliminate(rows, m.num_cols(), &rhs);
    for (size_t r = pivots.size(); r < rows.size(); ++r) {
        if (rhs.get(r)) {
            return std::nullopt;
        }
    }
    BitVector x(m.num_cols());
    for (size_t r = 0; r < pivots.size(); ++r) {
        x.set(pivots[r], rhs.get(r));
    }
    return x;
}

bool gf2_in_span(std::span<const BitVector> basis, const BitVector &v) {
    std::vector<BitVector> with(basis.begin(), basis.end());
    size_t before = gf2_rank(with);
    with.push_back(v);
    return gf2_rank(with) == before;
}

}  // namespace aprep
