#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace gqlc {

/// Packed GF(2) vector. Bits beyond size() stay zero.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(int n) : n_(n), w_(words_for(n), 0) {}

    int size() const { return n_; }
    bool get(int i) const { return (w_[std::size_t(i) >> 6] >> (i & 63)) & 1u; }

    void set(int i, bool v) {
        const std::uint64_t m = 1ULL << (i & 63);
        if (v)
            w_[std::size_t(i) >> 6] |= m;
        else
            w_[std::size_t(i) >> 6] &= ~m;
    }

    void flip(int i) { w_[std::size_t(i) >> 6] ^= 1ULL << (i & 63); }

    std::span<const std::uint64_t> words() const { return w_; }

    void xor_with(std::span<const std::uint64_t> other) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= other[i];
    }

    int popcount() const {
        int s = 0;
        for (auto w : w_) s += std::popcount(w);
        return s;
    }

    bool operator==(const BitVec&) const = default;

    static std::size_t words_for(int n) { return (std::size_t(n) + 63) / 64; }

private:
    int n_ = 0;
    std::vector<std::uint64_t> w_;
};

/// Dense packed GF(2) matrix, row-major words. Trailing bits of each row
/// word block stay zero.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), wpr_(BitVec::words_for(cols)), w_(std::size_t(rows) * wpr_, 0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bool get(int r, int c) const {
        return (w_[std::size_t(r) * wpr_ + (std::size_t(c) >> 6)] >> (c & 63)) & 1u;
    }

    void set(int r, int c, bool v) {
        const std::uint64_t m = 1ULL << (c & 63);
        auto& word = w_[std::size_t(r) * wpr_ + (std::size_t(c) >> 6)];
        if (v)
            word |= m;
        else
            word &= ~m;
    }

    std::span<const std::uint64_t> row(int r) const {
        return {w_.data() + std::size_t(r) * wpr_, wpr_};
    }

    int row_weight(int r) const {
        int s = 0;
        for (auto w : row(r)) s += std::popcount(w);
        return s;
    }

    int col_weight(int c) const {
        int s = 0;
        for (int r = 0; r < rows_; ++r) s += get(r, c);
        return s;
    }

    bool operator==(const BitMatrix&) const = default;

private:
    int rows_ = 0, cols_ = 0;
    std::size_t wpr_ = 0;
    std::vector<std::uint64_t> w_;
};

/// y = x · M over GF(2), x of length M.rows().
inline BitVec gf2_vecmat(const BitVec& x, const BitMatrix& m) {
    if (x.size() != m.rows()) throw std::invalid_argument("gf2_vecmat: dimension mismatch");
    BitVec y(m.cols());
    for (int i = 0; i < m.rows(); ++i)
        if (x.get(i)) y.xor_with(m.row(i));
    return y;
}

/// Syndrome-style product M · xᵀ over GF(2), one bit per row of M.
inline BitVec gf2_matvec(const BitMatrix& m, const BitVec& x) {
    if (x.size() != m.cols()) throw std::invalid_argument("gf2_matvec: dimension mismatch");
    BitVec s(m.rows());
    const auto xw = x.words();
    for (int r = 0; r < m.rows(); ++r) {
        const auto rw = m.row(r);
        int parity = 0;
        for (std::size_t i = 0; i < rw.size(); ++i) parity ^= std::popcount(rw[i] & xw[i]) & 1;
        s.set(r, parity & 1);
    }
    return s;
}

}  // namespace gqlc
