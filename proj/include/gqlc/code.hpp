#pragma once

#include <stdexcept>
#include <utility>

#include "gqlc/gf2.hpp"
#include "gqlc/rng.hpp"

namespace gqlc {

struct CodeDimensions {
    int n = 0;  ///< codeword length in bits
    int k = 0;  ///< message length in bits

    int checks() const { return n - k; }
    bool valid() const { return k > 0 && k < n; }
    double rate() const { return double(k) / double(n); }
    bool operator==(const CodeDimensions&) const = default;
};

inline void require_valid(const CodeDimensions& d) {
    if (!d.valid()) throw std::invalid_argument("code dimensions must satisfy 0 < k < n");
}

/// Bernoulli probability of a 1 per trainable entry.
struct DensitySpec {
    double p = 0.5;
    bool valid() const { return p >= 0.0 && p <= 1.0; }
};

/// Systematic parity-check matrix in standard form. Only the (n-k) x k
/// redundant part w is stored; the identity block is implied, which makes
/// the checks linearly independent for every w.
///
/// Two full-matrix views exist. standard_form() is [w | I], the presentation
/// used by the file formats and graph analysis. codeword_form() is [I | w],
/// the same checks with columns in codeword order (parity bits first,
/// message bits last); encoded words satisfy codeword_form() * c = 0.
class ParityCheckMatrix {
public:
    ParityCheckMatrix() = default;

    ParityCheckMatrix(CodeDimensions dims, BitMatrix w) : dims_(dims), w_(std::move(w)) {
        require_valid(dims_);
        if (w_.rows() != dims_.checks() || w_.cols() != dims_.k)
            throw std::invalid_argument("parity part must be (n-k) x k");
    }

    const CodeDimensions& dims() const { return dims_; }
    const BitMatrix& w() const { return w_; }
    bool w_bit(int check, int msg) const { return w_.get(check, msg); }
    void set_w_bit(int check, int msg, bool v) { w_.set(check, msg, v); }

    BitMatrix standard_form() const {
        const int m = dims_.checks();
        BitMatrix h(m, dims_.n);
        for (int c = 0; c < m; ++c) {
            for (int j = 0; j < dims_.k; ++j) h.set(c, j, w_.get(c, j));
            h.set(c, dims_.k + c, true);
        }
        return h;
    }

    BitMatrix codeword_form() const {
        const int m = dims_.checks();
        BitMatrix h(m, dims_.n);
        for (int c = 0; c < m; ++c) {
            h.set(c, c, true);
            for (int j = 0; j < dims_.k; ++j) h.set(c, m + j, w_.get(c, j));
        }
        return h;
    }

    bool operator==(const ParityCheckMatrix&) const = default;

private:
    CodeDimensions dims_;
    BitMatrix w_;
};

/// k x n generator [wᵀ | I_k]: parity bits lead, message bits trail.
struct GeneratorMatrix {
    CodeDimensions dims;
    BitMatrix rows;
};

inline GeneratorMatrix build_generator(const ParityCheckMatrix& h) {
    const auto& d = h.dims();
    const int m = d.checks();
    BitMatrix g(d.k, d.n);
    for (int i = 0; i < d.k; ++i) {
        for (int c = 0; c < m; ++c) g.set(i, c, h.w_bit(c, i));
        g.set(i, m + i, true);
    }
    return {d, std::move(g)};
}

/// c = u · G over GF(2); the last k bits of c equal u.
inline BitVec encode(const GeneratorMatrix& g, const BitVec& u) {
    if (u.size() != g.dims.k) throw std::invalid_argument("encode: message must have k bits");
    return gf2_vecmat(u, g.rows);
}

/// Each w entry drawn independently Bernoulli(density.p).
inline ParityCheckMatrix sample_w(CodeDimensions dims, DensitySpec density, std::uint64_t seed) {
    require_valid(dims);
    if (!density.valid()) throw std::invalid_argument("density must lie in [0, 1]");
    Rng rng(seed);
    BitMatrix w(dims.checks(), dims.k);
    for (int c = 0; c < dims.checks(); ++c)
        for (int j = 0; j < dims.k; ++j) w.set(c, j, rng.next_bernoulli(density.p));
    return {dims, std::move(w)};
}

}  // namespace gqlc
