#pragma once

#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gqlc/bp_gated.hpp"
#include "gqlc/code.hpp"
#include "gqlc/rng.hpp"

namespace gqlc {

enum class OptimizerVariant { mb_gqla, mb_gqla_update_matrix, s_gqla_update_matrix, dsf };

inline const char* to_string(OptimizerVariant v) {
    switch (v) {
        case OptimizerVariant::mb_gqla: return "mb_gqla";
        case OptimizerVariant::mb_gqla_update_matrix: return "mb_gqla_update_matrix";
        case OptimizerVariant::s_gqla_update_matrix: return "s_gqla_update_matrix";
        case OptimizerVariant::dsf: return "dsf";
    }
    return "unknown";
}

inline OptimizerVariant optimizer_from_string(const std::string& s) {
    if (s == "mb_gqla") return OptimizerVariant::mb_gqla;
    if (s == "mb_gqla_update_matrix") return OptimizerVariant::mb_gqla_update_matrix;
    if (s == "s_gqla_update_matrix") return OptimizerVariant::s_gqla_update_matrix;
    if (s == "dsf") return OptimizerVariant::dsf;
    throw std::invalid_argument("unknown optimizer: " + s);
}

struct OptimizerSpec {
    OptimizerVariant variant = OptimizerVariant::mb_gqla_update_matrix;
    int threshold_T = 30;        ///< update-matrix variants
    double learning_rate = 1.0;  ///< dsf only
    double dsf_init_v = 1e-3;    ///< dsf symmetric init magnitude

    bool uses_update_matrix() const {
        return variant == OptimizerVariant::mb_gqla_update_matrix ||
               variant == OptimizerVariant::s_gqla_update_matrix;
    }
};

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

/// Elementwise gradient signs, entries in {-1, 0, +1}.
struct QuantizedGradient {
    CodeDimensions dims;
    std::vector<std::int8_t> q;

    QuantizedGradient() = default;
    explicit QuantizedGradient(CodeDimensions d) : dims(d), q(std::size_t(d.checks()) * d.k, 0) {}
    std::int8_t& at(int c, int j) { return q[std::size_t(c) * dims.k + j]; }
    std::int8_t at(int c, int j) const { return q[std::size_t(c) * dims.k + j]; }
};

inline QuantizedGradient quantize(const WGradient& g) {
    QuantizedGradient q(g.dims);
    for (std::size_t i = 0; i < g.g.size(); ++i) q.q[i] = std::int8_t(sign_of(g.g[i]));
    return q;
}

/// Positive gradient drives the weight to 0, negative to 1; sign 0 leaves it.
/// Returns the number of bits actually flipped.
inline int mb_gqla_step(BitMatrix& w, const QuantizedGradient& q) {
    if (w.rows() != q.dims.checks() || w.cols() != q.dims.k)
        throw std::invalid_argument("mb_gqla_step: shape mismatch");
    int changed = 0;
    for (int c = 0; c < w.rows(); ++c)
        for (int j = 0; j < w.cols(); ++j) {
            const int s = q.at(c, j);
            const bool bit = w.get(c, j);
            if (s > 0 && bit) {
                w.set(c, j, false);
                ++changed;
            } else if (s < 0 && !bit) {
                w.set(c, j, true);
                ++changed;
            }
        }
    return changed;
}

/// Signed counters accumulating gradient signs until one reaches the
/// threshold in magnitude; |u| never exceeds T.
struct UpdateMatrix {
    CodeDimensions dims;
    int threshold_T = 1;
    std::vector<std::int32_t> u;

    UpdateMatrix() = default;
    UpdateMatrix(CodeDimensions d, int threshold)
        : dims(d), threshold_T(threshold), u(std::size_t(d.checks()) * d.k, 0) {
        if (threshold < 1) throw std::invalid_argument("update matrix threshold must be >= 1");
    }
    std::int32_t& at(int c, int j) { return u[std::size_t(c) * dims.k + j]; }
    std::int32_t at(int c, int j) const { return u[std::size_t(c) * dims.k + j]; }

    int max_abs() const {
        int m = 0;
        for (auto x : u) m = std::max(m, std::abs(int(x)));
        return m;
    }
};

/// u += q elementwise; returns true when some counter just reached T.
inline bool update_matrix_accumulate(UpdateMatrix& um, const QuantizedGradient& q) {
    if (um.u.size() != q.q.size())
        throw std::invalid_argument("update_matrix_accumulate: shape mismatch");
    bool at_threshold = false;
    for (std::size_t i = 0; i < um.u.size(); ++i) {
        um.u[i] += q.q[i];
        if (std::abs(int(um.u[i])) >= um.threshold_T) at_threshold = true;
    }
    return at_threshold;
}

/// Flips every weight whose counter sits at +-T and points away from the
/// current value, then resets all counters. Returns the flip count.
inline int update_matrix_flush(BitMatrix& w, UpdateMatrix& um) {
    if (um.max_abs() != um.threshold_T)
        throw std::logic_error("update_matrix_flush: no counter at threshold");
    int changed = 0;
    for (int c = 0; c < w.rows(); ++c)
        for (int j = 0; j < w.cols(); ++j) {
            const int u = um.at(c, j);
            if (u == um.threshold_T && w.get(c, j)) {
                w.set(c, j, false);
                ++changed;
            } else if (u == -um.threshold_T && !w.get(c, j)) {
                w.set(c, j, true);
                ++changed;
            }
        }
    std::fill(um.u.begin(), um.u.end(), 0);
    return changed;
}

/// Q = sign(sum over samples of sign(grad)); every sample contributes the
/// same weight regardless of gradient magnitude.
inline QuantizedGradient s_gqla_batch_quantize(std::span<const WGradient> per_sample) {
    if (per_sample.empty()) throw std::invalid_argument("s_gqla_batch_quantize: empty batch");
    const CodeDimensions dims = per_sample.front().dims;
    std::vector<int> acc(per_sample.front().g.size(), 0);
    for (const auto& g : per_sample) {
        if (g.g.size() != acc.size())
            throw std::invalid_argument("s_gqla_batch_quantize: shape mismatch");
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += sign_of(g.g[i]);
    }
    QuantizedGradient q(dims);
    for (std::size_t i = 0; i < acc.size(); ++i)
        q.q[i] = std::int8_t((acc[i] > 0) - (acc[i] < 0));
    return q;
}

/// Real-valued weights with a binary step view; plain gradient descent on
/// the reals, pass-through step derivative.
struct DsfState {
    CodeDimensions dims;
    double init_v = 1e-3;
    std::vector<double> w_real;

    DsfState() = default;
    DsfState(CodeDimensions d, double v) : dims(d), init_v(v), w_real(std::size_t(d.checks()) * d.k, 0.0) {}

    /// step(x) = 1 iff x > 0
    BitMatrix binary_view() const {
        BitMatrix w(dims.checks(), dims.k);
        for (int c = 0; c < dims.checks(); ++c)
            for (int j = 0; j < dims.k; ++j) w.set(c, j, w_real[std::size_t(c) * dims.k + j] > 0.0);
        return w;
    }
};

inline DsfState dsf_init(CodeDimensions dims, DensitySpec density, double v, std::uint64_t seed) {
    require_valid(dims);
    if (!density.valid()) throw std::invalid_argument("density must lie in [0, 1]");
    DsfState st(dims, v);
    Rng rng(seed);
    for (auto& x : st.w_real) x = rng.next_bernoulli(density.p) ? v : -v;
    return st;
}

/// w_real -= lr * grad. Returns how many binary-view bits crossed the step.
inline int dsf_step(DsfState& st, const WGradient& grad, double lr) {
    if (grad.g.size() != st.w_real.size()) throw std::invalid_argument("dsf_step: shape mismatch");
    int changed = 0;
    for (std::size_t i = 0; i < st.w_real.size(); ++i) {
        const bool before = st.w_real[i] > 0.0;
        st.w_real[i] -= lr * grad.g[i];
        if ((st.w_real[i] > 0.0) != before) ++changed;
    }
    return changed;
}

}  // namespace gqlc
