#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gqlc/bp.hpp"
#include "gqlc/code.hpp"

namespace gqlc {

/// Dense relaxation of a check matrix: entries in [0, 1] gate every
/// (check, variable) pair. Binary entries reproduce the sparse graph.
struct RelaxedMatrix {
    int m = 0, n = 0;
    std::vector<double> v;

    RelaxedMatrix() = default;
    RelaxedMatrix(int m_, int n_) : m(m_), n(n_), v(std::size_t(m_) * n_, 0.0) {}

    double& at(int c, int j) { return v[std::size_t(c) * n + j]; }
    double at(int c, int j) const { return v[std::size_t(c) * n + j]; }
};

inline RelaxedMatrix relax(const BitMatrix& h) {
    RelaxedMatrix r(h.rows(), h.cols());
    for (int c = 0; c < h.rows(); ++c)
        for (int j = 0; j < h.cols(); ++j) r.at(c, j) = h.get(c, j) ? 1.0 : 0.0;
    return r;
}

/// [w | I] with the identity block held at exact 0/1.
inline RelaxedMatrix relaxed_standard_form(const ParityCheckMatrix& h) {
    return relax(h.standard_form());
}

/// Records every intermediate of the gated forward pass, one layer per
/// iteration, for the hand-written reverse pass.
struct GatedTape {
    int m = 0, n = 0, iterations = 0;
    BpConfig cfg;
    std::vector<double> h;     // m*n gates
    std::vector<double> llr;   // n
    std::vector<double> m_vc;  // iterations*m*n variable->check messages
    std::vector<double> th;    // tanh(m_vc / 2)
    std::vector<double> gate;  // 1 + h*(th - 1)
    std::vector<double> prod;  // clamped leave-one-out check products
    std::vector<std::uint8_t> flags;  // bit0: product clamp hit, bit1: message clamp hit
    std::vector<double> mu;    // (iterations+1)*m*n check->variable, layer 0 = 0
    std::vector<double> lambda_iter;  // iterations*n posteriors, one row per iteration
    std::vector<double> lambda_out;   // n, equals the last lambda_iter row

    std::size_t layer(int it) const { return std::size_t(it) * m * n; }
    std::span<const double> posterior(int it) const {  // it in [1, iterations]
        return {lambda_iter.data() + std::size_t(it - 1) * n, std::size_t(n)};
    }
};

/// Gated dense flooding sum-product. At binary h this equals the sparse
/// decoder message for message; at fractional h every pair contributes with
/// gating factor 1 + h*(tanh(m/2) - 1) in the check products and weight h in
/// the sums, which leaves nonzero gradients on absent edges.
inline void bp_decode_gated(const RelaxedMatrix& relaxed_h, std::span<const double> llr,
                            const BpConfig& cfg, GatedTape& tape) {
    const int m = relaxed_h.m, n = relaxed_h.n;
    if (int(llr.size()) != n) throw std::invalid_argument("bp_decode_gated: llr length mismatch");
    if (!cfg.valid()) throw std::invalid_argument("bp_decode_gated: invalid config");
    for (double x : relaxed_h.v)
        if (!(x >= 0.0 && x <= 1.0))
            throw std::invalid_argument("bp_decode_gated: relaxed entries must lie in [0, 1]");

    const int T = cfg.iterations;
    const std::size_t mn = std::size_t(m) * n;
    tape.m = m;
    tape.n = n;
    tape.iterations = T;
    tape.cfg = cfg;
    tape.h = relaxed_h.v;
    tape.llr.assign(llr.begin(), llr.end());
    tape.m_vc.assign(std::size_t(T) * mn, 0.0);
    tape.th.assign(std::size_t(T) * mn, 0.0);
    tape.gate.assign(std::size_t(T) * mn, 0.0);
    tape.prod.assign(std::size_t(T) * mn, 0.0);
    tape.flags.assign(std::size_t(T) * mn, 0);
    tape.mu.assign(std::size_t(T + 1) * mn, 0.0);
    tape.lambda_iter.assign(std::size_t(T) * n, 0.0);

    std::vector<double> col(n), pre(n + 1), suf(n + 1);

    for (int it = 0; it < T; ++it) {
        const double* mu_prev = tape.mu.data() + tape.layer(it);
        double* mu_next = tape.mu.data() + tape.layer(it + 1);
        double* mv = tape.m_vc.data() + tape.layer(it);
        double* th = tape.th.data() + tape.layer(it);
        double* gate = tape.gate.data() + tape.layer(it);
        double* prod = tape.prod.data() + tape.layer(it);
        std::uint8_t* flags = tape.flags.data() + tape.layer(it);

        for (int v = 0; v < n; ++v) col[v] = llr[v];
        for (int c = 0; c < m; ++c) {
            const double* hrow = tape.h.data() + std::size_t(c) * n;
            const double* murow = mu_prev + std::size_t(c) * n;
            for (int v = 0; v < n; ++v) col[v] += hrow[v] * murow[v];
        }
        for (int c = 0; c < m; ++c) {
            const double* hrow = tape.h.data() + std::size_t(c) * n;
            const double* murow = mu_prev + std::size_t(c) * n;
            double* mrow = mv + std::size_t(c) * n;
            double* trow = th + std::size_t(c) * n;
            double* grow = gate + std::size_t(c) * n;
            for (int v = 0; v < n; ++v) {
                mrow[v] = col[v] - hrow[v] * murow[v];
                trow[v] = std::tanh(0.5 * mrow[v]);
                grow[v] = 1.0 + hrow[v] * (trow[v] - 1.0);
            }
            // leave-one-out products by prefix/suffix, no division
            pre[0] = 1.0;
            for (int v = 0; v < n; ++v) pre[v + 1] = pre[v] * grow[v];
            suf[n] = 1.0;
            for (int v = n - 1; v >= 0; --v) suf[v] = suf[v + 1] * grow[v];
            double* prow = prod + std::size_t(c) * n;
            std::uint8_t* frow = flags + std::size_t(c) * n;
            double* nrow = mu_next + std::size_t(c) * n;
            for (int v = 0; v < n; ++v) {
                const double raw = pre[v] * suf[v + 1];
                const double clamped = clamp_product(raw, cfg.epsilon);
                frow[v] = (raw != clamped) ? 1 : 0;
                prow[v] = clamped;
                double msg = 2.0 * std::atanh(clamped);
                if (cfg.message_clamp > 0.0) {
                    const double lim = cfg.message_clamp;
                    if (msg > lim || msg < -lim) {
                        frow[v] |= 2;
                        msg = std::clamp(msg, -lim, lim);
                    }
                }
                nrow[v] = msg;
            }
        }

        double* lam = tape.lambda_iter.data() + std::size_t(it) * n;
        for (int v = 0; v < n; ++v) lam[v] = llr[v];
        for (int c = 0; c < m; ++c) {
            const double* hrow = tape.h.data() + std::size_t(c) * n;
            const double* murow = mu_next + std::size_t(c) * n;
            for (int v = 0; v < n; ++v) lam[v] += hrow[v] * murow[v];
        }
    }

    tape.lambda_out.assign(tape.lambda_iter.end() - n, tape.lambda_iter.end());
}

inline GatedTape bp_decode_gated(const RelaxedMatrix& relaxed_h, std::span<const double> llr,
                                 const BpConfig& cfg) {
    GatedTape tape;
    bp_decode_gated(relaxed_h, llr, cfg, tape);
    return tape;
}

inline double softplus(double x) {
    // log(1 + e^x), stable for large |x|
    return std::fmax(x, 0.0) + std::log1p(std::exp(-std::fabs(x)));
}

struct LossValue {
    double total = 0.0;
    std::vector<double> per_bit;
};

/// Cross-entropy of the all-zero target under the posterior LLRs:
/// per bit -log P(bit = 0) = softplus(-lambda).
inline LossValue bce_loss(std::span<const double> lambda_out) {
    LossValue loss;
    loss.per_bit.resize(lambda_out.size());
    for (std::size_t v = 0; v < lambda_out.size(); ++v) {
        loss.per_bit[v] = softplus(-lambda_out[v]);
        loss.total += loss.per_bit[v];
    }
    return loss;
}

/// The scalar the reverse pass differentiates: bce of the final posterior,
/// or the mean of the per-iteration bce losses when iteration outputs are
/// recombined.
inline double recombined_loss(const GatedTape& tape) {
    if (tape.cfg.loss_mode == LossMode::last_iteration) return bce_loss(tape.lambda_out).total;
    double total = 0.0;
    for (int t = 1; t <= tape.iterations; ++t) total += bce_loss(tape.posterior(t)).total;
    return total / tape.iterations;
}

/// d(total loss)/dw over the trainable part only.
struct WGradient {
    CodeDimensions dims;
    std::vector<double> g;  // (n-k)*k row-major

    WGradient() = default;
    explicit WGradient(CodeDimensions d) : dims(d), g(std::size_t(d.checks()) * d.k, 0.0) {}
    double& at(int c, int j) { return g[std::size_t(c) * dims.k + j]; }
    double at(int c, int j) const { return g[std::size_t(c) * dims.k + j]; }
};

/// Reverse pass of bce_loss(bp_decode_gated(...)) w.r.t. every gate entry.
/// The arctanh derivative is 1/(1-x^2) in exact mode and 1 in pass-through
/// mode; gradients die at clamp saturation. Leave-one-out product adjoints
/// use the prefix/suffix recurrences, never division.
inline void backward_full(const GatedTape& tape, std::vector<double>& dh) {
    const int m = tape.m, n = tape.n, T = tape.iterations;
    const std::size_t mn = std::size_t(m) * n;
    const bool exact = tape.cfg.gradient_mode == GradientMode::exact;

    dh.assign(mn, 0.0);
    std::vector<double> dmu(mn, 0.0), dm(mn, 0.0), colD(n);
    std::vector<double> pre(n + 1), suf(n + 1), dP(n), lpart(n);

    const bool recombine = tape.cfg.loss_mode == LossMode::all_iterations;
    // adds the loss term of iteration t's posterior into dmu/dh
    const auto inject = [&](int t, double weight) {
        const double* mu = tape.mu.data() + tape.layer(t);
        const auto lam = tape.posterior(t);
        for (int v = 0; v < n; ++v) {
            const double dlam = -weight / (1.0 + std::exp(lam[std::size_t(v)]));
            for (int c = 0; c < m; ++c) {
                const std::size_t i = std::size_t(c) * n + v;
                dmu[i] += tape.h[i] * dlam;
                dh[i] += mu[i] * dlam;
            }
        }
    };
    inject(T, recombine ? 1.0 / T : 1.0);

    for (int it = T - 1; it >= 0; --it) {
        const double* mu_prev = tape.mu.data() + tape.layer(it);
        const double* th = tape.th.data() + tape.layer(it);
        const double* gate = tape.gate.data() + tape.layer(it);
        const double* prod = tape.prod.data() + tape.layer(it);
        const std::uint8_t* flags = tape.flags.data() + tape.layer(it);

        for (int c = 0; c < m; ++c) {
            const std::size_t off = std::size_t(c) * n;
            const double* grow = gate + off;

            // through mu = 2*arctanh(prod); clamps kill the gradient
            for (int v = 0; v < n; ++v) {
                double g = dmu[off + v];
                if (flags[off + v] & 2) g = 0.0;
                g *= 2.0;
                if (exact) {
                    const double p = prod[off + v];
                    g /= (1.0 - p * p);
                }
                if (flags[off + v] & 1) g = 0.0;
                dP[v] = g;
            }

            pre[0] = 1.0;
            for (int v = 0; v < n; ++v) pre[v + 1] = pre[v] * grow[v];
            suf[n] = 1.0;
            for (int v = n - 1; v >= 0; --v) suf[v] = suf[v + 1] * grow[v];

            // dgate[u] = suf_u * L_u + pre_u * R_u with
            // L_{u+1} = L_u * g_u + dP_u * pre_u, R_{u-1} = R_u * g_u + dP_u * suf_u
            double acc = 0.0;
            for (int v = 0; v < n; ++v) {
                lpart[v] = suf[v + 1] * acc;
                acc = acc * grow[v] + dP[v] * pre[v];
            }
            acc = 0.0;
            for (int v = n - 1; v >= 0; --v) {
                const double dgate = lpart[v] + pre[v] * acc;
                acc = acc * grow[v] + dP[v] * suf[v + 1];
                // gate = 1 + h*(th - 1), th = tanh(m_vc / 2)
                const std::size_t i = off + v;
                const double dth = dgate * tape.h[i];
                dh[i] += dgate * (th[i] - 1.0);
                dm[i] = dth * 0.5 * (1.0 - th[i] * th[i]);
            }
        }

        // variable->check stage: m_vc[c][v] = llr[v] + sum_{c'} h*mu_prev - h[c][v]*mu_prev[c][v]
        for (int v = 0; v < n; ++v) colD[v] = 0.0;
        for (int c = 0; c < m; ++c)
            for (int v = 0; v < n; ++v) colD[v] += dm[std::size_t(c) * n + v];

        if (it > 0) {
            for (int c = 0; c < m; ++c) {
                const std::size_t off = std::size_t(c) * n;
                for (int v = 0; v < n; ++v) {
                    const double rest = colD[v] - dm[off + v];
                    dmu[off + v] = rest * tape.h[off + v];
                    dh[off + v] += rest * mu_prev[off + v];
                }
            }
            if (recombine) inject(it, 1.0 / T);
        }
    }
}

/// Restrict a full m*n gate gradient to the trainable [w | I] block.
inline WGradient extract_w_gradient(std::span<const double> dh, CodeDimensions dims) {
    WGradient g(dims);
    const int m = dims.checks();
    for (int c = 0; c < m; ++c)
        for (int j = 0; j < dims.k; ++j) g.at(c, j) = dh[std::size_t(c) * dims.n + j];
    return g;
}

/// Gradient of the summed loss w.r.t. the w block, [w | I] layout.
inline WGradient backward(const GatedTape& tape, CodeDimensions dims) {
    std::vector<double> dh;
    backward_full(tape, dh);
    return extract_w_gradient(dh, dims);
}

}  // namespace gqlc
