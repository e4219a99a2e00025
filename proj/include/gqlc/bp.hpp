#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "gqlc/gf2.hpp"

namespace gqlc {

enum class GradientMode { exact, pass_through };

/// Which posteriors feed the training loss: the last iteration's only, or
/// the mean over every iteration's output (the recombined form).
enum class LossMode { last_iteration, all_iterations };

struct BpConfig {
    int iterations = 5;
    double epsilon = 1e-7;  ///< arctanh input stays in [-1+epsilon, 1-epsilon]
    GradientMode gradient_mode = GradientMode::pass_through;
    double message_clamp = 0.0;  ///< 0 disables; else check messages clamped to +-value
    LossMode loss_mode = LossMode::last_iteration;

    bool valid() const { return iterations >= 1 && epsilon > 0.0 && epsilon < 1.0; }
};

inline double clamp_product(double p, double epsilon) {
    return std::clamp(p, -1.0 + epsilon, 1.0 - epsilon);
}

struct BpResult {
    std::vector<double> lambda_out;
    BitVec hard;  ///< bit 1 iff posterior LLR < 0
};

/// Flooding-schedule sum-product decoder on the Tanner graph of a binary
/// matrix. Leave-one-out sums and check products are taken directly over
/// the adjacency lists. Construction is per-matrix; decode() is const and
/// reusable with a caller workspace.
class BpDecoder {
public:
    struct Workspace {
        std::vector<double> mu;    // check->variable, per edge
        std::vector<double> m_vc;  // variable->check, per edge
        std::vector<double> th;    // tanh(m_vc / 2), per edge
        std::vector<double> lambda_out;
        BitVec hard;
    };

    explicit BpDecoder(const BitMatrix& h) : n_(h.cols()), m_(h.rows()) {
        check_begin_.assign(m_ + 1, 0);
        for (int c = 0; c < m_; ++c) check_begin_[c + 1] = check_begin_[c] + h.row_weight(c);
        const int edges = check_begin_[m_];
        edge_var_.resize(edges);
        var_edges_.assign(n_, {});
        int e = 0;
        for (int c = 0; c < m_; ++c)
            for (int v = 0; v < n_; ++v)
                if (h.get(c, v)) {
                    edge_var_[e] = v;
                    var_edges_[v].push_back(e);
                    ++e;
                }
    }

    int n() const { return n_; }
    int checks() const { return m_; }
    int edges() const { return check_begin_[m_]; }

    void decode(std::span<const double> llr, const BpConfig& cfg, Workspace& ws) const {
        if (int(llr.size()) != n_) throw std::invalid_argument("bp decode: llr length mismatch");
        if (!cfg.valid()) throw std::invalid_argument("bp decode: invalid config");
        const int edges = check_begin_[m_];
        ws.mu.assign(edges, 0.0);
        ws.m_vc.assign(edges, 0.0);
        ws.th.assign(edges, 0.0);

        for (int it = 0; it < cfg.iterations; ++it) {
            // variable to check
            for (int v = 0; v < n_; ++v) {
                const auto& es = var_edges_[v];
                for (std::size_t i = 0; i < es.size(); ++i) {
                    double msg = llr[v];
                    for (std::size_t j = 0; j < es.size(); ++j)
                        if (j != i) msg += ws.mu[es[j]];
                    ws.m_vc[es[i]] = msg;
                }
            }
            // check to variable
            for (int e = 0; e < edges; ++e) ws.th[e] = std::tanh(0.5 * ws.m_vc[e]);
            for (int c = 0; c < m_; ++c) {
                const int b = check_begin_[c], t = check_begin_[c + 1];
                for (int e = b; e < t; ++e) {
                    double prod = 1.0;
                    for (int f = b; f < t; ++f)
                        if (f != e) prod *= ws.th[f];
                    double msg = 2.0 * std::atanh(clamp_product(prod, cfg.epsilon));
                    if (cfg.message_clamp > 0.0)
                        msg = std::clamp(msg, -cfg.message_clamp, cfg.message_clamp);
                    ws.mu[e] = msg;
                }
            }
        }

        ws.lambda_out.assign(llr.begin(), llr.end());
        for (int c = 0; c < m_; ++c)
            for (int e = check_begin_[c]; e < check_begin_[c + 1]; ++e)
                ws.lambda_out[edge_var_[e]] += ws.mu[e];

        ws.hard = BitVec(n_);
        for (int v = 0; v < n_; ++v) ws.hard.set(v, ws.lambda_out[v] < 0.0);
    }

    int edge_variable(int e) const { return edge_var_[e]; }
    int check_edges_begin(int c) const { return check_begin_[c]; }
    int check_edges_end(int c) const { return check_begin_[c + 1]; }

private:
    int n_ = 0, m_ = 0;
    std::vector<int> check_begin_;
    std::vector<int> edge_var_;
    std::vector<std::vector<int>> var_edges_;
};

inline BpResult bp_decode(const BitMatrix& h, std::span<const double> llr, const BpConfig& cfg) {
    BpDecoder dec(h);
    BpDecoder::Workspace ws;
    dec.decode(llr, cfg, ws);
    return {std::move(ws.lambda_out), std::move(ws.hard)};
}

}  // namespace gqlc
