#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gqlc/bp_gated.hpp"
#include "gqlc/channel.hpp"
#include "gqlc/code.hpp"
#include "gqlc/optim.hpp"
#include "gqlc/rng.hpp"

namespace gqlc {

struct TrainingConfig {
    CodeDimensions dims;
    double alpha = 1.0;
    int n_errors = 0;
    OptimizerSpec optimizer;
    double init_density = 0.5;
    int batch_size = 8;
    int max_epochs = 256;
    int steps_per_epoch = 100;
    int train_iterations = 3;
    int val_iterations = 5;
    LossMode loss_mode = LossMode::all_iterations;  ///< iteration-output recombination
    double val_ebno_db = 2.0;
    double val_target_rel = 0.3;
    std::uint64_t val_max_blocks = 10000000;
    int patience = 10;
    double epsilon = 1e-7;
    std::uint64_t seed = 0;

    void validate() const {
        require_valid(dims);
        if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
        if (n_errors < 0 || n_errors > dims.n)
            throw std::invalid_argument("n_errors must lie in [0, n]");
        if (init_density < 0.0 || init_density > 1.0)
            throw std::invalid_argument("init_density must lie in [0, 1]");
        if (batch_size < 1 || steps_per_epoch < 1 || train_iterations < 1 || val_iterations < 1)
            throw std::invalid_argument("counts must be positive");
        if (max_epochs < 0) throw std::invalid_argument("max_epochs must be >= 0");
        if (patience < 1) throw std::invalid_argument("patience must be >= 1");
        if (optimizer.uses_update_matrix() && optimizer.threshold_T < 1)
            throw std::invalid_argument("threshold_T must be >= 1");
    }
};

struct EpochRecord {
    int epoch = 0;
    int step_begin = 0, step_end = 0;
    double val_bler = 0.0;
    double val_half_width = 0.0;
    bool val_converged = false;
    std::int64_t cumulative_updates = 0;
    std::int64_t changed_bits = 0;
};

struct TrainingReport {
    ParityCheckMatrix code;  ///< snapshot from the best validation epoch
    std::int64_t update_count = 0;  ///< weight-update events over the whole run
    std::int64_t changed_bits_total = 0;
    std::vector<EpochRecord> history;
    int best_epoch = -1;
    double best_val_bler = 0.0;
    int epochs_run = 0;
    double wall_seconds = 0.0;
};

inline std::int64_t count_updates(const TrainingReport& r) { return r.update_count; }

namespace detail {

// substream tags under the run seed
inline constexpr std::uint64_t kInitStream = 0;
inline constexpr std::uint64_t kTrainStream = 1;
inline constexpr std::uint64_t kValStream = 2;

}  // namespace detail

/// One full training session: gated-BP forward/backward on controlled-error
/// batches, discrete optimizer steps, per-epoch all-zero validation with the
/// sequential BLER estimator, early stopping on patience, best-epoch restore.
inline TrainingReport train(const TrainingConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const CodeDimensions dims = cfg.dims;
    const int m = dims.checks(), n = dims.n, k = dims.k;
    const bool is_dsf = cfg.optimizer.variant == OptimizerVariant::dsf;
    const bool per_sample_grads = cfg.optimizer.variant == OptimizerVariant::s_gqla_update_matrix;

    BitMatrix w;
    DsfState dsf;
    if (is_dsf) {
        dsf = dsf_init(dims, DensitySpec{cfg.init_density}, cfg.optimizer.dsf_init_v,
                       Rng::substream(cfg.seed, detail::kInitStream));
        w = dsf.binary_view();
    } else {
        w = sample_w(dims, DensitySpec{cfg.init_density},
                     Rng::substream(cfg.seed, detail::kInitStream))
                .w();
    }

    UpdateMatrix um;
    if (cfg.optimizer.uses_update_matrix()) um = UpdateMatrix(dims, cfg.optimizer.threshold_T);

    // relaxed [w | I], w block rebuilt whenever bits flip
    RelaxedMatrix relaxed(m, n);
    const auto sync_relaxed = [&] {
        for (int c = 0; c < m; ++c) {
            for (int j = 0; j < k; ++j) relaxed.at(c, j) = w.get(c, j) ? 1.0 : 0.0;
            relaxed.at(c, k + c) = 1.0;
        }
    };
    sync_relaxed();

    const BpConfig bp_cfg{cfg.train_iterations, cfg.epsilon, GradientMode::pass_through, 0.0,
                          cfg.loss_mode};
    const ErrorPatternSpec pattern{cfg.n_errors, cfg.alpha};
    Rng train_rng(Rng::substream(cfg.seed, detail::kTrainStream));

    EvalOptions val_opt;
    val_opt.iterations = cfg.val_iterations;
    val_opt.target_rel = cfg.val_target_rel;
    val_opt.max_blocks = cfg.val_max_blocks;
    val_opt.epsilon = cfg.epsilon;

    TrainingReport report;
    report.code = ParityCheckMatrix(dims, w);
    report.best_val_bler = 0.0;

    GatedTape tape;
    std::vector<double> dh;
    WGradient grad_sum(dims);
    std::vector<WGradient> sample_grads;
    int epochs_since_improvement = 0;

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        std::int64_t epoch_changed = 0;
        for (int step = 0; step < cfg.steps_per_epoch; ++step) {
            QuantizedGradient q;
            if (per_sample_grads) {
                sample_grads.clear();
                for (int s = 0; s < cfg.batch_size; ++s) {
                    const auto llr = sample_training_llrs(n, pattern, train_rng);
                    bp_decode_gated(relaxed, llr, bp_cfg, tape);
                    backward_full(tape, dh);
                    sample_grads.push_back(extract_w_gradient(dh, dims));
                }
                q = s_gqla_batch_quantize(sample_grads);
            } else {
                std::fill(grad_sum.g.begin(), grad_sum.g.end(), 0.0);
                for (int s = 0; s < cfg.batch_size; ++s) {
                    const auto llr = sample_training_llrs(n, pattern, train_rng);
                    bp_decode_gated(relaxed, llr, bp_cfg, tape);
                    backward_full(tape, dh);
                    for (int c = 0; c < m; ++c)
                        for (int j = 0; j < k; ++j)
                            grad_sum.at(c, j) += dh[std::size_t(c) * n + j];
                }
                for (auto& x : grad_sum.g) x /= cfg.batch_size;
                if (!is_dsf) q = quantize(grad_sum);
            }

            int changed = 0;
            switch (cfg.optimizer.variant) {
                case OptimizerVariant::dsf:
                    changed = dsf_step(dsf, grad_sum, cfg.optimizer.learning_rate);
                    if (changed > 0) {
                        ++report.update_count;
                        w = dsf.binary_view();
                        sync_relaxed();
                    }
                    break;
                case OptimizerVariant::mb_gqla:
                    changed = mb_gqla_step(w, q);
                    if (changed > 0) {
                        ++report.update_count;
                        sync_relaxed();
                    }
                    break;
                case OptimizerVariant::mb_gqla_update_matrix:
                case OptimizerVariant::s_gqla_update_matrix:
                    if (update_matrix_accumulate(um, q)) {
                        changed = update_matrix_flush(w, um);
                        ++report.update_count;  // flush event, even if all flips were no-ops
                        if (changed > 0) sync_relaxed();
                    }
                    break;
            }
            epoch_changed += changed;
        }
        report.changed_bits_total += epoch_changed;

        // one fixed validation substream per run: epochs are compared on
        // common random numbers, so "improved" tracks the code, not the noise
        const BlerEstimate val =
            estimate_bler(ParityCheckMatrix(dims, w), cfg.val_ebno_db, val_opt,
                          Rng::substream(cfg.seed, detail::kValStream), EvalMode::all_zero);

        EpochRecord rec;
        rec.epoch = epoch;
        rec.step_begin = epoch * cfg.steps_per_epoch;
        rec.step_end = (epoch + 1) * cfg.steps_per_epoch;
        rec.val_bler = val.p_tilde;
        rec.val_half_width = val.half_width;
        rec.val_converged = val.converged;
        rec.cumulative_updates = report.update_count;
        rec.changed_bits = epoch_changed;
        report.history.push_back(rec);
        report.epochs_run = epoch + 1;

        if (report.best_epoch < 0 || val.p_tilde < report.best_val_bler) {
            report.best_epoch = epoch;
            report.best_val_bler = val.p_tilde;
            report.code = ParityCheckMatrix(dims, w);
            epochs_since_improvement = 0;
        } else {
            ++epochs_since_improvement;
        }
        if (epochs_since_improvement >= cfg.patience) break;
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace gqlc
