#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gqlc/bp.hpp"
#include "gqlc/code.hpp"
#include "gqlc/rng.hpp"

namespace gqlc {

/// Controlled-error training channel: a fixed number of wrong-sign LLRs of
/// magnitude alpha at uniformly random positions.
struct ErrorPatternSpec {
    int n_errors = 0;
    double alpha = 1.0;
};

struct ChannelSpec {
    double ebno_db = 0.0;
    double rate = 0.5;

    /// sigma^2 for unit-energy antipodal symbols.
    double noise_variance() const {
        return 1.0 / (2.0 * rate * std::pow(10.0, ebno_db / 10.0));
    }
};

inline std::vector<double> sample_training_llrs(int n, const ErrorPatternSpec& spec, Rng& rng) {
    if (spec.n_errors < 0 || spec.n_errors > n)
        throw std::invalid_argument("sample_training_llrs: n_errors out of range");
    std::vector<double> llr(n, spec.alpha);
    // partial Fisher-Yates, first n_errors slots end up uniform without replacement
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < spec.n_errors; ++i) {
        const int j = i + int(rng.next_below(std::uint64_t(n - i)));
        std::swap(idx[i], idx[j]);
        llr[idx[i]] = -spec.alpha;
    }
    return llr;
}

/// BPSK over AWGN: s = 1 - 2*bit, y = s + sigma*g, llr = 2*y/sigma^2.
inline std::vector<double> awgn_llrs(const BitVec& codeword, const ChannelSpec& chan, Rng& rng) {
    const double var = chan.noise_variance();
    const double sigma = std::sqrt(var);
    std::vector<double> llr(codeword.size());
    for (int v = 0; v < codeword.size(); ++v) {
        const double s = codeword.get(v) ? -1.0 : 1.0;
        const double y = s + sigma * rng.next_normal();
        llr[v] = 2.0 * y / var;
    }
    return llr;
}

/// Sequential Monte-Carlo block-error estimate with Agresti-Coull state.
struct BlerEstimate {
    std::uint64_t blocks = 0;
    std::uint64_t block_errors = 0;
    double z = 1.96;
    double target_rel = 0.1;
    std::uint64_t max_blocks = 100000000;
    double p_tilde = 0.0;
    double half_width = 0.0;
    bool converged = false;
};

struct AcPoint {
    double p_tilde = 0.0;
    double half_width = 0.0;
    bool precise = false;  ///< half_width <= target_rel * p_tilde
};

inline AcPoint agresti_coull(std::uint64_t blocks, std::uint64_t errors, double z,
                             double target_rel) {
    const double zz = z * z;
    const double n_adj = double(blocks) + zz;
    const double p = (double(errors) + zz / 2.0) / n_adj;
    const double half = z * std::sqrt(p * (1.0 - p) / n_adj);
    return {p, half, half <= target_rel * p};
}

/// Recomputes the interval after new evidence; returns true when the
/// precision target or the block cap says to stop.
inline bool agresti_coull_update(BlerEstimate& e) {
    const AcPoint ac = agresti_coull(e.blocks, e.block_errors, e.z, e.target_rel);
    e.p_tilde = ac.p_tilde;
    e.half_width = ac.half_width;
    e.converged = ac.precise;
    return ac.precise || e.blocks >= e.max_blocks;
}

enum class EvalMode { full_encoder, all_zero };

struct EvalOptions {
    int iterations = 5;
    double target_rel = 0.1;
    std::uint64_t min_blocks = 100;  ///< floor before any stop decision
    std::uint64_t max_blocks = 100000000;
    std::uint64_t batch_blocks = 1024;  ///< stop decisions on batch boundaries
    int workers = 1;
    double z = 1.96;
    double epsilon = 1e-7;
    double message_clamp = 0.0;
};

namespace detail {

inline BitVec random_message(int k, Rng& rng) {
    BitVec u(k);
    for (int i = 0; i < k; ++i) u.set(i, rng.next_u64() & 1u);
    return u;
}

struct BlockSimulator {
    const GeneratorMatrix* gen = nullptr;  // null in all_zero mode
    const BpDecoder* decoder = nullptr;
    ChannelSpec chan;
    BpConfig bp;
    std::uint64_t seed = 0;
    int n = 0, k = 0;

    /// Errors among blocks [first, last); each block draws from its own
    /// (seed, index) substream, so any partition gives the same totals.
    std::uint64_t run(std::uint64_t first, std::uint64_t last, BpDecoder::Workspace& ws) const {
        std::uint64_t errors = 0;
        for (std::uint64_t b = first; b < last; ++b) {
            Rng rng(Rng::substream(seed, b));
            BitVec codeword(n);
            if (gen) {
                const BitVec u = random_message(k, rng);
                codeword = encode(*gen, u);
            }
            const std::vector<double> llr = awgn_llrs(codeword, chan, rng);
            decoder->decode(llr, bp, ws);
            if (!(ws.hard == codeword)) ++errors;
        }
        return errors;
    }
};

}  // namespace detail

/// Monte-Carlo BLER of a code on the AWGN channel, stopping when the
/// Agresti-Coull interval is within target_rel of the estimate (or at
/// max_blocks, flagged unconverged). Deterministic in (seed, batch_blocks)
/// regardless of worker count.
inline BlerEstimate estimate_bler(const ParityCheckMatrix& h, double ebno_db,
                                  const EvalOptions& opt, std::uint64_t seed, EvalMode mode) {
    const CodeDimensions dims = h.dims();
    const ChannelSpec chan{ebno_db, dims.rate()};
    const BpDecoder decoder(h.codeword_form());
    GeneratorMatrix gen;
    detail::BlockSimulator sim;
    if (mode == EvalMode::full_encoder) {
        gen = build_generator(h);
        sim.gen = &gen;
    }
    sim.decoder = &decoder;
    sim.chan = chan;
    sim.bp = BpConfig{opt.iterations, opt.epsilon, GradientMode::pass_through, opt.message_clamp};
    sim.seed = seed;
    sim.n = dims.n;
    sim.k = dims.k;

    BlerEstimate est;
    est.z = opt.z;
    est.target_rel = opt.target_rel;
    est.max_blocks = opt.max_blocks;

    const int workers = std::max(1, opt.workers);
    while (true) {
        const std::uint64_t batch =
            std::min<std::uint64_t>(opt.batch_blocks, est.max_blocks - est.blocks);
        if (batch == 0) break;
        const std::uint64_t first = est.blocks;
        if (workers == 1 || batch < 2 * std::uint64_t(workers)) {
            BpDecoder::Workspace ws;
            est.block_errors += sim.run(first, first + batch, ws);
        } else {
            std::vector<std::uint64_t> partial(workers, 0);
            std::vector<std::thread> pool;
            const std::uint64_t chunk = (batch + workers - 1) / workers;
            for (int t = 0; t < workers; ++t) {
                const std::uint64_t lo = first + std::min<std::uint64_t>(batch, t * chunk);
                const std::uint64_t hi = first + std::min<std::uint64_t>(batch, (t + 1) * chunk);
                pool.emplace_back([&, lo, hi, t] {
                    BpDecoder::Workspace ws;
                    partial[t] = sim.run(lo, hi, ws);
                });
            }
            for (auto& th : pool) th.join();
            for (auto e : partial) est.block_errors += e;
        }
        est.blocks += batch;
        const bool stop = agresti_coull_update(est);
        if (est.blocks >= opt.min_blocks && stop) break;
    }
    return est;
}

}  // namespace gqlc
