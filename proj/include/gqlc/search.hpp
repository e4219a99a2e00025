#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gqlc/channel.hpp"
#include "gqlc/code.hpp"

namespace gqlc {

struct RandomSearchRecord {
    CodeDimensions dims;
    double density = 0.0;
    std::uint64_t code_index = 0;
    std::uint64_t code_seed = 0;  ///< sample_w(dims, density, code_seed) rebuilds the code
    std::vector<double> ebno_db;
    std::vector<BlerEstimate> estimates;
};

struct CampaignConfig {
    CodeDimensions dims;
    double density = 0.3;
    int count = 1;
    std::vector<double> ebno_db;
    EvalOptions eval;
    std::uint64_t seed = 0;
    int workers = 1;
};

/// Evaluates `count` randomly sampled standard-form codes end to end
/// (sample, build generator, Monte-Carlo BLER per Eb/N0). Codes run in
/// parallel; record i depends only on (seed, i), so results are independent
/// of scheduling.
inline std::vector<RandomSearchRecord> random_search_campaign(const CampaignConfig& cfg) {
    if (cfg.count < 1) throw std::invalid_argument("campaign: count must be >= 1");
    require_valid(cfg.dims);
    std::vector<RandomSearchRecord> records(std::size_t(cfg.count));

    const auto eval_one = [&](std::uint64_t index) {
        RandomSearchRecord rec;
        rec.dims = cfg.dims;
        rec.density = cfg.density;
        rec.code_index = index;
        rec.code_seed = Rng::substream(cfg.seed, index);
        const ParityCheckMatrix h = sample_w(cfg.dims, DensitySpec{cfg.density}, rec.code_seed);
        EvalOptions opt = cfg.eval;
        opt.workers = 1;  // parallelism lives at the code level here
        for (std::size_t j = 0; j < cfg.ebno_db.size(); ++j) {
            rec.ebno_db.push_back(cfg.ebno_db[j]);
            rec.estimates.push_back(estimate_bler(h, cfg.ebno_db[j], opt,
                                                  Rng::substream(rec.code_seed, j + 1),
                                                  EvalMode::full_encoder));
        }
        records[index] = std::move(rec);
    };

    const int workers = std::max(1, cfg.workers);
    if (workers == 1 || cfg.count == 1) {
        for (int i = 0; i < cfg.count; ++i) eval_one(std::uint64_t(i));
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < std::min(workers, cfg.count); ++t)
            pool.emplace_back([&] {
                for (std::uint64_t i; (i = next.fetch_add(1)) < std::uint64_t(cfg.count);)
                    eval_one(i);
            });
        for (auto& th : pool) th.join();
    }
    return records;
}

/// Converged BLER samples of one (dims, density) population at one Eb/N0,
/// sorted ascending. Unconverged estimates are excluded and counted.
struct EmpiricalCdf {
    CodeDimensions dims;
    double density = 0.0;
    double ebno_db = 0.0;
    std::vector<double> samples;
    int excluded_unconverged = 0;
};

inline EmpiricalCdf build_cdf(std::span<const RandomSearchRecord> records, double ebno_db) {
    EmpiricalCdf cdf;
    cdf.ebno_db = ebno_db;
    for (const auto& r : records) {
        for (std::size_t j = 0; j < r.ebno_db.size(); ++j) {
            if (std::fabs(r.ebno_db[j] - ebno_db) > 1e-9) continue;
            cdf.dims = r.dims;
            cdf.density = r.density;
            if (r.estimates[j].converged)
                cdf.samples.push_back(r.estimates[j].p_tilde);
            else
                ++cdf.excluded_unconverged;
        }
    }
    if (cdf.samples.empty())
        throw std::invalid_argument("build_cdf: no converged samples at requested Eb/N0");
    std::sort(cdf.samples.begin(), cdf.samples.end());
    return cdf;
}

/// F(x) = P(sample <= x).
inline double cdf_value(const EmpiricalCdf& cdf, double x) {
    const auto it = std::upper_bound(cdf.samples.begin(), cdf.samples.end(), x);
    return double(it - cdf.samples.begin()) / double(cdf.samples.size());
}

/// Order-statistic quantile, linear interpolation between closest ranks at
/// position q*N - 1 (the interpolated inverse of the empirical CDF, so
/// quantile(F(x)) == x at every sample point).
inline double quantile(const EmpiricalCdf& cdf, double q) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q must lie in [0, 1]");
    const std::size_t n = cdf.samples.size();
    const double pos = std::max(0.0, q * double(n) - 1.0);
    const std::size_t lo = std::size_t(pos);
    if (lo + 1 >= n) return cdf.samples[n - 1];
    const double frac = pos - double(lo);
    return cdf.samples[lo] + frac * (cdf.samples[lo + 1] - cdf.samples[lo]);
}

struct ComparisonResult {
    double learned_bler = 0.0;
    std::int64_t updates = 0;
    double q_below = 0.0;  ///< empirical P(random BLER < learned)
    double p_beat = 0.0;   ///< 1 - (1 - q)^M
};

/// Probability that at least one of `updates` independent random samples
/// strictly outperforms the learned BLER, under the empirical CDF.
inline ComparisonResult beat_probability(const EmpiricalCdf& cdf, double learned_bler,
                                         std::int64_t updates) {
    if (updates < 1) throw std::invalid_argument("beat_probability: updates must be >= 1");
    const auto it = std::lower_bound(cdf.samples.begin(), cdf.samples.end(), learned_bler);
    const double q = double(it - cdf.samples.begin()) / double(cdf.samples.size());
    const double p_beat = q >= 1.0 ? 1.0 : -std::expm1(double(updates) * std::log1p(-q));
    return {learned_bler, updates, q, p_beat};
}

}  // namespace gqlc
