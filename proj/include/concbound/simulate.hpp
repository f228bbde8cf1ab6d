#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "concbound/ensemble.hpp"
#include "concbound/errors.hpp"
#include "concbound/rng.hpp"
#include "concbound/types.hpp"

namespace concbound {

// Supremum statistics of one draw: Z, its truncated parts, and the envelope.
struct SupremumSample {
    double sup = 0.0;            // Z = max_j |P_n Z(j)|
    double sup_bounded = 0.0;    // supremum of the rows with envelope <= K
    double sup_unbounded = 0.0;  // supremum of the rows with envelope > K
    std::vector<double> envelope_row;
};

// Z plus truncated variants. Without K the whole sample counts as bounded.
inline SupremumSample supremum_stats(const MatrixSample& sample,
                                     std::optional<double> K = std::nullopt) {
    require_domain(sample.n >= 1 && sample.N >= 1, "supremum_stats: matrix must be nonempty");
    if (K) require_domain(*K > 0.0, "supremum_stats: K must be > 0");

    SupremumSample out;
    out.envelope_row = sample.envelope;
    const double inv_n = 1.0 / static_cast<double>(sample.n);
    for (std::int64_t j = 0; j < sample.N; ++j) {
        double total = 0.0, bounded = 0.0, unbounded = 0.0;
        for (std::int64_t i = 0; i < sample.n; ++i) {
            const double v = sample.cell(i, j);
            total += v;
            if (!K || sample.envelope[static_cast<std::size_t>(i)] <= *K) bounded += v;
            else unbounded += v;
        }
        out.sup = std::max(out.sup, std::fabs(total) * inv_n);
        out.sup_bounded = std::max(out.sup_bounded, std::fabs(bounded) * inv_n);
        out.sup_unbounded = std::max(out.sup_unbounded, std::fabs(unbounded) * inv_n);
    }
    return out;
}

struct ReplicationStats {
    double sup = 0.0;
    double sup_bounded = 0.0;
    double sup_unbounded = 0.0;
};

struct ReplicationBatch {
    std::vector<ReplicationStats> stats;  // indexed by replication
    std::vector<double> column_sq_sum;    // sum over replications and rows of Z_i(j)^2
    std::int64_t replications = 0;

    // empirical sigma: sqrt(max_j average of Z_i(j)^2)
    double sigma_hat(std::int64_t n) const {
        double worst = 0.0;
        for (double s : column_sq_sum) worst = std::max(worst, s);
        const double cells = static_cast<double>(replications) * static_cast<double>(n);
        return cells > 0 ? std::sqrt(worst / cells) : 0.0;
    }
};

// Worker count: explicit request, else CONCBOUND_THREADS, else the hardware.
inline int resolve_thread_count(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CONCBOUND_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

// One replication without materializing the matrix: accumulates column sums
// (total and split by the envelope test) and per-column squared sums.
inline ReplicationStats replication_stats(const EnsembleConfig& config, std::int64_t replication,
                                          std::optional<double> K, std::vector<double>& col_total,
                                          std::vector<double>& col_bounded,
                                          std::vector<double>& col_sq) {
    const auto N = static_cast<std::size_t>(config.N);
    col_total.assign(N, 0.0);
    col_bounded.assign(N, 0.0);
    std::vector<double> row(N);
    for (std::int64_t i = 0; i < config.n; ++i) {
        CounterRng rng(config.seed, CounterRng::kCellStream,
                       static_cast<std::uint64_t>(replication), static_cast<std::uint64_t>(i));
        double env = 0.0;
        if (config.dependence == Dependence::SharedEnvelopeRows) {
            env = detail::draw_magnitude(config, rng);
            for (std::size_t j = 0; j < N; ++j) row[j] = env * rng.next_sign();
        } else {
            for (std::size_t j = 0; j < N; ++j) {
                row[j] = detail::draw_cell(config, rng);
                env = std::max(env, std::fabs(row[j]));
            }
        }
        const bool bounded = !K || env <= *K;
        for (std::size_t j = 0; j < N; ++j) {
            col_total[j] += row[j];
            if (bounded) col_bounded[j] += row[j];
            col_sq[j] += row[j] * row[j];
        }
    }
    const double inv_n = 1.0 / static_cast<double>(config.n);
    ReplicationStats stats;
    for (std::size_t j = 0; j < N; ++j) {
        stats.sup = std::max(stats.sup, std::fabs(col_total[j]) * inv_n);
        stats.sup_bounded = std::max(stats.sup_bounded, std::fabs(col_bounded[j]) * inv_n);
        stats.sup_unbounded =
            std::max(stats.sup_unbounded, std::fabs(col_total[j] - col_bounded[j]) * inv_n);
    }
    return stats;
}

}  // namespace detail

// Runs `replications` independent draws. Each replication derives its
// randomness solely from (seed, replication index), results land at fixed
// indices, and per-chunk partial sums are merged in chunk order, so the
// output is identical for any worker count.
inline ReplicationBatch run_replications(const EnsembleConfig& config, std::int64_t replications,
                                         std::optional<double> K = std::nullopt,
                                         int threads = 0) {
    validate(config);
    require_usage(replications >= 1, "run_replications: replications must be >= 1");
    if (K) require_domain(*K > 0.0, "run_replications: K must be > 0");

    constexpr std::int64_t kChunk = 256;
    const std::int64_t chunk_count = (replications + kChunk - 1) / kChunk;
    const int workers = static_cast<int>(
        std::min<std::int64_t>(resolve_thread_count(threads), chunk_count));

    ReplicationBatch batch;
    batch.replications = replications;
    batch.stats.resize(static_cast<std::size_t>(replications));
    std::vector<std::vector<double>> chunk_sq(static_cast<std::size_t>(chunk_count));

    std::atomic<std::int64_t> next_chunk{0};
    const auto work = [&]() {
        std::vector<double> col_total, col_bounded;
        for (;;) {
            const std::int64_t chunk = next_chunk.fetch_add(1);
            if (chunk >= chunk_count) break;
            const std::int64_t begin = chunk * kChunk;
            const std::int64_t end = std::min(begin + kChunk, replications);
            auto& sq = chunk_sq[static_cast<std::size_t>(chunk)];
            sq.assign(static_cast<std::size_t>(config.N), 0.0);
            for (std::int64_t r = begin; r < end; ++r) {
                batch.stats[static_cast<std::size_t>(r)] =
                    detail::replication_stats(config, r, K, col_total, col_bounded, sq);
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // merge in chunk order for a thread-count-independent result
    batch.column_sq_sum.assign(static_cast<std::size_t>(config.N), 0.0);
    for (const auto& sq : chunk_sq) {
        for (std::size_t j = 0; j < sq.size(); ++j) batch.column_sq_sum[j] += sq[j];
    }
    return batch;
}

struct PlusMomentTarget {
    double l = 1.0;
    double eps = 1.0;
    Direction direction = Direction::Upper;
};

struct PlusMomentEstimate {
    double l = 1.0;
    double eps = 1.0;
    Direction direction = Direction::Upper;
    double threshold = 0.0;  // c = (1 +/- eps) * pilot estimate of E Z
    double estimate = 0.0;   // mean of [Z - c]_+^l or [c - Z]_+^l
    double se = 0.0;         // bootstrap standard error, B = 200
    std::int64_t count = 0;  // evaluation replications
};

struct SimulationSummary {
    double mean_sup = 0.0;     // pilot estimate of E Z
    double mean_sup_se = 0.0;
    double sigma_hat = 0.0;
    std::vector<PlusMomentEstimate> plus_moments;
    std::int64_t replications = 0;
    std::int64_t pilot_count = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline double mean_of(std::span<const double> values) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return values.empty() ? 0.0 : acc / static_cast<double>(values.size());
}

inline double sample_sd(std::span<const double> values, double mean) {
    if (values.size() < 2) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

inline double bootstrap_se(std::span<const double> values, std::uint64_t seed,
                           std::uint64_t target_index, int resamples = 200) {
    if (values.size() < 2) return 0.0;
    CounterRng rng(seed, CounterRng::kBootstrapStream, target_index);
    std::vector<double> means(static_cast<std::size_t>(resamples));
    for (auto& m : means) {
        double acc = 0.0;
        for (std::size_t k = 0; k < values.size(); ++k) {
            acc += values[rng.next_below(values.size())];
        }
        m = acc / static_cast<double>(values.size());
    }
    const double grand = mean_of(means);
    return sample_sd(means, grand);
}

}  // namespace detail

// Monte Carlo estimation of E Z and the plus-moment functionals
// E[Z - (1+eps) E Z]_+^l and E[(1-eps) E Z - Z]_+^l. The pilot sub-batch
// fixes the thresholds; the remaining replications estimate the moments, so
// threshold and sample stay independent.
inline SimulationSummary estimate(const EnsembleConfig& config, std::int64_t replications,
                                  const std::vector<PlusMomentTarget>& targets,
                                  std::optional<double> K = std::nullopt,
                                  double pilot_fraction = 0.2, int threads = 0) {
    require_usage(replications >= 100, "estimate: needs at least 100 replications");
    require_usage(pilot_fraction > 0.0 && pilot_fraction <= 0.5,
                  "estimate: pilot_fraction must lie in (0, 0.5]");
    require_usage(!targets.empty(), "estimate: needs at least one target");
    for (const auto& t : targets) {
        require_domain(t.l >= 1.0, "estimate: target l must be >= 1");
        detail::check_direction_eps(t.direction, t.eps, "estimate");
    }

    const auto batch = run_replications(config, replications, K, threads);
    const auto pilot_count =
        std::max<std::int64_t>(1, std::llround(pilot_fraction * static_cast<double>(replications)));

    std::vector<double> pilot(static_cast<std::size_t>(pilot_count));
    for (std::int64_t r = 0; r < pilot_count; ++r) {
        pilot[static_cast<std::size_t>(r)] = batch.stats[static_cast<std::size_t>(r)].sup;
    }
    const double pilot_mean = detail::mean_of(pilot);
    const double pilot_se =
        detail::sample_sd(pilot, pilot_mean) / std::sqrt(static_cast<double>(pilot_count));

    SimulationSummary summary;
    summary.mean_sup = pilot_mean;
    summary.mean_sup_se = pilot_se;
    summary.sigma_hat = batch.sigma_hat(config.n);
    summary.replications = replications;
    summary.pilot_count = pilot_count;
    summary.seed = config.seed;

    const std::int64_t eval_count = replications - pilot_count;
    std::vector<double> values(static_cast<std::size_t>(eval_count));
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        const auto& target = targets[ti];
        PlusMomentEstimate pm;
        pm.l = target.l;
        pm.eps = target.eps;
        pm.direction = target.direction;
        pm.threshold = target.direction == Direction::Upper ? (1.0 + target.eps) * pilot_mean
                                                            : (1.0 - target.eps) * pilot_mean;
        for (std::int64_t r = 0; r < eval_count; ++r) {
            const double z = batch.stats[static_cast<std::size_t>(pilot_count + r)].sup;
            const double excess =
                target.direction == Direction::Upper ? z - pm.threshold : pm.threshold - z;
            values[static_cast<std::size_t>(r)] =
                excess > 0.0 ? std::pow(excess, target.l) : 0.0;
        }
        pm.estimate = detail::mean_of(values);
        pm.se = detail::bootstrap_se(values, config.seed, ti);
        pm.count = eval_count;
        summary.plus_moments.push_back(pm);
    }
    return summary;
}

}  // namespace concbound
