#pragma once

// Monte Carlo transmission over Gaussian channels with nearest-signal
// decoding in the native metric.
//
// Trials for signal k are cut into fixed blocks of `trial_block` draws and
// block b uses the counter-based stream (seed, k, b). Workers pick blocks in
// any order and results are summed as integers, so the outcome depends on
// (seed, trials) only and never on the worker count.

#include "hypgauss/codes.hpp"
#include "hypgauss/error.hpp"
#include "hypgauss/gauss1d.hpp"
#include "hypgauss/gaussnd.hpp"
#include "hypgauss/hypgeo.hpp"
#include "hypgauss/rng.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <system_error>
#include <thread>
#include <variant>
#include <vector>

namespace hypgauss {

inline constexpr std::size_t trial_block = 1024;

struct SimConfig {
    std::uint64_t trials_per_signal = 10000;
    double sigma2 = 0.25;
    std::uint64_t seed = 1;
    unsigned workers = 1;

    void validate() const {
        detail::require(trials_per_signal >= 1, "trials_per_signal must be at least 1");
        detail::require(std::isfinite(sigma2) && sigma2 > 0.0, "noise variance must be positive");
        detail::require(workers >= 1, "need at least one worker");
    }
};

struct SimResult {
    double sigma2 = 0.0;
    std::uint64_t trials_per_signal = 0;
    std::vector<std::uint64_t> errors;
    std::vector<double> rates;
    std::vector<double> std_errs;
    std::uint64_t total_trials = 0;
    std::uint64_t total_errors = 0;
    double mean_rate = 0.0;
    double mean_std_err = 0.0;
    std::optional<double> bound;
};

/// sqrt(p (1 - p) / N).
inline double binomial_std_err(double p, std::uint64_t n) {
    return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

/// Index of the nearest signal; ties go to the lowest index.
inline std::size_t decode(const Constellation& c, std::span<const double> received) {
    detail::require(received.size() == c.dim(), "received point has the wrong dimension");
    std::size_t best = 0;
    double best_d = c.metric(received, c.signal(0));
    for (std::size_t k = 1; k < c.size(); ++k) {
        const double d = c.metric(received, c.signal(k));
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

inline std::size_t decode(const Constellation& c, const ModelPoint& received) {
    detail::require(c.hyperbolic() && model_of(c.space()) == received.model(),
                    "received point is not in the constellation's model");
    return decode(c, received.coords());
}

namespace detail {

// Noise source centered at one signal.
class SignalChannel {
public:
    SignalChannel(const Constellation& c, std::size_t k, double sigma2) : space_(c.space()) {
        const auto s = c.signal(k);
        if (!c.hyperbolic()) {
            center_.assign(s.begin(), s.end());
            sigma_ = std::sqrt(sigma2);
        } else if (c.dim() == 1) {
            const ModelPoint half = to_model(c.point(k), Model::HalfSpace);
            noise_.emplace<HyperGaussian1D>(half[0], sigma2);
        } else {
            noise_.emplace<HyperGaussianND>(c.point(k), sigma2);
        }
    }

    // Writes one received point into `out`.
    void receive(RngStream& rng, std::vector<double>& out) const {
        if (space_ == Space::Euclidean) {
            out.resize(center_.size());
            for (std::size_t i = 0; i < center_.size(); ++i) out[i] = center_[i] + sigma_ * rng.normal();
            return;
        }
        if (const auto* g1 = std::get_if<HyperGaussian1D>(&noise_)) {
            const double x = g1->sample(rng);
            ModelPoint p = to_model(ModelPoint::half_space({x}), model_of(space_));
            out.assign(p.coords().begin(), p.coords().end());
            return;
        }
        const ModelPoint p = std::get<HyperGaussianND>(noise_).sample(rng);
        out.assign(p.coords().begin(), p.coords().end());
    }

private:
    Space space_;
    std::vector<double> center_;
    double sigma_ = 0.0;
    std::variant<std::monostate, HyperGaussian1D, HyperGaussianND> noise_;
};

} // namespace detail

/// Estimates the per-signal and mean error probability.
inline SimResult simulate(const Constellation& c, const SimConfig& cfg) {
    cfg.validate();
    const std::size_t m = c.size();
    std::vector<detail::SignalChannel> channels;
    channels.reserve(m);
    for (std::size_t k = 0; k < m; ++k) channels.emplace_back(c, k, cfg.sigma2);

    const std::uint64_t blocks_per_signal = (cfg.trials_per_signal + trial_block - 1) / trial_block;
    detail::require(blocks_per_signal <= 0xFFFFFFFFull && m <= 0xFFFFFFFFull, "trial budget too large");
    const std::uint64_t total_blocks = blocks_per_signal * m;
    std::vector<std::uint64_t> block_errors(total_blocks, 0);

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        std::vector<double> rx;
        try {
            for (std::uint64_t id = next++; id < total_blocks; id = next++) {
                const std::size_t k = id / blocks_per_signal;
                const std::uint64_t b = id % blocks_per_signal;
                const std::uint64_t first = b * trial_block;
                const std::uint64_t count = std::min<std::uint64_t>(trial_block, cfg.trials_per_signal - first);
                RngStream rng = RngStream::substream(cfg.seed, static_cast<std::uint32_t>(k),
                                                     static_cast<std::uint32_t>(b));
                std::uint64_t errs = 0;
                for (std::uint64_t t = 0; t < count; ++t) {
                    channels[k].receive(rng, rx);
                    if (decode(c, rx) != k) ++errs;
                }
                block_errors[id] = errs;
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = total_blocks;
        }
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, total_blocks));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    SimResult res;
    res.sigma2 = cfg.sigma2;
    res.trials_per_signal = cfg.trials_per_signal;
    res.errors.assign(m, 0);
    for (std::uint64_t id = 0; id < total_blocks; ++id) res.errors[id / blocks_per_signal] += block_errors[id];
    for (std::size_t k = 0; k < m; ++k) {
        const double p = static_cast<double>(res.errors[k]) / static_cast<double>(cfg.trials_per_signal);
        res.rates.push_back(p);
        res.std_errs.push_back(binomial_std_err(p, cfg.trials_per_signal));
        res.total_errors += res.errors[k];
    }
    res.total_trials = cfg.trials_per_signal * m;
    res.mean_rate = static_cast<double>(res.total_errors) / static_cast<double>(res.total_trials);
    res.mean_std_err = binomial_std_err(res.mean_rate, res.total_trials);
    return res;
}

struct SweepRow {
    double sigma2 = 0.0;
    std::optional<SimResult> sim;
    std::optional<BoundReport> neighbors;
    BoundReport allpairs;
    std::optional<BoundReport> bhattacharyya;
};

/// Bounds (and, unless bounds_only, a simulation) at every grid variance.
///
/// Each row reuses cfg.seed, so a one-point grid reproduces simulate().
/// Neighbor bounds are included when neighbor lists are attached or can be
/// computed exactly (planar constellations).
inline std::vector<SweepRow> sweep(const Constellation& c, std::span<const double> sigma2_grid,
                                   const SimConfig& cfg, bool bounds_only = false) {
    detail::require(!sigma2_grid.empty(), "sweep needs a nonempty variance grid");
    std::optional<Constellation> with_nb;
    if (c.neighbors()) {
        with_nb = c;
    } else if (c.dim() == 2) {
        with_nb = ensure_neighbors(c);
    }
    std::vector<SweepRow> rows;
    rows.reserve(sigma2_grid.size());
    for (double s2 : sigma2_grid) {
        SimConfig row_cfg = cfg;
        row_cfg.sigma2 = s2;
        row_cfg.validate();
        SweepRow row;
        row.sigma2 = s2;
        row.allpairs = union_bound(c, s2, PairMode::AllPairs);
        if (with_nb) row.neighbors = union_bound(*with_nb, s2, PairMode::Neighbors);
        if (!c.hyperbolic()) row.bhattacharyya = bhattacharyya_bound(c, s2);
        if (!bounds_only) {
            row.sim = simulate(c, row_cfg);
            row.sim->bound = row.neighbors ? row.neighbors->mean_bound : row.allpairs.mean_bound;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Shortest decimal string that reads back as the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string opt_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

} // namespace detail

inline const char* sweep_csv_header =
    "sigma2,signal_index,trials,errors,p_hat,std_err,bound_neighbors,bound_allpairs,bound_bhattacharyya";

/// One line per signal plus a "mean" line per grid variance.
inline void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
    os << sweep_csv_header << '\n';
    for (const auto& row : rows) {
        const std::size_t m = row.allpairs.per_signal.size();
        for (std::size_t k = 0; k <= m; ++k) {
            const bool mean = k == m;
            os << format_double(row.sigma2) << ',' << (mean ? std::string("mean") : std::to_string(k + 1)) << ',';
            if (row.sim) {
                const auto& s = *row.sim;
                os << (mean ? s.total_trials : s.trials_per_signal) << ','
                   << (mean ? s.total_errors : s.errors[k]) << ','
                   << format_double(mean ? s.mean_rate : s.rates[k]) << ','
                   << format_double(mean ? s.mean_std_err : s.std_errs[k]) << ',';
            } else {
                os << ",,,,";
            }
            auto bound_of = [&](const std::optional<BoundReport>& b) -> std::optional<double> {
                if (!b) return std::nullopt;
                return mean ? b->mean_bound : b->per_signal[k];
            };
            os << detail::opt_field(bound_of(row.neighbors)) << ','
               << detail::opt_field(bound_of(row.allpairs)) << ','
               << detail::opt_field(bound_of(row.bhattacharyya)) << '\n';
        }
    }
}

/// Joins the mean lines of two sweeps on sigma2.
inline void write_compare_csv(std::ostream& os, std::span<const SweepRow> a, std::span<const SweepRow> b,
                              const std::string& label_a, const std::string& label_b) {
    detail::require(a.size() == b.size(), "compared sweeps must share a grid");
    for (std::size_t i = 0; i < a.size(); ++i)
        detail::require(a[i].sigma2 == b[i].sigma2, "compared sweeps must share a grid");
    const char* cols[] = {"p_hat", "std_err", "bound_neighbors", "bound_allpairs", "bound_bhattacharyya"};
    os << "sigma2";
    for (const auto* label : {&label_a, &label_b})
        for (const char* col : cols) os << ',' << *label << '_' << col;
    os << '\n';
    auto fields = [](const SweepRow& r) {
        std::optional<double> p, se, nb, bh;
        if (r.sim) {
            p = r.sim->mean_rate;
            se = r.sim->mean_std_err;
        }
        if (r.neighbors) nb = r.neighbors->mean_bound;
        if (r.bhattacharyya) bh = r.bhattacharyya->mean_bound;
        return std::vector<std::optional<double>>{p, se, nb, r.allpairs.mean_bound, bh};
    };
    for (std::size_t i = 0; i < a.size(); ++i) {
        os << format_double(a[i].sigma2);
        for (const auto& v : fields(a[i])) os << ',' << detail::opt_field(v);
        for (const auto& v : fields(b[i])) os << ',' << detail::opt_field(v);
        os << '\n';
    }
}

} // namespace hypgauss
