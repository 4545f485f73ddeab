#include "rumor/ensemble.hpp"

#include "rumor/error.hpp"
#include "rumor/rng.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace rumor {

std::string_view to_string(CiMethod m) noexcept
{
    return m == CiMethod::Normal ? "normal" : "quantile";
}

std::optional<CiMethod> parse_ci_method(std::string_view s) noexcept
{
    if (s == "quantile") return CiMethod::Quantile;
    if (s == "normal") return CiMethod::Normal;
    return std::nullopt;
}

double sorted_quantile(std::span<const double> sorted, double prob)
{
    if (sorted.empty()) throw InsufficientDataError("quantile of an empty sample");
    const double pos = static_cast<double>(sorted.size() - 1) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double w = pos - static_cast<double>(lo);
    return sorted[lo] + w * (sorted[lo + 1] - sorted[lo]);
}

double normal_quantile(double prob)
{
    static const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, prob);
}

Band confidence_band(std::span<const double> values, double level, CiMethod method)
{
    if (values.size() < 2) throw InsufficientDataError("confidence band needs at least two values");
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("ci_level", "must lie in (0, 1)");
    const double tail = (1.0 - level) / 2.0;
    if (method == CiMethod::Normal) {
        RunningMoments m;
        for (double v : values) m.add(v);
        const double half = normal_quantile(1.0 - tail) * m.stddev();
        return {m.mean() - half, m.mean() + half};
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return {sorted_quantile(sorted, tail), sorted_quantile(sorted, 1.0 - tail)};
}

void RunningMoments::add(double x) noexcept
{
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

void RunningMoments::merge(const RunningMoments& other) noexcept
{
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double n_a = static_cast<double>(count_);
    const double n_b = static_cast<double>(other.count_);
    const double n = n_a + n_b;
    const double delta = other.mean_ - mean_;
    mean_ += delta * n_b / n;
    m2_ += other.m2_ + delta * delta * n_a * n_b / n;
    count_ += other.count_;
}

double RunningMoments::variance() const noexcept
{
    if (count_ < 2) return std::numeric_limits<double>::quiet_NaN();
    return std::max(0.0, m2_ / static_cast<double>(count_ - 1));
}

double RunningMoments::stddev() const noexcept { return std::sqrt(variance()); }

std::vector<std::string> EnsembleOptions::violations(std::string_view prefix) const
{
    std::vector<std::string> out;
    const std::string pre(prefix);
    if (run_count == 0) out.push_back(pre + ".runs: must be >= 1");
    if (!(ci_level > 0.0 && ci_level < 1.0)) out.push_back(pre + ".ci_level: must lie in (0, 1)");
    if (reservoir_capacity < 2) out.push_back(pre + ".reservoir_capacity: must be >= 2");
    return out;
}

RunMetrics compute_run_metrics(const Trajectory& trajectory)
{
    RunMetrics m;
    if (trajectory.states.empty()) return m;
    m.peak_i = trajectory.states.front().i();
    m.peak_time = trajectory.times.front();
    for (std::size_t n = 1; n < trajectory.states.size(); ++n) {
        if (trajectory.states[n].i() > m.peak_i) {
            m.peak_i = trajectory.states[n].i();
            m.peak_time = trajectory.times[n];
        }
    }
    const auto& last = trajectory.states.back();
    m.final_size = last.r() + last.f();
    m.terminal_i = last.i();
    m.projection_events = trajectory.projection_events;
    return m;
}

std::pair<double, double> order_free_mean_std(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    RunningMoments m;
    for (double v : values) m.add(v);
    return {m.mean(), m.stddev()};
}

namespace {

/// Per-point moments for every compartment plus the squared norm.
struct PointAccumulator {
    std::vector<std::array<RunningMoments, kCompartments>> moments;
    std::vector<RunningMoments> second_moment;

    explicit PointAccumulator(std::size_t points) : moments(points), second_moment(points) {}

    void add(const Trajectory& t)
    {
        for (std::size_t n = 0; n < t.states.size(); ++n) {
            for (std::size_t k = 0; k < kCompartments; ++k) moments[n][k].add(t.states[n][k]);
            second_moment[n].add(t.states[n].squared_norm());
        }
    }

    void merge(const PointAccumulator& other)
    {
        for (std::size_t n = 0; n < moments.size(); ++n) {
            for (std::size_t k = 0; k < kCompartments; ++k) moments[n][k].merge(other.moments[n][k]);
            second_moment[n].merge(other.second_moment[n]);
        }
    }
};

/// Values of the first `capacity` runs, laid out [compartment][point][run].
class Reservoir {
public:
    Reservoir(std::size_t points, std::size_t capacity) : points_(points), capacity_(capacity)
    {
        values_.resize(kCompartments * points * capacity);
    }

    // Distinct runs write disjoint slots.
    void store(std::size_t run, const Trajectory& t)
    {
        if (run >= capacity_) return;
        for (std::size_t n = 0; n < points_; ++n) {
            for (std::size_t k = 0; k < kCompartments; ++k) values_[(k * points_ + n) * capacity_ + run] = t.states[n][k];
        }
    }

    std::span<const double> at(std::size_t compartment, std::size_t point, std::size_t filled) const
    {
        return {values_.data() + (compartment * points_ + point) * capacity_, std::min(filled, capacity_)};
    }

private:
    std::size_t points_;
    std::size_t capacity_;
    std::vector<double> values_;
};

class FirstError {
public:
    void record(std::size_t run, std::exception_ptr error)
    {
        std::lock_guard lock(mutex_);
        if (!error_ || run < run_) {
            error_ = error;
            run_ = run;
        }
        failed_ = true;
    }

    void rethrow() const
    {
        if (!error_) return;
        try {
            std::rethrow_exception(error_);
        } catch (const std::exception& e) {
            throw RunError("run " + std::to_string(run_), e);
        }
    }

    bool failed() const noexcept { return failed_; }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
    std::size_t run_ = 0;
    std::atomic<bool> failed_{false};
};

/// Calls fn(worker) once per worker, on the calling thread when there is only one.
template <class Fn>
void run_workers(std::size_t workers, Fn&& fn)
{
    if (workers <= 1) {
        fn(std::size_t{0});
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back([&fn, w] { fn(w); });
    for (auto& t : pool) t.join();
}

std::size_t resolve_workers(std::size_t requested, std::size_t runs)
{
    std::size_t w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(w, runs));
}

}  // namespace

EnsembleResult run_ensemble(const ModelParams& p, const HistoryFunction& history, const IntegratorConfig& cfg,
                            const EnsembleOptions& options)
{
    {
        std::vector<std::string> violations = p.violations();
        for (auto v : cfg.violations(p.tau)) violations.push_back(std::move(v));
        for (auto v : options.violations()) violations.push_back(std::move(v));
        if (!violations.empty()) throw ConfigError(std::move(violations));
    }

    const std::size_t runs = options.run_count;
    const std::size_t points = cfg.recorded_points();
    const std::size_t workers = resolve_workers(options.workers, runs);

    EnsembleResult result;
    std::vector<RunMetrics> metrics(runs);
    if (options.retain_trajectories) result.trajectories.resize(runs);
    Reservoir reservoir(points, std::min(options.reservoir_capacity, runs));
    PointAccumulator total(points);
    FirstError error;

    auto simulate = [&](std::size_t run) -> std::optional<Trajectory> {
        try {
            Trajectory t = integrate(p, history, cfg, derive_seed(options.base_seed, run));
            metrics[run] = compute_run_metrics(t);
            reservoir.store(run, t);
            return t;
        } catch (...) {
            error.record(run, std::current_exception());
            return std::nullopt;
        }
    };

    if (options.merge == MergeMode::Sequential) {
        // Workers fill per-run slots; the merge walks them in index order.
        std::vector<std::optional<Trajectory>> slots(runs);
        std::atomic<std::size_t> next{0};
        run_workers(workers, [&](std::size_t) {
            for (std::size_t run = next++; run < runs; run = next++) {
                if (error.failed()) return;
                slots[run] = simulate(run);
            }
        });
        error.rethrow();
        for (std::size_t run = 0; run < runs; ++run) {
            total.add(*slots[run]);
            if (options.retain_trajectories) result.trajectories[run] = std::move(*slots[run]);
        }
    } else {
        std::vector<PointAccumulator> partials(workers, PointAccumulator(points));
        run_workers(workers, [&](std::size_t worker) {
            const std::size_t begin = runs * worker / workers;
            const std::size_t end = runs * (worker + 1) / workers;
            for (std::size_t run = begin; run < end; ++run) {
                if (error.failed()) return;
                auto t = simulate(run);
                if (!t) return;
                partials[worker].add(*t);
                if (options.retain_trajectories) result.trajectories[run] = std::move(*t);
            }
        });
        error.rethrow();
        for (const auto& partial : partials) total.merge(partial);
    }

    // Summary.
    auto& summary = result.summary;
    summary.run_count = runs;
    summary.ci_level = options.ci_level;
    summary.ci_method = options.ci_method;
    summary.times.resize(points);
    const engine::StepGrid grid = engine::make_grid(cfg, p.tau);
    for (std::size_t n = 0; n < points; ++n) summary.times[n] = grid.time(n * cfg.record_stride);
    summary.second_moment.resize(points);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < kCompartments; ++k) {
        auto& series = summary.compartments[k];
        series.mean.resize(points);
        series.stddev.resize(points);
        series.lower.resize(points, nan);
        series.upper.resize(points, nan);
        for (std::size_t n = 0; n < points; ++n) {
            const auto& m = total.moments[n][k];
            series.mean[n] = m.mean();
            series.stddev[n] = m.stddev();
            if (runs < 2) continue;
            Band band;
            if (options.ci_method == CiMethod::Normal) {
                const double half = normal_quantile(1.0 - (1.0 - options.ci_level) / 2.0) * m.stddev();
                band = {m.mean() - half, m.mean() + half};
            } else {
                band = confidence_band(reservoir.at(k, n, runs), options.ci_level, CiMethod::Quantile);
            }
            // A skewed sample can put its mean outside the quantile band.
            series.lower[n] = std::min(band.lower, m.mean());
            series.upper[n] = std::max(band.upper, m.mean());
        }
    }
    for (std::size_t n = 0; n < points; ++n) summary.second_moment[n] = total.second_moment[n].mean();

    // Metrics.
    auto& out = result.metrics;
    std::vector<double> peaks(runs), finals(runs);
    for (std::size_t run = 0; run < runs; ++run) {
        peaks[run] = metrics[run].peak_i;
        finals[run] = metrics[run].final_size;
        result.projection_events += metrics[run].projection_events;
    }
    std::tie(out.peak_mean, out.peak_std) = order_free_mean_std(std::move(peaks));
    std::tie(out.final_mean, out.final_std) = order_free_mean_std(std::move(finals));
    out.runs = std::move(metrics);
    const auto& mean_i = summary[Compartment::I].mean;
    const auto peak_it = std::max_element(mean_i.begin(), mean_i.end());
    out.mean_trajectory_peak = *peak_it;
    out.mean_trajectory_peak_time = summary.times[static_cast<std::size_t>(peak_it - mean_i.begin())];

    const double terminal_i = mean_i.back();
    if (terminal_i >= kExtinctionThreshold * p.population) {
        std::ostringstream os;
        os << "mean I(T) = " << terminal_i << " >= " << kExtinctionThreshold
           << " * N: outbreak not extinguished at the horizon, final sizes are provisional";
        result.warnings.push_back(os.str());
    }
    return result;
}

}  // namespace rumor
