#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "chaos.hpp"
#include "equilibria.hpp"
#include "lyapunov.hpp"

namespace lorenzctl {

enum class SweepTask { Equilibria, OriginClass, Certificate, Regime, Lle };

inline std::string_view to_string(SweepTask t)
{
    switch (t) {
    case SweepTask::Equilibria: return "equilibria";
    case SweepTask::OriginClass: return "origin_class";
    case SweepTask::Certificate: return "certificate";
    case SweepTask::Regime: return "regime";
    case SweepTask::Lle: return "lle";
    }
    return "unknown";
}

inline std::optional<SweepTask> parse_sweep_task(std::string_view name)
{
    for (auto t : {SweepTask::Equilibria, SweepTask::OriginClass, SweepTask::Certificate, SweepTask::Regime,
                   SweepTask::Lle})
        if (to_string(t) == name) return t;
    return std::nullopt;
}

inline double* parameter_slot(SystemParams& p, std::string_view name)
{
    if (name == "a") return &p.a;
    if (name == "b") return &p.b;
    if (name == "c") return &p.c;
    if (name == "M") return &p.M;
    if (name == "N") return &p.N;
    if (name == "P") return &p.P;
    return nullptr;
}

struct SweepAxis {
    std::string parameter;
    double start = 0;
    double stop = 0;
    int count = 2;

    // Endpoints are hit exactly.
    double value(int i) const
    {
        if (i == count - 1) return stop;
        return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

struct SweepSpec {
    SystemParams base;
    std::vector<SweepAxis> axes;
    std::vector<SweepTask> tasks;
    std::uint64_t seed = 0;
    IntegratorSettings settings{};
    LLEOptions lle{};
    State lle_start{1.0, 1.0, 1.0};

    void validate() const
    {
        if (axes.empty() || axes.size() > 2) throw Error(ErrorCode::InvalidArgument, "a sweep needs one or two axes");
        for (const auto& ax : axes) {
            SystemParams probe;
            if (!parameter_slot(probe, ax.parameter))
                throw Error(ErrorCode::InvalidArgument, "unknown sweep parameter '" + ax.parameter + "'");
            if (ax.count < 2) throw Error(ErrorCode::InvalidArgument, "each axis needs at least 2 points");
        }
        if (axes.size() == 2 && axes[0].parameter == axes[1].parameter)
            throw Error(ErrorCode::InvalidArgument, "sweep axes must name distinct parameters");
        if (tasks.empty()) throw Error(ErrorCode::InvalidArgument, "a sweep needs at least one task");
    }

    std::size_t cell_count() const
    {
        std::size_t n = 1;
        for (const auto& ax : axes) n *= static_cast<std::size_t>(ax.count);
        return n;
    }
};

struct TaskFailure {
    SweepTask task;
    ErrorCode code;
};

struct SweepRow {
    std::vector<double> axis_values;
    SystemParams params;
    std::optional<EquilibriumSet> equilibria;
    std::optional<OriginClass> origin_class;
    std::optional<CertificateReport> certificate;
    std::optional<RegimeLabel> regime;
    std::optional<double> lle;
    std::vector<TaskFailure> failures;
};

struct SweepResult {
    std::vector<std::string> axis_names;
    std::vector<SweepTask> tasks;
    std::vector<SweepRow> rows; ///< row-major in axis declaration order
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t cell_seed(std::uint64_t seed, std::size_t index)
{
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index)));
}

inline SweepRow evaluate_cell(const SweepSpec& spec, std::size_t index)
{
    SweepRow row;
    row.params = spec.base;
    // Row-major: the last axis varies fastest.
    std::size_t rest = index;
    std::vector<int> coords(spec.axes.size());
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
        coords[k] = static_cast<int>(rest % static_cast<std::size_t>(spec.axes[k].count));
        rest /= static_cast<std::size_t>(spec.axes[k].count);
    }
    for (std::size_t k = 0; k < spec.axes.size(); ++k) {
        const double v = spec.axes[k].value(coords[k]);
        row.axis_values.push_back(v);
        *parameter_slot(row.params, spec.axes[k].parameter) = v;
    }

    for (auto task : spec.tasks) {
        try {
            switch (task) {
            case SweepTask::Equilibria: row.equilibria = find_equilibria(row.params); break;
            case SweepTask::OriginClass: row.origin_class = classify_origin(row.params); break;
            case SweepTask::Certificate: row.certificate = certificate(row.params); break;
            case SweepTask::Regime: row.regime = regime_classify(row.params); break;
            case SweepTask::Lle: {
                std::mt19937_64 rng(cell_seed(spec.seed, index));
                std::normal_distribution<double> gauss;
                LLEOptions opts = spec.lle;
                opts.initial_tangent = State{gauss(rng), gauss(rng), gauss(rng)};
                row.lle = largest_lyapunov_exponent(row.params, spec.lle_start, spec.settings, opts).lambda1;
                break;
            }
            }
        } catch (const Error& e) {
            row.failures.push_back({task, e.code()});
        }
    }
    return row;
}

} // namespace detail

/// Evaluates every grid cell on a pool of `workers` threads (0 picks the
/// hardware concurrency). Rows come back in grid order whatever the
/// scheduling, and each cell's RNG depends only on (seed, cell index).
inline SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 0)
{
    spec.validate();
    SweepResult result;
    for (const auto& ax : spec.axes) result.axis_names.push_back(ax.parameter);
    result.tasks = spec.tasks;

    const std::size_t cells = spec.cell_count();
    result.rows.resize(cells);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, cells));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < cells; i = next.fetch_add(1))
            result.rows[i] = detail::evaluate_cell(spec, i);
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return result;
}

} // namespace lorenzctl
