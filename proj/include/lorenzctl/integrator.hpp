#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "equilibria.hpp"
#include "model.hpp"

namespace lorenzctl {

enum class StepperMode { FixedRK4, Adaptive };

inline std::string_view to_string(StepperMode m) { return m == StepperMode::FixedRK4 ? "rk4" : "adaptive"; }

struct IntegratorSettings {
    StepperMode mode = StepperMode::Adaptive;
    double dt_init = 1e-3;
    double dt_max = 0.1; ///< adaptive only; keeps h lambda inside the stability region near equilibria
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double t_max = 200.0;
    long max_steps = 10'000'000;
    double blowup_norm = 1e6;
    bool backward = false; ///< integrate the negated field

    void validate() const
    {
        if (!(dt_init > 0.0) || !(dt_max > 0.0) || !(rel_tol > 0.0) || !(abs_tol > 0.0) || !(t_max > 0.0) || !(blowup_norm > 0.0) ||
            max_steps <= 0)
            throw Error(ErrorCode::InvalidArgument, "integrator settings must be positive");
    }
};

enum class TrajectoryStatus { CompletedTspan, CapturedEquilibrium, Diverged, StepLimit };

inline std::string_view to_string(TrajectoryStatus s)
{
    switch (s) {
    case TrajectoryStatus::CompletedTspan: return "CompletedTspan";
    case TrajectoryStatus::CapturedEquilibrium: return "CapturedEquilibrium";
    case TrajectoryStatus::Diverged: return "Diverged";
    case TrajectoryStatus::StepLimit: return "StepLimit";
    }
    return "Unknown";
}

struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    TrajectoryStatus status = TrajectoryStatus::CompletedTspan;
};

struct ConvergenceOutcome {
    std::optional<Equilibrium> terminal;
    double final_distance = std::numeric_limits<double>::infinity();
    Trajectory trajectory;
};

inline constexpr double default_capture_radius = 1e-6;
inline constexpr int capture_dwell_checks = 10;

namespace ode {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
double norm(const Vec<N>& v)
{
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

template <std::size_t N>
bool finite(const Vec<N>& v)
{
    for (double c : v)
        if (!std::isfinite(c)) return false;
    return true;
}

// y + h * sum_i w_i k_i, component by component.
template <std::size_t N, std::size_t K>
Vec<N> combine(const Vec<N>& y, double h, const std::array<double, K>& w, const std::array<const Vec<N>*, K>& k)
{
    Vec<N> out;
    for (std::size_t j = 0; j < N; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < K; ++i) acc += w[i] * (*k[i])[j];
        out[j] = y[j] + h * acc;
    }
    return out;
}

/// Classical fourth-order Runge-Kutta step.
template <std::size_t N, class Field>
Vec<N> rk4_step(const Field& f, const Vec<N>& y, double h)
{
    const Vec<N> k1 = f(y);
    const Vec<N> k2 = f(combine<N, 1>(y, 0.5 * h, {1.0}, {&k1}));
    const Vec<N> k3 = f(combine<N, 1>(y, 0.5 * h, {1.0}, {&k2}));
    const Vec<N> k4 = f(combine<N, 1>(y, h, {1.0}, {&k3}));
    Vec<N> out;
    for (std::size_t j = 0; j < N; ++j) out[j] = y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    return out;
}

template <std::size_t N>
struct EmbeddedStep {
    Vec<N> y;     ///< fifth-order solution
    Vec<N> error; ///< difference to the embedded fourth-order solution
    Vec<N> f_end; ///< field at the new point (first stage of the next step)
};

/// Dormand-Prince 5(4) step; `k1` is f(y), reused from the previous step.
template <std::size_t N, class Field>
EmbeddedStep<N> dopri5_step(const Field& f, const Vec<N>& y, const Vec<N>& k1, double h)
{
    const Vec<N> k2 = f(combine<N, 1>(y, h, {1.0 / 5.0}, {&k1}));
    const Vec<N> k3 = f(combine<N, 2>(y, h, {3.0 / 40.0, 9.0 / 40.0}, {&k1, &k2}));
    const Vec<N> k4 = f(combine<N, 3>(y, h, {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0}, {&k1, &k2, &k3}));
    const Vec<N> k5 = f(combine<N, 4>(y, h, {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
                                      {&k1, &k2, &k3, &k4}));
    const Vec<N> k6 = f(combine<N, 5>(
        y, h, {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0},
        {&k1, &k2, &k3, &k4, &k5}));
    EmbeddedStep<N> out;
    out.y = combine<N, 5>(y, h, {35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0},
                          {&k1, &k3, &k4, &k5, &k6});
    out.f_end = f(out.y);
    const Vec<N> zero{};
    out.error = combine<N, 6>(zero, h,
                              {71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0,
                               -1.0 / 40.0},
                              {&k1, &k3, &k4, &k5, &k6, &out.f_end});
    return out;
}

/// Integrates y' = f(y) from t = 0 to t_end. `observe(t, y)` is called at the
/// start and after every accepted step; returning false stops the run and
/// the driver reports CapturedEquilibrium. A step ending beyond blowup_norm
/// (or non-finite) is observed, then the run ends as Diverged.
template <std::size_t N, class Field, class Observer>
TrajectoryStatus drive(const Field& f, Vec<N> y, double t_end, const IntegratorSettings& settings, Observer&& observe)
{
    settings.validate();
    double t = 0.0;
    if (!observe(t, y)) return TrajectoryStatus::CapturedEquilibrium;

    auto diverged = [&](const Vec<N>& v) { return !finite(v) || norm(v) > settings.blowup_norm; };

    if (settings.mode == StepperMode::FixedRK4) {
        const double steps_real = std::ceil(t_end / settings.dt_init - 1e-9);
        const long steps = std::max(1L, static_cast<long>(steps_real));
        if (steps > settings.max_steps) return TrajectoryStatus::StepLimit;
        for (long i = 0; i < steps; ++i) {
            const double t_next = (i + 1 == steps) ? t_end : static_cast<double>(i + 1) * settings.dt_init;
            y = rk4_step<N>(f, y, t_next - t);
            t = t_next;
            const bool keep_going = observe(t, y);
            if (diverged(y)) return TrajectoryStatus::Diverged;
            if (!keep_going) return TrajectoryStatus::CapturedEquilibrium;
        }
        return TrajectoryStatus::CompletedTspan;
    }

    constexpr double safety = 0.9;
    constexpr double min_factor = 0.2;
    constexpr double max_factor = 5.0;

    Vec<N> k1 = f(y);
    double h = std::min({settings.dt_init, settings.dt_max, t_end});
    long attempts = 0;
    while (t < t_end) {
        if (++attempts > settings.max_steps) return TrajectoryStatus::StepLimit;
        const bool last = h >= t_end - t;
        const double step = last ? t_end - t : h;
        if (step <= 1e-15 * (1.0 + std::abs(t))) return TrajectoryStatus::StepLimit;

        const auto trial = dopri5_step<N>(f, y, k1, step);
        const double scale = settings.rel_tol * std::max(norm(y), norm(trial.y)) + settings.abs_tol;
        double err = norm(trial.error) / scale;
        if (!std::isfinite(err)) err = std::numeric_limits<double>::max();

        if (err <= 1.0) {
            y = trial.y;
            k1 = trial.f_end;
            t = last ? t_end : t + step;
            const bool keep_going = observe(t, y);
            if (diverged(y)) return TrajectoryStatus::Diverged;
            if (!keep_going) return TrajectoryStatus::CapturedEquilibrium;
            const double factor = err == 0.0 ? max_factor : std::clamp(safety * std::pow(err, -0.2), min_factor, max_factor);
            // A truncated final step says nothing about the controller's h.
            h = std::min(settings.dt_max, last ? std::max(h, step * factor) : step * factor);
        } else {
            h = step * std::clamp(safety * std::pow(err, -0.2), min_factor, 1.0);
        }
    }
    return TrajectoryStatus::CompletedTspan;
}

inline Vec<3> to_vec(const State& s) { return {s.x, s.y, s.z}; }
inline State to_state(const Vec<3>& v) { return {v[0], v[1], v[2]}; }

} // namespace ode

/// Field of the controlled system as an ode::Vec<3> callable.
inline auto make_field(const SystemParams& p, bool backward = false)
{
    return [p, sign = backward ? -1.0 : 1.0](const ode::Vec<3>& v) {
        const State f = vector_field(p, ode::to_state(v));
        return ode::Vec<3>{sign * f.x, sign * f.y, sign * f.z};
    };
}

inline Trajectory integrate(const SystemParams& p, const State& u0, const IntegratorSettings& settings)
{
    Trajectory tr;
    tr.status = ode::drive<3>(make_field(p, settings.backward), ode::to_vec(u0), settings.t_max, settings,
                              [&](double t, const ode::Vec<3>& y) {
                                  tr.times.push_back(t);
                                  tr.states.push_back(ode::to_state(y));
                                  return true;
                              });
    return tr;
}

namespace detail {

inline std::vector<const Equilibrium*> isolated_points(const EquilibriumSet& eqs)
{
    std::vector<const Equilibrium*> out{&eqs.origin};
    if (eqs.pair) {
        out.push_back(&eqs.pair->plus);
        out.push_back(&eqs.pair->minus);
    }
    return out;
}

} // namespace detail

/// Integrates until the state has stayed within `capture_radius` of one
/// equilibrium for capture_dwell_checks consecutive step endpoints.
///
/// Capture stays disarmed until the state has once been farther than
/// `departure_radius` from u0, so a run that starts next to an equilibrium
/// on purpose (shooting off a saddle) is not captured on the spot.
inline ConvergenceOutcome integrate_to_equilibrium(const SystemParams& p, const State& u0, const EquilibriumSet& eqs,
                                                   double capture_radius, const IntegratorSettings& settings,
                                                   double departure_radius = 0.0)
{
    if (!(capture_radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "capture radius must be positive");

    const auto candidates = detail::isolated_points(eqs);
    ConvergenceOutcome out;
    const Equilibrium* current = nullptr;
    int dwell = 0;
    bool armed = departure_radius <= 0.0;

    auto nearest = [&](const State& s) {
        const Equilibrium* best = candidates.front();
        double best_d = distance(s, best->location);
        for (const auto* e : candidates) {
            const double d = distance(s, e->location);
            if (d < best_d) {
                best = e;
                best_d = d;
            }
        }
        return std::pair{best, best_d};
    };

    auto& tr = out.trajectory;
    tr.status = ode::drive<3>(make_field(p, settings.backward), ode::to_vec(u0), settings.t_max, settings,
                              [&](double t, const ode::Vec<3>& y) {
                                  const State s = ode::to_state(y);
                                  tr.times.push_back(t);
                                  tr.states.push_back(s);
                                  if (!armed) {
                                      armed = distance(s, u0) > departure_radius;
                                      if (!armed) return true;
                                  }
                                  const auto [e, d] = nearest(s);
                                  if (d <= capture_radius) {
                                      dwell = (e == current) ? dwell + 1 : 1;
                                      current = e;
                                  } else {
                                      dwell = 0;
                                      current = nullptr;
                                  }
                                  return dwell < capture_dwell_checks;
                              });

    out.final_distance = nearest(tr.states.back()).second;
    if (tr.status == TrajectoryStatus::CapturedEquilibrium) out.terminal = *current;
    return out;
}

} // namespace lorenzctl
