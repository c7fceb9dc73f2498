#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string_view>

#include "equilibria.hpp"
#include "integrator.hpp"
#include "lyapunov.hpp"

namespace lorenzctl {

enum class Branch { PlusX, MinusX };

inline std::string_view to_string(Branch b) { return b == Branch::PlusX ? "PlusX" : "MinusX"; }

struct HeteroclinicResult {
    Branch branch = Branch::PlusX;
    double epsilon = 0;
    Trajectory trajectory;
    std::optional<Equilibrium> terminal;
    /// min x for PlusX, max x for MinusX, taken after the start point.
    double extremal_x = 0;
    bool success = false;
    bool certified = false; ///< hypotheses guarantee the connection exists
};

struct UnstableDirection {
    State direction; ///< unit length, x > 0, z = 0
    double eigenvalue = 0;
};

/// One-dimensional unstable eigendirection of the origin. It lies in the
/// z = 0 plane because the z equation decouples at the origin.
inline UnstableDirection unstable_direction_at_origin(const SystemParams& p)
{
    if (classify_origin(p) != OriginClass::SaddleWs2Wu1)
        throw Error(ErrorCode::NotASaddle, "origin does not have a one-dimensional unstable manifold");
    const double trace_term = p.a + 1.0 - p.N;
    const double lambda = 0.5 * (-trace_term + std::sqrt(trace_term * trace_term + 4.0 * p.a * p.bifurcation_gap()));
    if (std::abs(lambda + p.b) <= 1e-12 * (1.0 + std::abs(p.b)))
        throw Error(ErrorCode::EigenvalueCollision, "unstable eigenvalue coincides with -b");

    // First Jacobian row: (-a - lambda) v1 + a v2 = 0.
    State v{p.a, p.a + lambda, 0.0};
    if (v.x < 0.0) v = -1.0 * v;
    return {(1.0 / norm(v)) * v, lambda};
}

/// Default shooting offset, 1e-6 (1 + |E+|).
inline double default_shooting_epsilon(const SystemParams& p)
{
    const auto eqs = find_equilibria(p);
    const double size = eqs.pair ? norm(eqs.pair->plus.location) : 0.0;
    return 1e-6 * (1.0 + size);
}

inline HeteroclinicResult trace_heteroclinic(const SystemParams& p, Branch branch, double epsilon,
                                             const IntegratorSettings& settings,
                                             double capture_radius = default_capture_radius)
{
    if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    const auto dir = unstable_direction_at_origin(p);
    const auto eqs = find_equilibria(p);

    HeteroclinicResult r;
    r.branch = branch;
    r.epsilon = epsilon;
    r.certified = hypotheses_check(p).het_ok;

    State start = epsilon * dir.direction;
    if (branch == Branch::MinusX) start = apply_symmetry(start);

    // Leaving the origin's capture ball is the first thing the branch does.
    auto outcome = integrate_to_equilibrium(p, start, eqs, capture_radius, settings, 10.0 * (capture_radius + epsilon));
    r.trajectory = std::move(outcome.trajectory);
    r.terminal = std::move(outcome.terminal);

    const auto& states = r.trajectory.states;
    if (branch == Branch::PlusX) {
        r.extremal_x = std::numeric_limits<double>::infinity();
        for (const auto& s : states) r.extremal_x = std::min(r.extremal_x, s.x);
    } else {
        r.extremal_x = -std::numeric_limits<double>::infinity();
        for (const auto& s : states) r.extremal_x = std::max(r.extremal_x, s.x);
    }

    if (r.terminal && eqs.pair) {
        const auto& target = branch == Branch::PlusX ? eqs.pair->plus : eqs.pair->minus;
        r.success = r.terminal->location == target.location;
    }
    return r;
}

/// Largest distance between the MinusX states and the mirror images of the
/// PlusX states, step by step.
inline double branch_symmetry_deviation(const HeteroclinicResult& plus, const HeteroclinicResult& minus)
{
    const auto& sp = plus.trajectory.states;
    const auto& sm = minus.trajectory.states;
    if (sp.size() != sm.size()) throw Error(ErrorCode::LengthMismatch, "branches have different step counts");
    double worst = 0.0;
    for (std::size_t i = 0; i < sp.size(); ++i) worst = std::max(worst, distance(sm[i], apply_symmetry(sp[i])));
    return worst;
}

} // namespace lorenzctl
