#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "equilibria.hpp"
#include "integrator.hpp"
#include "lyapunov.hpp"

namespace lorenzctl {

struct LLEEstimate {
    double lambda1 = 0;
    std::vector<double> history; ///< running mean after each post-transient interval
    double transient_discarded = 0;
    double horizon = 0;
};

struct LLEOptions {
    double renorm_interval = 1.0;
    double horizon = 500.0;
    double transient = 50.0;
    std::optional<State> initial_tangent; ///< defaults to (1,1,1)/sqrt(3)
};

/// Benettin estimate of the largest Lyapunov exponent. A tangent vector is
/// carried along by the variational equation v' = J(s) v and renormalised
/// every `renorm_interval`; log growth is averaged once `transient` has
/// elapsed.
inline LLEEstimate largest_lyapunov_exponent(const SystemParams& p, const State& u0,
                                             const IntegratorSettings& settings, const LLEOptions& opts = {})
{
    if (!(opts.renorm_interval > 0.0) || !(opts.transient > 0.0) || !(opts.horizon > opts.transient))
        throw Error(ErrorCode::InvalidArgument, "need horizon > transient > 0 and renorm_interval > 0");

    auto augmented = [p](const ode::Vec<6>& y) {
        const State s{y[0], y[1], y[2]};
        const State f = vector_field(p, s);
        const auto J = jacobian(p, s);
        ode::Vec<6> out{f.x, f.y, f.z, 0.0, 0.0, 0.0};
        for (int i = 0; i < 3; ++i) out[3 + i] = J[i][0] * y[3] + J[i][1] * y[4] + J[i][2] * y[5];
        return out;
    };

    State tangent = opts.initial_tangent.value_or(State{1.0, 1.0, 1.0});
    const double t0 = norm(tangent);
    if (!(t0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "initial tangent must be non-zero");
    tangent = (1.0 / t0) * tangent;

    ode::Vec<6> y{u0.x, u0.y, u0.z, tangent.x, tangent.y, tangent.z};
    const long intervals = std::lround(opts.horizon / opts.renorm_interval);
    const long skipped = std::lround(opts.transient / opts.renorm_interval);

    LLEEstimate est;
    est.transient_discarded = static_cast<double>(skipped) * opts.renorm_interval;
    est.horizon = static_cast<double>(intervals) * opts.renorm_interval;

    double log_sum = 0.0;
    for (long k = 0; k < intervals; ++k) {
        const auto status = ode::drive<6>(augmented, y, opts.renorm_interval, settings,
                                          [&](double, const ode::Vec<6>& v) {
                                              y = v;
                                              return true;
                                          });
        if (status != TrajectoryStatus::CompletedTspan)
            throw Error(ErrorCode::DivergedTrajectory,
                        "base orbit ended as " + std::string(to_string(status)) + " during LLE estimation");
        const double growth = std::sqrt(y[3] * y[3] + y[4] * y[4] + y[5] * y[5]);
        if (!(growth > 0.0) || !std::isfinite(growth))
            throw Error(ErrorCode::DivergedTrajectory, "tangent vector degenerated");
        for (int i = 3; i < 6; ++i) y[i] /= growth;
        if (k < skipped) continue;
        log_sum += std::log(growth);
        est.history.push_back(log_sum / (static_cast<double>(k - skipped + 1) * opts.renorm_interval));
    }
    est.lambda1 = est.history.back();
    return est;
}

enum class RegimeLabel { ProvablyRegular, ChaosCandidate, Undetermined };

inline std::string_view to_string(RegimeLabel r)
{
    switch (r) {
    case RegimeLabel::ProvablyRegular: return "ProvablyRegular";
    case RegimeLabel::ChaosCandidate: return "ChaosCandidate";
    case RegimeLabel::Undetermined: return "Undetermined";
    }
    return "Unknown";
}

/// ProvablyRegular when global convergence is certified; ChaosCandidate when
/// b < 2a and all three equilibria are unstable; Undetermined otherwise.
inline RegimeLabel regime_classify(const SystemParams& p)
{
    const auto cert = certificate(p);
    if (cert.converges_to_equilibria) return RegimeLabel::ProvablyRegular;
    if (!cert.chaos_possible || p.b == 0.0) return RegimeLabel::Undetermined;

    const auto eqs = find_equilibria(p);
    if (eqs.kind != EquilibriumKind::Triple) return RegimeLabel::Undetermined;
    const auto origin = classify_origin(p);
    const bool origin_unstable = origin == OriginClass::SaddleWs2Wu1 || origin == OriginClass::SaddleWs1Wu2;
    if (origin_unstable && has_unstable_direction(eqs.pair->plus) && has_unstable_direction(eqs.pair->minus))
        return RegimeLabel::ChaosCandidate;
    return RegimeLabel::Undetermined;
}

struct AnticontrolSuggestion {
    SystemParams params;
    bool pitchfork_crossed = false;    ///< E+ and E- exist
    bool necessary_condition = false;  ///< b < 2a
    bool chaos_guaranteed = false;     ///< never set: both conditions are only necessary
    OriginClass origin_class = OriginClass::OutOfHypotheses;
    std::string note;
    std::optional<LLEEstimate> lle;    ///< filled by verify_anticontrol
};

/// Controller u = M x for a stable Lorenz system (0 < c < 1), with M chosen
/// so that M + N + c - 1 = margin.
inline AnticontrolSuggestion suggest_anticontrol(double a, double b, double c, double margin)
{
    if (!(c > 0.0 && c < 1.0)) throw Error(ErrorCode::NotStableRegime, "c must lie in (0, 1)");
    if (!(a > 0.0) || !(b > 0.0) || !(margin > 0.0))
        throw Error(ErrorCode::InvalidArgument, "need a > 0, b > 0, margin > 0");

    AnticontrolSuggestion s;
    s.params = {a, b, c, (1.0 - c) + margin, 0.0, 0.0};
    s.pitchfork_crossed = find_equilibria(s.params).kind == EquilibriumKind::Triple;
    s.necessary_condition = certificate(s.params).chaos_possible;
    s.origin_class = classify_origin(s.params);
    if (!s.necessary_condition)
        s.note = "b >= 2a: the Lyapunov certificate excludes chaos for this controller";
    else if (s.pitchfork_crossed)
        s.note = "pitchfork crossed, chaos not guaranteed";
    else
        s.note = "pitchfork not crossed";
    return s;
}

inline void verify_anticontrol(AnticontrolSuggestion& s, const State& u0, const IntegratorSettings& settings,
                               const LLEOptions& opts = {})
{
    s.lle = largest_lyapunov_exponent(s.params, u0, settings, opts);
}

} // namespace lorenzctl
