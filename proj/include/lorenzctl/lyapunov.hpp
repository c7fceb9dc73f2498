#pragma once

#include <cmath>

#include "model.hpp"

namespace lorenzctl {

// V(x,y,z) = A (x-y)^2 + (b z - x^2)^2 + B (x^2 - K)^2
//
//   A = b(b-2a)/(1-P),  B = (b-2a)/(2a),  K = b(M+N+c-1)/(1-P)
//
// The middle term is (b z - x^2)^2; with it the orbital derivative collapses to
//   dV/dt = -2 A (a+1-N)(x-y)^2 - 2 b (b z - x^2)^2.
struct LyapunovCoefficients {
    double A = 0;
    double B = 0;
    double K = 0;
};

struct HypothesisFlags {
    bool lemma_ok = false; ///< a>0, b>0, (b-2a)/(1-P) >= 0, N-1-a <= 0
    bool conv_ok = false;  ///< lemma_ok and b-2a >= 0, P < 1
    bool het_ok = false;   ///< conv_ok and c+M > 0, (M+N+c-1)/(1-P) > 0
};

struct CertificateReport {
    HypothesisFlags flags;
    bool no_closed_orbits = false;
    bool no_homoclinic = false;
    bool converges_to_equilibria = false;
    bool heteroclinic_pair = false;
    bool chaos_possible = false; ///< b < 2a, necessary for chaos
};

inline LyapunovCoefficients lyapunov_coefficients(const SystemParams& p)
{
    if (p.a == 0.0) throw Error(ErrorCode::DegenerateParams, "a = 0");
    if (p.P == 1.0) throw Error(ErrorCode::DegenerateParams, "P = 1");
    const double one_minus_p = 1.0 - p.P;
    return {
        p.b * (p.b - 2.0 * p.a) / one_minus_p,
        (p.b - 2.0 * p.a) / (2.0 * p.a),
        p.b * p.bifurcation_gap() / one_minus_p,
    };
}

inline double v_value(const SystemParams& p, const State& s)
{
    const auto k = lyapunov_coefficients(p);
    const double d = s.x - s.y;
    const double w = p.b * s.z - s.x * s.x;
    const double r = s.x * s.x - k.K;
    return k.A * d * d + w * w + k.B * r * r;
}

inline State v_gradient(const SystemParams& p, const State& s)
{
    const auto k = lyapunov_coefficients(p);
    const double d = s.x - s.y;
    const double w = p.b * s.z - s.x * s.x;
    const double r = s.x * s.x - k.K;
    return {2.0 * k.A * d - 4.0 * s.x * w + 4.0 * k.B * s.x * r, -2.0 * k.A * d, 2.0 * p.b * w};
}

/// Orbital derivative grad V . f, by the chain rule.
inline double v_dot(const SystemParams& p, const State& s)
{
    const State g = v_gradient(p, s);
    const State f = vector_field(p, s);
    return g.x * f.x + g.y * f.y + g.z * f.z;
}

/// The collapsed expression for dV/dt; identical to v_dot as a polynomial.
inline double v_dot_closed_form(const SystemParams& p, const State& s)
{
    const auto k = lyapunov_coefficients(p);
    const double d = s.x - s.y;
    const double w = p.b * s.z - s.x * s.x;
    return -2.0 * k.A * (p.a + 1.0 - p.N) * d * d - 2.0 * p.b * w * w;
}

namespace detail {

// Non-strict tests pass inside the band, strict tests need clearance past it.
inline bool at_least_zero(double v, double scale, double tol) { return v >= -tol * scale; }
inline bool above_zero(double v, double scale, double tol) { return v > tol * scale; }

} // namespace detail

inline HypothesisFlags hypotheses_check(const SystemParams& p, double tol = 1e-12)
{
    using detail::above_zero;
    using detail::at_least_zero;

    HypothesisFlags h;
    const double one_minus_p = 1.0 - p.P;
    const double p_scale = 1.0 + std::abs(p.P);
    const double width = p.b - 2.0 * p.a;
    const double width_scale = 1.0 + std::abs(p.b) + 2.0 * std::abs(p.a);

    const bool p_regular = std::abs(one_minus_p) > tol * p_scale;
    // Sign of (b-2a)/(1-P) without dividing by a near-zero denominator.
    const bool ratio_ok = p_regular && at_least_zero(one_minus_p > 0 ? width : -width, width_scale, tol);

    h.lemma_ok = above_zero(p.a, 1.0 + std::abs(p.a), tol) && above_zero(p.b, 1.0 + std::abs(p.b), tol) &&
                 ratio_ok && at_least_zero(p.a + 1.0 - p.N, 1.0 + std::abs(p.a) + std::abs(p.N), tol);
    h.conv_ok = h.lemma_ok && at_least_zero(width, width_scale, tol) && above_zero(one_minus_p, p_scale, tol);
    const double gap_scale = 1.0 + std::abs(p.M) + std::abs(p.N) + std::abs(p.c);
    h.het_ok = h.conv_ok && above_zero(p.c + p.M, 1.0 + std::abs(p.c) + std::abs(p.M), tol) &&
               above_zero(p.bifurcation_gap(), gap_scale, tol);
    return h;
}

/// A true field means the hypotheses license the conclusion; false only
/// means "not certified".
inline CertificateReport certificate(const SystemParams& p, double tol = 1e-12)
{
    CertificateReport r;
    r.flags = hypotheses_check(p, tol);
    r.no_closed_orbits = r.flags.lemma_ok;
    r.no_homoclinic = r.flags.lemma_ok;
    r.converges_to_equilibria = r.flags.conv_ok;
    r.heteroclinic_pair = r.flags.het_ok;
    r.chaos_possible = p.b - 2.0 * p.a < -tol * (1.0 + std::abs(p.b) + 2.0 * std::abs(p.a));
    return r;
}

/// Conditions of the Lorenz, Chen and T-system corollaries, evaluated as
/// printed. No corollary exists for the Lu system.
inline bool corollary_check(Preset preset, double a, double b, double c)
{
    switch (preset) {
    case Preset::Lorenz: return c > 1.0 && b >= 2.0 * a && 2.0 * a > 0.0;
    case Preset::Chen: return 2.0 * c - a > 0.0 && (b - 2.0 * a) * (c - a) <= 0.0;
    case Preset::TSystem: return c - a > 0.0 && b - 2.0 * a <= 0.0;
    case Preset::Lu: break;
    }
    throw Error(ErrorCode::UnsupportedPreset, "no corollary is stated for the Lu system");
}

} // namespace lorenzctl
