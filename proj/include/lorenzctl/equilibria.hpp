#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>

#include "model.hpp"

namespace lorenzctl {

using Complex = std::complex<double>;
using Eigenvalues = std::array<Complex, 3>;

enum class OriginClass { SaddleWs2Wu1, SaddleWs1Wu2, Attractor, NonHyperbolic, OutOfHypotheses };

inline std::string_view to_string(OriginClass c)
{
    switch (c) {
    case OriginClass::SaddleWs2Wu1: return "SaddleWs2Wu1";
    case OriginClass::SaddleWs1Wu2: return "SaddleWs1Wu2";
    case OriginClass::Attractor: return "Attractor";
    case OriginClass::NonHyperbolic: return "NonHyperbolic";
    case OriginClass::OutOfHypotheses: return "OutOfHypotheses";
    }
    return "Unknown";
}

struct Equilibrium {
    State location;
    Eigenvalues eigenvalues{};
    int stable_dim = 0;
    int unstable_dim = 0;
    int center_dim = 0;
};

enum class EquilibriumKind { OriginOnly, Triple, Continuum };

inline std::string_view to_string(EquilibriumKind k)
{
    switch (k) {
    case EquilibriumKind::OriginOnly: return "OriginOnly";
    case EquilibriumKind::Triple: return "Triple";
    case EquilibriumKind::Continuum: return "Continuum";
    }
    return "Unknown";
}

struct EquilibriumPair {
    Equilibrium plus;
    Equilibrium minus;
};

struct EquilibriumSet {
    EquilibriumKind kind = EquilibriumKind::OriginOnly;
    Equilibrium origin;
    std::optional<EquilibriumPair> pair;
};

enum class FreeParameter { M, N, c };

inline constexpr double default_sign_tol = 1e-12;
inline constexpr double default_residual_tol = 1e-9;

namespace detail {

// Descending real part, ties by ascending imaginary part.
inline void sort_eigenvalues(std::span<Complex> values)
{
    std::sort(values.begin(), values.end(), [](const Complex& l, const Complex& r) {
        if (l.real() != r.real()) return l.real() > r.real();
        return l.imag() < r.imag();
    });
}

/// Roots of l^2 + B l + C using the cancellation-free form of the formula.
inline std::array<Complex, 2> solve_monic_quadratic(double B, double C)
{
    const double disc = B * B - 4.0 * C;
    if (disc >= 0.0) {
        const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
        if (q == 0.0) return {Complex{0.0}, Complex{0.0}};
        return {Complex{q}, Complex{C / q}};
    }
    const double re = -0.5 * B;
    const double im = 0.5 * std::sqrt(-disc);
    return {Complex{re, im}, Complex{re, -im}};
}

/// Monic cubic l^3 + c2 l^2 + c1 l + c0.
struct Cubic {
    double c2, c1, c0;

    template <class T>
    T operator()(T l) const
    {
        return ((l + c2) * l + c1) * l + c0;
    }
    template <class T>
    T derivative(T l) const
    {
        return (3.0 * l + 2.0 * c2) * l + c1;
    }
    double scale(double mag) const
    {
        return 1.0 + mag * mag * mag + std::abs(c2) * mag * mag + std::abs(c1) * mag + std::abs(c0);
    }
};

inline Complex newton_polish(const Cubic& poly, Complex root)
{
    for (int it = 0; it < 4; ++it) {
        const Complex value = poly(root);
        const Complex slope = poly.derivative(root);
        if (value == 0.0 || slope == 0.0) break;
        const Complex next = root - value / slope;
        if (std::abs(poly(next)) >= std::abs(value)) break;
        root = next;
    }
    return root;
}

inline Eigenvalues solve_cubic(const Cubic& poly)
{
    const double shift = poly.c2 / 3.0;
    // Depressed form t^3 + p t + q with l = t - c2/3.
    const double p = poly.c1 - poly.c2 * shift;
    const double q = 2.0 * shift * shift * shift - shift * poly.c1 + poly.c0;
    const double half_q = 0.5 * q;
    const double third_p = p / 3.0;
    const double delta = half_q * half_q + third_p * third_p * third_p;

    Eigenvalues roots;
    if (delta <= 0.0 && p < 0.0) {
        const double m = 2.0 * std::sqrt(-third_p);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            roots[k] = Complex{m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift};
    } else {
        double t = 0.0;
        if (p != 0.0 || q != 0.0) {
            const double u = std::cbrt(-half_q - std::copysign(std::sqrt(std::max(delta, 0.0)), half_q));
            t = (u == 0.0) ? 0.0 : u - third_p / u;
        }
        double real_root = t - shift;
        for (int it = 0; it < 4; ++it) {
            const double value = poly(real_root);
            const double slope = poly.derivative(real_root);
            if (value == 0.0 || slope == 0.0) break;
            const double next = real_root - value / slope;
            if (std::abs(poly(next)) >= std::abs(value)) break;
            real_root = next;
        }
        // Synthetic division by (l - real_root).
        const double B = poly.c2 + real_root;
        const double C = poly.c1 + real_root * B;
        const auto rest = solve_monic_quadratic(B, C);
        roots = {Complex{real_root}, rest[0], rest[1]};
    }
    for (auto& r : roots) {
        r = newton_polish(poly, r);
        // A polished complex root may drift off the real axis by round-off.
        if (std::abs(r.imag()) <= 1e-14 * (1.0 + std::abs(r.real())) &&
            std::abs(poly(Complex{r.real()})) <= std::abs(poly(r)))
            r = Complex{r.real()};
    }
    return roots;
}

inline double trace(const Matrix3& m) { return m[0][0] + m[1][1] + m[2][2]; }

inline double determinant(const Matrix3& m)
{
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline double principal_minor_sum(const Matrix3& m)
{
    return (m[0][0] * m[1][1] - m[0][1] * m[1][0]) + (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
           (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
}

inline Cubic characteristic_polynomial(const Matrix3& m)
{
    return {-trace(m), principal_minor_sum(m), -determinant(m)};
}

inline Equilibrium make_equilibrium(const State& where, const Eigenvalues& values)
{
    Equilibrium e{where, values};
    double mag = 0.0;
    for (const auto& v : values) mag = std::max(mag, std::abs(v));
    const double band = 1e-10 * (1.0 + mag);
    for (const auto& v : values) {
        if (v.real() > band)
            ++e.unstable_dim;
        else if (v.real() < -band)
            ++e.stable_dim;
        else
            ++e.center_dim;
    }
    return e;
}

} // namespace detail

/// Eigenvalues of the Jacobian at the origin: the two roots of
/// l^2 + (a+1-N) l - a(M+N+c-1), largest real part first, followed by -b.
inline Eigenvalues origin_eigenvalues(const SystemParams& p)
{
    auto quad = detail::solve_monic_quadratic(p.a + 1.0 - p.N, -p.a * p.bifurcation_gap());
    detail::sort_eigenvalues(quad);
    return {quad[0], quad[1], Complex{-p.b}};
}

/// Eigenvalues of the Jacobian at an arbitrary state, sorted by descending
/// real part. Closed-form cubic roots, Newton-polished on the characteristic
/// polynomial.
inline Eigenvalues eigenvalues_at(const SystemParams& p, const State& s)
{
    auto roots = detail::solve_cubic(detail::characteristic_polynomial(jacobian(p, s)));
    detail::sort_eigenvalues(roots);
    return roots;
}

/// Origin classification with a relative band of width `tol` around every
/// sign test.
inline OriginClass classify_origin(const SystemParams& p, double tol = default_sign_tol)
{
    if (!(p.b > 0.0)) return OriginClass::OutOfHypotheses;
    const double gap = p.a * p.bifurcation_gap();
    const double trace_term = p.N - p.a - 1.0;
    const double scale = 1.0 + std::abs(p.a) * (1.0 + std::abs(p.M) + std::abs(p.N) + std::abs(p.c)) *
                                   (1.0 + std::abs(trace_term));
    if (std::abs(gap * trace_term) <= tol * scale) return OriginClass::NonHyperbolic;
    if (gap > 0.0) return OriginClass::SaddleWs2Wu1;
    return trace_term > 0.0 ? OriginClass::SaddleWs1Wu2 : OriginClass::Attractor;
}

inline EquilibriumSet find_equilibria(const SystemParams& p, double residual_tol = default_residual_tol)
{
    if (p.b == 0.0) throw Error(ErrorCode::DegenerateB, "b = 0: equilibria form a non-isolated set");

    EquilibriumSet out;
    out.origin = detail::make_equilibrium({}, origin_eigenvalues(p));

    const double gap = p.bifurcation_gap();
    const double gap_band = default_sign_tol * (1.0 + std::abs(p.M) + std::abs(p.N) + std::abs(p.c));
    const double one_minus_p = 1.0 - p.P;
    if (std::abs(one_minus_p) <= default_sign_tol * (1.0 + std::abs(p.P))) {
        // (M+N+c-1) x = (1-P) x z reduces to (M+N+c-1) x = 0.
        out.kind = std::abs(gap) <= gap_band ? EquilibriumKind::Continuum : EquilibriumKind::OriginOnly;
        return out;
    }
    if (!(p.b * gap / one_minus_p > 0.0) || std::abs(gap) <= gap_band) return out;

    const double z_star = gap / one_minus_p;
    State plus{std::sqrt(p.b * z_star), 0.0, z_star};
    plus.y = plus.x;

    // The closed form is exact up to round-off; Newton only runs if a caller
    // asks for a residual below that.
    for (int it = 0; it < 3 && norm(vector_field(p, plus)) > residual_tol; ++it) {
        const auto J = jacobian(p, plus);
        const State f = vector_field(p, plus);
        const double det = detail::determinant(J);
        if (det == 0.0) break;
        auto solve_col = [&](int col) {
            Matrix3 m = J;
            m[0][col] = -f.x;
            m[1][col] = -f.y;
            m[2][col] = -f.z;
            return detail::determinant(m) / det;
        };
        plus += State{solve_col(0), solve_col(1), solve_col(2)};
    }

    out.kind = EquilibriumKind::Triple;
    const State minus = apply_symmetry(plus);
    out.pair = EquilibriumPair{detail::make_equilibrium(plus, eigenvalues_at(p, plus)),
                               detail::make_equilibrium(minus, eigenvalues_at(p, minus))};
    return out;
}

/// Critical value of `free` solving M + N + c - 1 = 0 with the other two held.
inline double pitchfork_locus(const SystemParams& p, FreeParameter free)
{
    switch (free) {
    case FreeParameter::M: return 1.0 - p.N - p.c;
    case FreeParameter::N: return 1.0 - p.M - p.c;
    case FreeParameter::c: return 1.0 - p.M - p.N;
    }
    return 0.0;
}

/// Critical c for a named system, where M and N themselves depend on c.
/// The gap M+N+c-1 is affine in c under every preset mapping.
inline double pitchfork_locus(Preset preset, double a, double b)
{
    const double at0 = from_preset(preset, a, b, 0.0).bifurcation_gap();
    const double at1 = from_preset(preset, a, b, 1.0).bifurcation_gap();
    const double slope = at1 - at0;
    if (slope == 0.0) throw Error(ErrorCode::DegenerateParams, "pitchfork gap does not depend on c");
    return -at0 / slope;
}

inline bool has_unstable_direction(const Equilibrium& e) { return e.unstable_dim > 0; }

} // namespace lorenzctl
