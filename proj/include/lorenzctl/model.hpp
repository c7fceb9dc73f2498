#pragma once

// Controlled Lorenz-type family
//
//   x' = a(y - x)
//   y' = c x - x z - y + u,   u = M x + N y + P x z
//   z' = -b z + x y
//
// The Lorenz, Chen, Lu and T systems are members of the family for
// particular choices of the control coefficients (M, N, P).

#include <array>
#include <cmath>
#include <string_view>
#include <optional>

#include "error.hpp"

namespace lorenzctl {

struct SystemParams {
    double a = 0, b = 0, c = 0;
    double M = 0, N = 0, P = 0;

    bool finite() const
    {
        return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(M) &&
               std::isfinite(N) && std::isfinite(P);
    }

    /// M + N + c - 1; its sign decides the pitchfork.
    double bifurcation_gap() const { return M + N + c - 1.0; }

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

struct State {
    double x = 0, y = 0, z = 0;

    friend bool operator==(const State&, const State&) = default;

    State& operator+=(const State& o)
    {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    friend State operator+(State l, const State& r) { return l += r; }
    friend State operator-(const State& l, const State& r) { return {l.x - r.x, l.y - r.y, l.z - r.z}; }
    friend State operator*(double s, const State& v) { return {s * v.x, s * v.y, s * v.z}; }
};

inline double norm(const State& s) { return std::sqrt(s.x * s.x + s.y * s.y + s.z * s.z); }
inline double distance(const State& l, const State& r) { return norm(l - r); }
inline bool finite(const State& s) { return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.z); }

using Matrix3 = std::array<std::array<double, 3>, 3>;

enum class Preset { Lorenz, Chen, Lu, TSystem };

inline std::string_view to_string(Preset p)
{
    switch (p) {
    case Preset::Lorenz: return "lorenz";
    case Preset::Chen: return "chen";
    case Preset::Lu: return "lu";
    case Preset::TSystem: return "t";
    }
    return "unknown";
}

inline std::optional<Preset> parse_preset(std::string_view name)
{
    if (name == "lorenz") return Preset::Lorenz;
    if (name == "chen") return Preset::Chen;
    if (name == "lu") return Preset::Lu;
    if (name == "t" || name == "tsystem") return Preset::TSystem;
    return std::nullopt;
}

/// Control coefficients that turn the family into one of the named systems.
inline SystemParams from_preset(Preset preset, double a, double b, double c)
{
    switch (preset) {
    case Preset::Lorenz: return {a, b, c, 0.0, 0.0, 0.0};
    case Preset::Chen: return {a, b, c, -a, 1.0 + c, 0.0};
    case Preset::Lu: return {a, b, c, -c, 1.0 + c, 0.0};
    case Preset::TSystem: return {a, b, c, -a, 1.0, 1.0 - a};
    }
    return {a, b, c};
}

// Every monomial is odd or even in (x, y), so the field is exactly
// equivariant under (x, y, z) -> (-x, -y, z) in floating point as well.
inline State vector_field(const SystemParams& p, const State& s)
{
    return {
        p.a * (s.y - s.x),
        (p.c + p.M) * s.x + (p.N - 1.0) * s.y - (1.0 - p.P) * s.x * s.z,
        -p.b * s.z + s.x * s.y,
    };
}

inline Matrix3 jacobian(const SystemParams& p, const State& s)
{
    return {{
        {-p.a, p.a, 0.0},
        {p.c + p.M - (1.0 - p.P) * s.z, p.N - 1.0, -(1.0 - p.P) * s.x},
        {s.y, s.x, -p.b},
    }};
}

/// Reflection about the Oz axis.
inline State apply_symmetry(const State& s) { return {-s.x, -s.y, s.z}; }

} // namespace lorenzctl
