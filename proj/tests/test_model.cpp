#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <lorenzctl/model.hpp>

using namespace lorenzctl;

namespace {

SystemParams random_params(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    return {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
}

State random_state(std::mt19937_64& rng, double half_width)
{
    std::uniform_real_distribution<double> u(-half_width, half_width);
    return {u(rng), u(rng), u(rng)};
}

} // namespace

TEST(Presets, ControlCoefficients)
{
    const auto lorenz = from_preset(Preset::Lorenz, 10, 8.0 / 3.0, 28);
    EXPECT_EQ(lorenz.M, 0.0);
    EXPECT_EQ(lorenz.N, 0.0);
    EXPECT_EQ(lorenz.P, 0.0);

    const auto chen = from_preset(Preset::Chen, 35, 3, 28);
    EXPECT_EQ(chen.M, -35.0);
    EXPECT_EQ(chen.N, 29.0);
    EXPECT_EQ(chen.P, 0.0);

    const auto lu = from_preset(Preset::Lu, 36, 3, 20);
    EXPECT_EQ(lu.M, -20.0);
    EXPECT_EQ(lu.N, 21.0);
    EXPECT_EQ(lu.P, 0.0);

    const auto t = from_preset(Preset::TSystem, 2, 1, 3);
    EXPECT_EQ(t.M, -2.0);
    EXPECT_EQ(t.N, 1.0);
    EXPECT_EQ(t.P, -1.0);
}

TEST(Presets, NamedRightHandSides)
{
    // Each preset reproduces its own published right-hand side.
    const double a = 3.5, b = 1.25, c = 2.75;
    const State s{0.3, -1.7, 2.2};

    const auto lorenz = vector_field(from_preset(Preset::Lorenz, a, b, c), s);
    EXPECT_EQ(lorenz.x, a * (s.y - s.x));
    EXPECT_EQ(lorenz.y, c * s.x - s.x * s.z - s.y);
    EXPECT_EQ(lorenz.z, -b * s.z + s.x * s.y);

    const auto chen = vector_field(from_preset(Preset::Chen, a, b, c), s);
    EXPECT_NEAR(chen.y, (c - a) * s.x + c * s.y - s.x * s.z, 1e-13);

    const auto lu = vector_field(from_preset(Preset::Lu, a, b, c), s);
    EXPECT_NEAR(lu.y, c * s.y - s.x * s.z, 1e-13);

    const auto t = vector_field(from_preset(Preset::TSystem, a, b, c), s);
    EXPECT_NEAR(t.y, (c - a) * s.x - a * s.x * s.z, 1e-13);
}

TEST(VectorField, Examples)
{
    const auto p = from_preset(Preset::Lorenz, 1, 3, 2);
    EXPECT_EQ(vector_field(p, {0, 0, 0}), (State{0, 0, 0}));

    const double r = std::sqrt(3.0);
    const auto at_eq = vector_field(p, {r, r, 1});
    EXPECT_NEAR(norm(at_eq), 0.0, 1e-14);

    const auto q = from_preset(Preset::Lorenz, 10, 8.0 / 3.0, 28);
    const auto f = vector_field(q, {1, 1, 1});
    EXPECT_EQ(f.x, 0.0);
    EXPECT_EQ(f.y, 26.0);
    EXPECT_DOUBLE_EQ(f.z, -8.0 / 3.0 + 1.0);
}

TEST(VectorField, MiddleComponentMatchesPrintedControlForm)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const auto p = random_params(rng);
        const auto s = random_state(rng, 20);
        const double printed = p.c * s.x - s.x * s.z - s.y + p.M * s.x + p.N * s.y + p.P * s.x * s.z;
        EXPECT_NEAR(vector_field(p, s).y, printed, 1e-11 * (1 + std::abs(printed) + 400 * 10));
    }
}

TEST(VectorField, OzEquivarianceIsExact)
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10000; ++i) {
        const auto p = random_params(rng);
        const auto s = random_state(rng, 50);
        const auto f = vector_field(p, s);
        const auto g = vector_field(p, apply_symmetry(s));
        ASSERT_EQ(g.x, -f.x);
        ASSERT_EQ(g.y, -f.y);
        ASSERT_EQ(g.z, f.z);
    }
}

TEST(Jacobian, OriginOfSmallLorenz)
{
    const auto J = jacobian(from_preset(Preset::Lorenz, 1, 3, 2), {});
    const Matrix3 expected{{{-1, 1, 0}, {2, -1, 0}, {0, 0, -3}}};
    EXPECT_EQ(J, expected);
}

TEST(Jacobian, ChenEntryAtOrigin)
{
    const auto J = jacobian(from_preset(Preset::Chen, 35, 3, 28), {});
    EXPECT_EQ(J[1][0], 28.0 - 35.0);
}

TEST(Jacobian, MatchesCentralDifferences)
{
    std::mt19937_64 rng(13);
    const double h = 1e-6;
    for (int i = 0; i < 2000; ++i) {
        const auto p = random_params(rng);
        const auto s = random_state(rng, 50);
        const auto J = jacobian(p, s);
        for (int col = 0; col < 3; ++col) {
            State e{};
            (col == 0 ? e.x : col == 1 ? e.y : e.z) = h;
            const State diff = (1.0 / (2 * h)) * (vector_field(p, s + e) - vector_field(p, s - e));
            // Field is quadratic, so central differences are exact up to round-off.
            EXPECT_NEAR(J[0][col], diff.x, 1e-6 * (1 + std::abs(diff.x)));
            EXPECT_NEAR(J[1][col], diff.y, 1e-6 * (1 + std::abs(diff.y)));
            EXPECT_NEAR(J[2][col], diff.z, 1e-6 * (1 + std::abs(diff.z)));
        }
    }
}

TEST(Symmetry, Involution)
{
    EXPECT_EQ(apply_symmetry({1, 2, 3}), (State{-1, -2, 3}));
    EXPECT_EQ(apply_symmetry({0, 0, 5}), (State{0, 0, 5}));
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const auto s = random_state(rng, 100);
        EXPECT_EQ(apply_symmetry(apply_symmetry(s)), s);
    }
}

TEST(Presets, ParseNames)
{
    EXPECT_EQ(parse_preset("lorenz"), Preset::Lorenz);
    EXPECT_EQ(parse_preset("chen"), Preset::Chen);
    EXPECT_EQ(parse_preset("lu"), Preset::Lu);
    EXPECT_EQ(parse_preset("t"), Preset::TSystem);
    EXPECT_FALSE(parse_preset("rossler").has_value());
}
