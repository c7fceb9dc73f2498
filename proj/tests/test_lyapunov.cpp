#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <lorenzctl/equilibria.hpp>
#include <lorenzctl/lyapunov.hpp>

using namespace lorenzctl;

namespace {

// Parameters satisfying the lemma hypotheses: a, b > 0, b >= 2a when P < 1,
// N <= 1 + a.
SystemParams lemma_params(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.1, 5.0);
    std::uniform_real_distribution<double> wide(-5.0, 5.0);
    SystemParams p;
    p.a = u(rng);
    p.P = wide(rng);
    if (p.P < 1)
        p.b = 2 * p.a + u(rng);
    else
        p.b = 2 * p.a * std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    p.N = 1 + p.a - u(rng);
    p.c = wide(rng);
    p.M = wide(rng);
    return p;
}

State random_state(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    return {u(rng), u(rng), u(rng)};
}

// Central-difference gradient of V dotted with the field.
double numeric_v_dot(const SystemParams& p, const State& s, double h)
{
    const State f = vector_field(p, s);
    auto partial = [&](State e) {
        return (v_value(p, s + e) - v_value(p, s - e)) / (2 * h);
    };
    return partial({h, 0, 0}) * f.x + partial({0, h, 0}) * f.y + partial({0, 0, h}) * f.z;
}

} // namespace

TEST(Coefficients, Examples)
{
    const auto k = lyapunov_coefficients(from_preset(Preset::Lorenz, 1, 3, 2));
    EXPECT_DOUBLE_EQ(k.A, 3.0);
    EXPECT_DOUBLE_EQ(k.B, 0.5);
    EXPECT_DOUBLE_EQ(k.K, 3.0);

    const auto flat = lyapunov_coefficients({2, 4, 1, 0, 0, 0});
    EXPECT_EQ(flat.A, 0.0);
    EXPECT_EQ(flat.B, 0.0);

    const auto chen = from_preset(Preset::Chen, 35, 3, 28);
    EXPECT_DOUBLE_EQ(lyapunov_coefficients(chen).A, -201.0);
    EXPECT_FALSE(hypotheses_check(chen).lemma_ok);
}

TEST(Coefficients, DegenerateParams)
{
    EXPECT_THROW(lyapunov_coefficients({0, 1, 1, 0, 0, 0}), Error);
    try {
        v_value({1, 1, 1, 0, 0, 1.0}, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateParams);
    }
}

TEST(VValue, Examples)
{
    const auto p = from_preset(Preset::Lorenz, 1, 3, 2);
    EXPECT_DOUBLE_EQ(v_value(p, {0, 0, 0}), 4.5);
    EXPECT_DOUBLE_EQ(v_value(p, {1, 0, 0}), 6.0);
    const auto eqs = find_equilibria(p);
    EXPECT_NEAR(v_value(p, eqs.pair->plus.location), 0.0, 1e-28);
    EXPECT_NEAR(v_value(p, eqs.pair->minus.location), 0.0, 1e-28);
}

TEST(VDot, Examples)
{
    const auto p = from_preset(Preset::Lorenz, 1, 3, 2);
    EXPECT_DOUBLE_EQ(v_dot(p, {1, 0, 0}), -18.0);
    EXPECT_DOUBLE_EQ(v_dot_closed_form(p, {1, 0, 0}), -18.0);
    EXPECT_EQ(v_dot(p, {0, 0, 0}), 0.0);
    const double r = std::sqrt(3.0);
    EXPECT_NEAR(v_dot(p, {r, r, 1}), 0.0, 1e-12);
    // x = y and b z = x^2
    EXPECT_NEAR(v_dot(p, {2, 2, 4.0 / 3.0}), 0.0, 1e-12);
}

TEST(VDot, ChainRuleMatchesClosedForm)
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10000; ++i) {
        const auto p = lemma_params(rng);
        const auto s = random_state(rng);
        const double closed = v_dot_closed_form(p, s);
        ASSERT_NEAR(v_dot(p, s), closed, 1e-9 * std::abs(closed));
    }
}

TEST(VDot, NumericalGradientOracle)
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 10000; ++i) {
        const auto p = lemma_params(rng);
        const auto s = random_state(rng);
        const double closed = v_dot_closed_form(p, s);
        // V is quartic; relative step keeps the difference quotient accurate.
        const double numeric = numeric_v_dot(p, s, 1e-5);
        ASSERT_NEAR(numeric, closed, 1e-6 * (1 + std::abs(closed)));
    }
}

TEST(VDot, LiteralMiddleTermBreaksTheIdentity)
{
    // With (z - x^2/b)^2 the orbital derivative is not the printed expression.
    std::mt19937_64 rng(3);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto p = lemma_params(rng);
        const auto s = random_state(rng);
        const auto k = lyapunov_coefficients(p);
        const State f = vector_field(p, s);
        const double d = s.x - s.y;
        const double w = s.z - s.x * s.x / p.b;
        const double r = s.x * s.x - k.K;
        const double literal = (2 * k.A * d - 4 * s.x * w / p.b + 4 * k.B * s.x * r) * f.x - 2 * k.A * d * f.y +
                               2 * w * f.z;
        const double closed = v_dot_closed_form(p, s);
        if (std::abs(literal - closed) > 1e-9 * std::abs(closed)) ++mismatches;
    }
    EXPECT_GT(mismatches, 990);
}

TEST(Monotonicity, VDotNonPositiveUnderLemmaHypotheses)
{
    std::mt19937_64 rng(4);
    int tested = 0;
    while (tested < 10000) {
        const auto p = lemma_params(rng);
        ASSERT_TRUE(hypotheses_check(p).lemma_ok);
        const auto s = random_state(rng);
        ++tested;
        ASSERT_LE(v_dot(p, s), 1e-12 * (1 + std::abs(v_value(p, s))));
    }
}

TEST(ZeroSet, VanishesOnlyAtPair)
{
    std::mt19937_64 rng(5);
    int tested = 0;
    while (tested < 200) {
        auto p = lemma_params(rng);
        if (!(p.P < 1) || !(p.b > 2 * p.a)) continue;
        const auto eqs = find_equilibria(p);
        const auto k = lyapunov_coefficients(p);
        if (eqs.kind != EquilibriumKind::Triple || !(k.A > 0) || !(k.B > 0)) continue;
        ++tested;
        const auto& e = eqs.pair->plus.location;
        EXPECT_NEAR(v_value(p, e), 0.0, 1e-20 * (1 + std::pow(norm(e), 4)));
        for (int j = 0; j < 50; ++j) EXPECT_GT(v_value(p, random_state(rng)), 0.0);
    }
}

TEST(Hypotheses, Examples)
{
    const auto small = hypotheses_check(from_preset(Preset::Lorenz, 1, 3, 2));
    EXPECT_TRUE(small.lemma_ok);
    EXPECT_TRUE(small.conv_ok);
    EXPECT_TRUE(small.het_ok);

    EXPECT_FALSE(hypotheses_check(from_preset(Preset::Lorenz, 10, 8.0 / 3.0, 28)).lemma_ok);

    // Boundary b = 2a holds regardless of c.
    for (double c : {-3.0, 0.0, 0.5, 40.0}) {
        const auto h = hypotheses_check({1.5, 3.0, c, 0, 0.5, 0.2});
        EXPECT_TRUE(h.lemma_ok);
        EXPECT_TRUE(h.conv_ok);
    }
    // P > 1 with b < 2a satisfies the lemma but not convergence.
    const auto h = hypotheses_check({1, 1, 2, 0, 0, 3});
    EXPECT_TRUE(h.lemma_ok);
    EXPECT_FALSE(h.conv_ok);
    // P = 1 makes the lemma undefined.
    EXPECT_FALSE(hypotheses_check({1, 3, 2, 0, 0, 1}).lemma_ok);
}

TEST(Certificate, Examples)
{
    const auto small = certificate(from_preset(Preset::Lorenz, 1, 3, 2));
    EXPECT_TRUE(small.no_closed_orbits);
    EXPECT_TRUE(small.no_homoclinic);
    EXPECT_TRUE(small.converges_to_equilibria);
    EXPECT_TRUE(small.heteroclinic_pair);
    EXPECT_FALSE(small.chaos_possible);

    for (const auto& p : {from_preset(Preset::Lorenz, 10, 8.0 / 3.0, 28), from_preset(Preset::Chen, 35, 3, 28)}) {
        const auto r = certificate(p);
        EXPECT_FALSE(r.no_closed_orbits);
        EXPECT_FALSE(r.no_homoclinic);
        EXPECT_FALSE(r.converges_to_equilibria);
        EXPECT_FALSE(r.heteroclinic_pair);
        EXPECT_TRUE(r.chaos_possible);
    }
}

TEST(Certificate, FlagNestingProperty)
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 10000; ++i) {
        const SystemParams p{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        const auto r = certificate(p);
        if (r.flags.het_ok) ASSERT_TRUE(r.flags.conv_ok);
        if (r.flags.conv_ok) ASSERT_TRUE(r.flags.lemma_ok);
        ASSERT_EQ(r.no_closed_orbits, r.flags.lemma_ok);
        ASSERT_EQ(r.no_homoclinic, r.flags.lemma_ok);
        ASSERT_EQ(r.converges_to_equilibria, r.flags.conv_ok);
        ASSERT_EQ(r.heteroclinic_pair, r.flags.het_ok);
        ASSERT_EQ(r.chaos_possible, p.b < 2 * p.a);
    }
}

TEST(Corollaries, Examples)
{
    EXPECT_TRUE(corollary_check(Preset::Lorenz, 1, 3, 2));
    EXPECT_FALSE(corollary_check(Preset::Lorenz, 10, 8.0 / 3.0, 28));
    EXPECT_FALSE(corollary_check(Preset::Chen, 35, 3, 28));
    EXPECT_TRUE(corollary_check(Preset::Chen, 1, 3, 0.8)); // 2c - a > 0, (b-2a)(c-a) < 0
    EXPECT_TRUE(corollary_check(Preset::TSystem, 2.1, 0.6, 30));
    EXPECT_FALSE(corollary_check(Preset::TSystem, 1, 3, 2)); // b - 2a > 0
    try {
        corollary_check(Preset::Lu, 36, 3, 20);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedPreset);
    }
}

TEST(Corollaries, LorenzCorollaryImpliesCertificate)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 10);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng), c = u(rng);
        if (!corollary_check(Preset::Lorenz, a, b, c)) continue;
        const auto r = certificate(from_preset(Preset::Lorenz, a, b, c));
        EXPECT_TRUE(r.heteroclinic_pair);
    }
}
