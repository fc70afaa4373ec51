#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cpilab/analysis.hpp"
#include "cpilab/error.hpp"

using namespace cpilab;

namespace {

std::vector<SweepPoint> cosine(double period, double amplitude, double phase, double lo, double hi, double step)
{
    std::vector<SweepPoint> pts;
    const double ref = 0.5 * (lo + hi);
    for (double l = lo; l <= hi + 1e-9; l += step) {
        pts.push_back({l, amplitude * std::cos(2.0 * std::numbers::pi * (l - ref) / period + phase)});
    }
    return pts;
}

} // namespace

TEST(Fit, NoiselessCosine)
{
    const auto pts = cosine(1.13, 0.8, 0.4, 790.3, 793.0, 0.1);
    const auto r = fit_visibility_oscillation(pts);
    EXPECT_NEAR(r.fitted_period_nm, 1.13, 1e-4);
    EXPECT_NEAR(std::abs(r.amplitude), 0.8, 1e-6);
    EXPECT_LT(r.rms_residual, 1e-8);
    EXPECT_EQ(r.points.size(), pts.size());
}

TEST(Fit, NoisyCosineWithinQuotedSpread)
{
    std::mt19937_64 rng(20240531);
    std::normal_distribution<double> noise(0.0, 0.05);
    int within = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
        auto pts = cosine(1.13, 1.0, 0.3 * t, 790.5, 793.3, 0.1);
        for (auto& p : pts) p.visibility *= 1.0 + noise(rng);
        const auto r = fit_visibility_oscillation(pts);
        if (std::abs(r.fitted_period_nm - 1.13) <= 0.02) ++within;
        EXPECT_GT(r.period_ci_nm, 0.0);
    }
    EXPECT_GE(within, trials * 95 / 100);
}

TEST(Fit, TooFewPoints)
{
    const auto pts = cosine(1.13, 1.0, 0.0, 790.0, 790.2, 0.1);
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_THROW(fit_visibility_oscillation(pts), ContractError);
}

TEST(Fit, DegenerateSpan)
{
    std::vector<SweepPoint> pts(5, SweepPoint{791.0, 0.5});
    EXPECT_THROW(fit_visibility_oscillation(pts), ContractError);
}

TEST(Fit, Deterministic)
{
    const auto pts = cosine(1.09, 0.9, -1.0, 790.3, 793.0, 0.1);
    const auto a = fit_visibility_oscillation(pts);
    const auto b = fit_visibility_oscillation(pts);
    EXPECT_EQ(a.fitted_period_nm, b.fitted_period_nm);
    EXPECT_EQ(a.fitted_phase_rad, b.fitted_phase_rad);
}
