#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cpilab/error.hpp"
#include "cpilab/grid.hpp"

using namespace cpilab;

TEST(FrequencyGrid, OddCountIsSymmetricBitwise)
{
    const FrequencyGrid g(101, 3.7e13);
    ASSERT_EQ(g.size(), 101u);
    EXPECT_EQ(g[50], 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_EQ(g[i], -g[g.mirror(i)]);
    }
    EXPECT_DOUBLE_EQ(g[100], 3.7e13);
    EXPECT_NO_THROW(require_symmetric(g.offsets()));
}

TEST(FrequencyGrid, RejectsEvenOrTinyCounts)
{
    EXPECT_THROW(FrequencyGrid(100, 1.0), ContractError);
    EXPECT_THROW(FrequencyGrid(1, 1.0), ContractError);
    EXPECT_THROW(FrequencyGrid(11, 0.0), ContractError);
}

TEST(FrequencyGrid, HalvingTheStepKeepsNodes)
{
    const FrequencyGrid coarse(257, 2.0e13);
    const FrequencyGrid fine(513, 2.0e13);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        EXPECT_EQ(coarse[i], fine[2 * i]);
    }
}

TEST(FrequencyGrid, SameAsComparesShape)
{
    EXPECT_TRUE(FrequencyGrid(11, 1.0).same_as(FrequencyGrid(11, 1.0)));
    EXPECT_FALSE(FrequencyGrid(11, 1.0).same_as(FrequencyGrid(13, 1.0)));
    EXPECT_FALSE(FrequencyGrid(11, 1.0).same_as(FrequencyGrid(11, 2.0)));
}

TEST(FrequencyGrid, TrapezoidIntegratesGaussian)
{
    const double s = 1.3e13;
    const FrequencyGrid g(2001, 10.0 * s);
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::exp(-0.5 * g[i] * g[i] / (s * s));
    EXPECT_NEAR(g.integrate(f) / (s * std::sqrt(2.0 * std::numbers::pi)), 1.0, 1e-12);
}

TEST(FrequencyGrid, RequireSymmetricRejectsShiftedOffsets)
{
    const std::vector<double> v{-1.0, 0.0, 1.5};
    EXPECT_THROW(require_symmetric(v), ContractError);
}
