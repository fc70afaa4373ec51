#include <gtest/gtest.h>

#include <cmath>

#include "cpilab/error.hpp"
#include "cpilab/sample.hpp"
#include "cpilab/units.hpp"

using namespace cpilab;

namespace {

const MaterialRegistry& registry()
{
    static const MaterialRegistry r = MaterialRegistry::with_builtins();
    return r;
}

LayerStack slab(double d, const std::string& material, Complex r1 = 0.2, Complex r2 = 0.2)
{
    LayerStack s;
    s.interfaces = {{r1}, {r2}};
    s.gaps = {{d, registry().at(material)}};
    return s;
}

} // namespace

TEST(Sample, SingleInterfaceIsFlat)
{
    LayerStack s;
    s.interfaces = {{Complex(0.3, -0.1)}};
    for (double w : {2.0e15, 2.4e15, 2.8e15}) {
        EXPECT_EQ(stack_response(s, w), Complex(0.3, -0.1));
    }
}

TEST(Sample, TwoInterfacesOverVacuum)
{
    const double d = 50e-6;
    const auto s = slab(d, "vacuum", 0.5, -0.25);
    const double w = 2.3e15;
    const Complex expected = 0.5 + -0.25 * std::exp(Complex(0.0, 2.0 * w * d / kSpeedOfLight));
    const Complex h = stack_response(s, w);
    EXPECT_NEAR(h.real(), expected.real(), 1e-12);
    EXPECT_NEAR(h.imag(), expected.imag(), 1e-12);
}

TEST(Sample, GroupDelaysUseGroupIndex)
{
    const double d = 186.4e-6;
    const auto s = slab(d, "bk7");
    const double w0 = omega_from_wavelength(790.8e-9);
    const auto tau = stack_group_delays(s, w0);
    ASSERT_EQ(tau.size(), 2u);
    EXPECT_EQ(tau[0], 0.0);
    EXPECT_NEAR(tau[1], 2.0 * group_index(registry().at("bk7"), 790.8e-9) * d / kSpeedOfLight, 1e-24);
}

TEST(Sample, ValidationCatchesBadStacks)
{
    auto s = slab(10e-6, "bk7");
    s.interfaces[0].r = 1.2;
    EXPECT_THROW(s.validate(), ContractError);
    auto t = slab(-1e-6, "bk7");
    EXPECT_THROW(t.validate(), ContractError);
    auto u = slab(10e-6, "bk7");
    u.gaps.push_back(u.gaps[0]);
    EXPECT_THROW(u.validate(), ContractError);
}

TEST(Sample, BulkFullPhaseEqualsSpectralPhase)
{
    const auto& calcite = registry().at("calcite_o");
    const double w0 = omega_from_wavelength(790.8e-9);
    const FrequencyGrid g(201, 6e13);
    LayerStack s;
    s.interfaces = {{Complex(0.4, 0.0)}};
    const auto plain = transfer_function(s, g, w0);
    const auto with = with_bulk_dispersion(plain, calcite, 80.58e-3, 1, BulkPhase::full);
    const auto phi = spectral_phase(calcite, 80.58e-3, w0, g.offsets(), Parity::full);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Complex expected = plain.h[i] * std::polar(1.0, phi[i]);
        EXPECT_NEAR(std::abs(with.h[i] - expected), 0.0, 1e-9);
    }
}

TEST(Sample, DispersiveBulkDropsConstantAndLinearTerms)
{
    const auto& calcite = registry().at("calcite_o");
    const double w0 = omega_from_wavelength(790.8e-9);
    BulkElement b{calcite, 80.58e-3, 1, BulkPhase::dispersive};
    EXPECT_NEAR(bulk_phase(b, w0, w0), 0.0, 1e-6);
    const double dw = 1e11;
    const double slope = (bulk_phase(b, w0 + dw, w0) - bulk_phase(b, w0 - dw, w0)) / (2 * dw);
    EXPECT_NEAR(slope, 0.0, 1e-16);
    const auto p = phase_expansion(calcite, w0);
    const double curvature = (bulk_phase(b, w0 + 1e13, w0) + bulk_phase(b, w0 - 1e13, w0)) / (1e26);
    EXPECT_NEAR(curvature, p.beta2 * 80.58e-3, 1e-3 * p.beta2 * 80.58e-3);
}

TEST(Sample, PassesMultiplyThePhase)
{
    const auto& calcite = registry().at("calcite_o");
    const double w0 = omega_from_wavelength(790e-9);
    BulkElement one{calcite, 10e-3, 1, BulkPhase::full};
    BulkElement two{calcite, 10e-3, 2, BulkPhase::full};
    EXPECT_NEAR(bulk_phase(two, w0 + 3e13, w0), 2.0 * bulk_phase(one, w0 + 3e13, w0), 1e-6);
}

TEST(Sample, TransferFunctionAppliesBulk)
{
    const double w0 = omega_from_wavelength(790.8e-9);
    const FrequencyGrid g(101, 5e13);
    auto s = slab(100e-6, "bk7");
    const auto bare = transfer_function(s, g, w0);
    s.bulk = BulkElement{registry().at("calcite_o"), 20e-3, 1, BulkPhase::dispersive};
    const auto with = transfer_function(s, g, w0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_NEAR(std::abs(with.h[i]), std::abs(bare.h[i]), 1e-12);
        const double phase = std::arg(with.h[i] / bare.h[i]);
        EXPECT_NEAR(std::remainder(phase - bulk_phase(*s.bulk, w0 + g[i], w0), 2 * kPi), 0.0, 1e-9);
    }
}
