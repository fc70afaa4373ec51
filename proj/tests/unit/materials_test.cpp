#include <gtest/gtest.h>

#include <cmath>

#include "cpilab/error.hpp"
#include "cpilab/grid.hpp"
#include "cpilab/materials.hpp"
#include "cpilab/units.hpp"

using namespace cpilab;

namespace {

const MaterialRegistry& registry()
{
    static const MaterialRegistry r = MaterialRegistry::with_builtins();
    return r;
}

DispersiveMaterial coverglass()
{
    return DispersiveMaterial::sellmeier("coverglass",
                                         {{1.03961212, 0.00600069867},
                                          {0.231792344, 0.0200179144},
                                          {1.01046945, 103.560653},
                                          {0.023885233466, 0.0}},
                                         {0.3, 2.5});
}

// Independent Sellmeier evaluation, no derivatives.
double sellmeier_n(const std::vector<SellmeierTerm>& terms, double lambda_um)
{
    const double l2 = lambda_um * lambda_um;
    double n2 = 1.0;
    for (const auto& t : terms) n2 += t.b * l2 / (l2 - t.c_um2);
    return std::sqrt(n2);
}

} // namespace

TEST(Materials, FusedSilicaAtSodiumD)
{
    EXPECT_NEAR(refractive_index(registry().at("fused_silica"), 587.6e-9), 1.458462, 2e-6);
}

TEST(Materials, Bk7AtSodiumD)
{
    EXPECT_NEAR(refractive_index(registry().at("bk7"), 587.56e-9), 1.5168, 1e-4);
}

TEST(Materials, CalciteOrdinaryAtSodiumD)
{
    EXPECT_NEAR(refractive_index(registry().at("calcite_o"), 589.0e-9), 1.6584, 2e-4);
}

TEST(Materials, IndexMatchesDirectSellmeierSum)
{
    const auto& m = registry().at("bk7");
    for (double l : {0.4, 0.633, 0.7908, 1.064, 1.55}) {
        EXPECT_NEAR(refractive_index(m, l * 1e-6), sellmeier_n(m.terms(), l), 1e-14);
    }
}

TEST(Materials, GroupIndexAgreesWithFiniteDifference)
{
    const double h = 0.1e-9;
    for (const char* name : {"fused_silica", "bk7", "calcite_o"}) {
        const auto& m = registry().at(name);
        for (double l : {600e-9, 790.8e-9, 1300e-9}) {
            const double dn = (refractive_index(m, l + h) - refractive_index(m, l - h)) / (2.0 * h);
            const double ng_fd = refractive_index(m, l) - l * dn;
            EXPECT_NEAR(group_index(m, l), ng_fd, 1e-6) << name << " at " << l;
        }
    }
}

TEST(Materials, HigherDerivativesAgreeWithFiniteDifference)
{
    const auto& m = registry().at("calcite_o");
    const double l = 790e-9;
    const double h = 0.2e-9;
    const auto d0 = m.index_derivatives(l);
    const auto dp = m.index_derivatives(l + h);
    const auto dm = m.index_derivatives(l - h);
    EXPECT_NEAR(d0.d2n, (dp.dn - dm.dn) / (2 * h), 1e-5 * std::abs(d0.d2n));
    EXPECT_NEAR(d0.d3n, (dp.d2n - dm.d2n) / (2 * h), 1e-4 * std::abs(d0.d3n));
}

TEST(Materials, CoverglassGroupIndexAtOperatingWavelength)
{
    const auto g = coverglass();
    EXPECT_NEAR(group_index(g, 790.8e-9), 1.53482, 1e-5);
}

TEST(Materials, CalciteHasNormalDispersionNear790)
{
    const auto p = phase_expansion(registry().at("calcite_o"), omega_from_wavelength(790e-9));
    EXPECT_GT(p.beta2, 0.0);
    // k''(ω) by central differences of k(ω).
    const double w = p.omega0, dw = 1e12;
    const auto& m = registry().at("calcite_o");
    const double k2 = (wavenumber(m, w + dw) - 2 * wavenumber(m, w) + wavenumber(m, w - dw)) / (dw * dw);
    EXPECT_NEAR(p.beta2, k2, 1e-4 * k2);
    const double dw1 = 1e11;
    const double k1 = (wavenumber(m, w + dw1) - wavenumber(m, w - dw1)) / (2 * dw1);
    EXPECT_NEAR(p.alpha, k1, 1e-9 * k1);
    EXPECT_NEAR(p.alpha, group_index(m, 790e-9) / kSpeedOfLight, 1e-12 * p.alpha);
}

TEST(Materials, ThirdOrderDispersionAgreesWithFiniteDifference)
{
    const auto& m = registry().at("fused_silica");
    const double w = omega_from_wavelength(800e-9), dw = 2e12;
    const auto p = phase_expansion(m, w);
    const double k3 = (wavenumber(m, w + 2 * dw) - 2 * wavenumber(m, w + dw) + 2 * wavenumber(m, w - dw) -
                       wavenumber(m, w - 2 * dw)) /
                      (2 * dw * dw * dw);
    EXPECT_NEAR(p.beta3, k3, 1e-3 * std::abs(k3));
}

TEST(Materials, GroupIndexExceedsIndexUnderNormalDispersion)
{
    for (const char* name : {"calcite_o", "fused_silica"}) {
        const auto& m = registry().at(name);
        EXPECT_GT(group_index(m, 790e-9), refractive_index(m, 790e-9)) << name;
    }
}

TEST(Materials, OutsideValidityIsAnError)
{
    const auto& m = registry().at("bk7");
    EXPECT_THROW(refractive_index(m, 250e-9), ValidityError);
    EXPECT_THROW(group_index(m, 3.0e-6), ValidityError);
    try {
        refractive_index(m, 250e-9);
    } catch (const ValidityError& e) {
        EXPECT_NE(std::string(e.what()).find("0.3"), std::string::npos);
    }
}

TEST(Materials, VacuumIsNondispersive)
{
    const auto& v = registry().at("vacuum");
    EXPECT_EQ(refractive_index(v, 790e-9), 1.0);
    EXPECT_EQ(group_index(v, 790e-9), 1.0);
    EXPECT_EQ(phase_expansion(v, 2.4e15).beta2, 0.0);
}

TEST(Materials, InvalidModelsAreRejected)
{
    EXPECT_THROW(DispersiveMaterial::constant("bad", 0.9, {0.4, 1.0}), ContractError);
    // Pole at 0.5 µm inside the range.
    EXPECT_THROW(DispersiveMaterial::sellmeier("pole", {{1.0, 0.25}}, {0.4, 1.0}), ContractError);
}

TEST(Materials, RegistryLookup)
{
    auto r = MaterialRegistry::with_builtins();
    EXPECT_TRUE(r.contains("calcite_o"));
    EXPECT_THROW(r.at("unobtainium"), ConfigError);
    r.add(DispersiveMaterial::constant("index_oil", 1.515, {0.4, 1.0}));
    EXPECT_EQ(refractive_index(r.at("index_oil"), 700e-9), 1.515);
    const auto names = r.names();
    EXPECT_NE(std::find(names.begin(), names.end(), "index_oil"), names.end());
}

TEST(Materials, SpectralPhaseParts)
{
    const auto& m = registry().at("calcite_o");
    const double w0 = omega_from_wavelength(790e-9);
    const FrequencyGrid g(401, 5e13);
    const auto full = spectral_phase(m, 0.08, w0, g.offsets(), Parity::full);
    const auto even = spectral_phase(m, 0.08, w0, g.offsets(), Parity::even);
    const auto odd = spectral_phase(m, 0.08, w0, g.offsets(), Parity::odd);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::size_t j = g.mirror(i);
        EXPECT_EQ(even[i], even[j]);
        EXPECT_EQ(odd[i], -odd[j]);
        EXPECT_NEAR(even[i] + odd[i], full[i], 1e-9 * std::abs(full[i]));
        EXPECT_NEAR(full[i], wavenumber(m, w0 + g[i]) * 0.08, 1e-12 * std::abs(full[i]));
    }
    const std::vector<double> skewed{-1.0, 0.0, 2.0};
    EXPECT_THROW(spectral_phase(m, 0.08, w0, skewed, Parity::even), ContractError);
}
