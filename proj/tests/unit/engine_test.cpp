#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cpilab/analysis.hpp"
#include "cpilab/engine.hpp"
#include "cpilab/error.hpp"
#include "cpilab/units.hpp"

using namespace cpilab;

namespace {

constexpr double kLambda0 = 790e-9;
constexpr double kBandwidth = 11e-9;

const MaterialRegistry& registry()
{
    static const MaterialRegistry r = MaterialRegistry::with_builtins();
    return r;
}

double sigma_omega()
{
    return bandwidth_omega(kLambda0, kBandwidth) / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

LayerStack mirror()
{
    LayerStack s;
    s.interfaces = {{Complex(0.5, 0.0)}};
    return s;
}

LayerStack slab(double d, const std::string& material)
{
    LayerStack s;
    s.interfaces = {{Complex(0.2, 0.0)}, {Complex(0.2, 0.0)}};
    s.gaps = {{d, registry().at(material)}};
    return s;
}

EffectiveSpectrum cpi_kernel(std::size_t points = 8193)
{
    const auto p = make_pulse_pair(kLambda0, kBandwidth, kBandwidth, 54e-12, 0.0, 85e-15);
    const auto [ic, ia] = pulse_spectra(p, GridSpec{points, 5.0}, p.omega_c(), false);
    return effective_cpi(ic, ia);
}

double dip_fwhm(const Interferogram& s)
{
    return extremum_fwhm(s.x_um, s.signal, 1.0);
}

} // namespace

TEST(Engine, DelayAxisIncludesStop)
{
    const auto x = delay_axis(-1.0, 1.0, 0.5);
    ASSERT_EQ(x.size(), 5u);
    EXPECT_EQ(x.front(), -1.0);
    EXPECT_EQ(x.back(), 1.0);
    EXPECT_THROW(delay_axis(0.0, 1.0, 0.0), ContractError);
    EXPECT_THROW(delay_axis(1.0, 0.0, 0.1), ContractError);
}

TEST(Engine, CpiDipMatchesGaussianClosedForm)
{
    const auto lambda = cpi_kernel();
    const auto h = transfer_function(mirror(), lambda.grid, lambda.omega0);
    const auto x = delay_axis(-40.0, 40.0, 0.02);
    const auto scan = cpi_interferogram(lambda, h, x);
    // Λ ∝ exp(−Ω²/σ²); the dip is 1 − exp(−8σ²x²/(2c²)) with x the mirror travel.
    const double s = sigma_omega() / std::sqrt(2.0);
    const double expected_um = kSpeedOfLight * std::sqrt(std::numbers::ln2 / 2.0) / s / kMicro;
    EXPECT_NEAR(dip_fwhm(scan), expected_um, 0.005 * expected_um);
    EXPECT_NEAR(*std::min_element(scan.signal.begin(), scan.signal.end()), 0.0, 1e-9);
}

TEST(Engine, WliEnvelopeMatchesGaussianClosedForm)
{
    const auto src = gaussian_spectrum(kLambda0, kBandwidth, GridSpec{8193, 5.0});
    const auto h = transfer_function(mirror(), src.grid, src.omega0);
    const auto scan = wli_interferogram(src, h, delay_axis(-60.0, 60.0, 0.05));
    const auto env = analytic_envelope(scan.signal);
    const double base = 1.0; // |H|² terms normalize the far field to 1
    const double expected_um = kSpeedOfLight * std::sqrt(2.0 * std::numbers::ln2) / sigma_omega() / kMicro;
    EXPECT_NEAR(extremum_fwhm(scan.x_um, env, base), expected_um, 0.005 * expected_um);
}

TEST(Engine, QoctUsesTheSameKernel)
{
    const auto src = gaussian_spectrum(kLambda0, kBandwidth, GridSpec{8193, 5.0});
    const auto q = effective_qoct(src.grid, src.omega0, src.intensity);
    const auto h = transfer_function(mirror(), src.grid, src.omega0);
    const auto x = delay_axis(-30.0, 30.0, 0.02);
    const auto scan = qoct_interferogram(q, h, x);
    EXPECT_EQ(scan.kind, ScanKind::qoct);
    const double expected_um = kSpeedOfLight * std::sqrt(std::numbers::ln2 / 2.0) / sigma_omega() / kMicro;
    EXPECT_NEAR(dip_fwhm(scan), expected_um, 0.005 * expected_um);

    EffectiveSpectrum wrong = q;
    wrong.mode = EffectiveSpectrum::Mode::cpi_product;
    EXPECT_THROW(qoct_interferogram(wrong, h, x), ContractError);
}

TEST(Engine, GridMismatchIsRejected)
{
    const auto lambda = cpi_kernel(4097);
    const FrequencyGrid other(4099, lambda.grid.half_width());
    const auto h = transfer_function(mirror(), other, lambda.omega0);
    const std::vector<double> x{0.0, 1.0};
    EXPECT_THROW(cpi_interferogram(lambda, h, x), ContractError);
}

TEST(Engine, WliRejectsCoarseDelaySteps)
{
    const auto src = gaussian_spectrum(kLambda0, kBandwidth, GridSpec{2049, 5.0});
    const auto h = transfer_function(mirror(), src.grid, src.omega0);
    EXPECT_THROW(wli_interferogram(src, h, delay_axis(0.0, 10.0, 0.2)), ContractError);
    EXPECT_NO_THROW(wli_interferogram(src, h, delay_axis(0.0, 10.0, 0.09)));
}

TEST(Engine, QuadratureDoublingIsStable)
{
    const auto x = delay_axis(-50.0, 350.0, 0.25);
    const auto stack = slab(186.4e-6, "bk7");
    const auto coarse = cpi_kernel(4097);
    const auto fine = cpi_kernel(8193);
    const auto a = cpi_interferogram(coarse, transfer_function(stack, coarse.grid, coarse.omega0), x);
    const auto b = cpi_interferogram(fine, transfer_function(stack, fine.grid, fine.omega0), x);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(a.signal[i] - b.signal[i]));
    EXPECT_LT(worst, 1e-6);
}

TEST(Engine, EvenPhaseCancelsInCpi)
{
    const auto lambda = cpi_kernel();
    const auto stack = slab(186.4e-6, "bk7");
    const auto h = transfer_function(stack, lambda.grid, lambda.omega0);
    auto h_even = h;
    const auto phi =
        spectral_phase(registry().at("calcite_o"), 80.58e-3, lambda.omega0, lambda.grid.offsets(), Parity::even);
    for (std::size_t i = 0; i < phi.size(); ++i) h_even.h[i] *= std::polar(1.0, phi[i]);
    const auto x = delay_axis(-50.0, 350.0, 0.1);
    const auto a = cpi_interferogram(lambda, h, x);
    const auto b = cpi_interferogram(lambda, h_even, x);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(a.signal[i] - b.signal[i]));
    EXPECT_LT(worst, 1e-10);
}

TEST(Engine, DipsSitAtGroupDelay)
{
    for (const char* material : {"vacuum", "bk7"}) {
        const double d = 120e-6;
        const auto lambda = cpi_kernel();
        const auto scan = cpi_interferogram(lambda, transfer_function(slab(d, material), lambda.grid, lambda.omega0),
                                            delay_axis(-50.0, 250.0, 0.05));
        const auto features = detect_features(scan);
        ASSERT_EQ(features.size(), 3u) << material;
        const double sep = features.back().center_um - features.front().center_um;
        const double d_um = thickness_from_dips(sep, registry().at(material), kLambda0);
        EXPECT_NEAR(d_um, 120.0, 0.002 * 120.0) << material;
    }
}

TEST(Engine, AnalyticEnvelopeOfModulatedGaussian)
{
    std::vector<double> s(4096);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double t = (static_cast<double>(i) - 2048.0) / 100.0;
        s[i] = 1.0 + 0.4 * std::exp(-t * t / 2.0) * std::cos(2.0 * std::numbers::pi * 0.2 * static_cast<double>(i));
    }
    const auto env = analytic_envelope(s);
    for (std::size_t i = 1500; i < 2600; i += 50) {
        const double t = (static_cast<double>(i) - 2048.0) / 100.0;
        EXPECT_NEAR(env[i], 1.0 + 0.4 * std::exp(-t * t / 2.0), 2e-3);
    }
}
