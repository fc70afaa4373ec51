#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "cpilab/analysis.hpp"
#include "cpilab/engine.hpp"
#include "cpilab/error.hpp"
#include "cpilab/units.hpp"

using namespace cpilab;

namespace {

ChirpedPulsePair paper_pair()
{
    auto p = make_pulse_pair(790e-9, 11e-9, 10e-9, 54e-12, 0.0, 85e-15);
    p.tau_rel = tau_rel_for_operating_frequency(p, omega_from_wavelength(790.8e-9));
    return p;
}

LayerStack mirror()
{
    LayerStack s;
    s.interfaces = {{Complex(0.5, 0.0)}};
    return s;
}

std::vector<double> sfg_axis(double centre_nm, double halfspan, double step)
{
    std::vector<double> v;
    const long n = std::lround(halfspan / step);
    for (long i = -n; i <= n; ++i) v.push_back(centre_nm + static_cast<double>(i) * step);
    return v;
}

} // namespace

TEST(Spectrogram, MirrorDipMatchesCpiKernel)
{
    const auto pair = paper_pair();
    const double w0 = operating_frequency(pair);
    const auto x = delay_axis(-40.0, 40.0, 1.0);
    const auto lam = sfg_axis(395.4, 0.6, 0.002);
    const auto spec = sfg_spectrogram(pair, mirror(), x, lam);
    ASSERT_EQ(spec.intensity.size(), x.size() * lam.size());
    EXPECT_EQ(*std::max_element(spec.intensity.begin(), spec.intensity.end()), 1.0);
    EXPECT_GE(*std::min_element(spec.intensity.begin(), spec.intensity.end()), 0.0);

    const auto filtered = integrate_filtered(spec, 2.0 * w0, 0.46);
    const auto [ic, ia] = pulse_spectra(pair, GridSpec{}, w0, false);
    const auto lambda = effective_cpi(ic, ia);
    const auto cpi = cpi_interferogram(lambda, transfer_function(mirror(), lambda.grid, w0), delay_axis(-40.0, 40.0, 0.05));

    const double fwhm_cpi = extremum_fwhm(cpi.x_um, cpi.signal, 1.0);
    const double fwhm_sfg = extremum_fwhm(filtered.x_um, filtered.signal, 1.0);
    EXPECT_NEAR(fwhm_sfg, fwhm_cpi, 0.05 * fwhm_cpi);
    const auto lowest = std::min_element(filtered.signal.begin(), filtered.signal.end()) - filtered.signal.begin();
    EXPECT_NEAR(filtered.x_um[static_cast<std::size_t>(lowest)], 0.0, 1.0);
    EXPECT_NEAR(filtered.signal.front(), 1.0, 0.05);
}

TEST(Spectrogram, OffCentreFilterSeesLittle)
{
    const auto pair = paper_pair();
    const auto x = delay_axis(-10.0, 10.0, 5.0);
    const auto spec = sfg_spectrogram(pair, mirror(), x, sfg_axis(395.4, 1.2, 0.004));
    const auto off = integrate_filtered(spec, omega_from_wavelength(396.1e-9), 0.46);
    for (double v : off.signal) EXPECT_LT(v, 0.05);
}

TEST(Spectrogram, FilterOutsideGridIsRejected)
{
    const auto pair = paper_pair();
    const auto spec = sfg_spectrogram(pair, mirror(), delay_axis(0.0, 2.0, 1.0), sfg_axis(395.4, 0.6, 0.01));
    EXPECT_THROW(integrate_filtered(spec, omega_from_wavelength(397e-9), 0.46), ContractError);
    EXPECT_THROW(integrate_filtered(spec, 2.0 * spec.omega0, -1.0), ContractError);
}

TEST(Spectrogram, UndersampledChirpIsRejected)
{
    auto pair = paper_pair();
    pair.tl_duration = 40e-12;
    EXPECT_THROW(sfg_spectrogram(pair, mirror(), delay_axis(0.0, 1.0, 1.0), sfg_axis(395.4, 0.6, 0.01),
                                 SpectrogramOptions{8.0, 1024}),
                 ContractError);
}

TEST(Spectrogram, DelaysBeyondTheWindowAreRejected)
{
    const auto pair = paper_pair();
    const std::vector<double> x{0.0, 30000.0};
    EXPECT_THROW(sfg_spectrogram(pair, mirror(), x, sfg_axis(395.4, 0.6, 0.01)), ContractError);
}

TEST(Spectrogram, RejectsBadAxes)
{
    const auto pair = paper_pair();
    const std::vector<double> x{1.0, 0.0};
    EXPECT_THROW(sfg_spectrogram(pair, mirror(), x, sfg_axis(395.4, 0.6, 0.01)), ContractError);
    EXPECT_THROW(sfg_spectrogram(pair, mirror(), delay_axis(0.0, 1.0, 1.0), std::vector<double>{}), ContractError);
}

TEST(Spectrogram, MirrorShowsTwoCrossingRidges)
{
    const auto pair = paper_pair();
    const auto spec = sfg_spectrogram(pair, mirror(), delay_axis(-100.0, 100.0, 2.0), sfg_axis(395.4, 0.6, 0.002));
    const double ls = 395.4e-9;
    const double slope = ls * ls * pair.beta / (kPi * kSpeedOfLight * kSpeedOfLight) * kMicro / kNano;
    const auto lines = trace_spectrogram_lines(spec, slope);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_LT(lines[0].slope_nm_per_um * lines[1].slope_nm_per_um, 0.0);
    for (const auto& l : lines) EXPECT_NEAR(std::abs(l.slope_nm_per_um), slope, 0.02 * slope);
    const auto crossings = line_crossings(lines);
    ASSERT_EQ(crossings.size(), 1u);
    EXPECT_NEAR(crossings[0].x_um, 0.0, 2.0);
    EXPECT_NEAR(crossings[0].lambda_nm, 395.4, 0.004);
}
