#include "cpilab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cpilab/error.hpp"
#include "cpilab/units.hpp"

namespace cpilab {

FrequencyGrid make_grid(const GridSpec& spec, double fwhm_omega)
{
    if (!(fwhm_omega > 0.0)) {
        throw ContractError("grid needs a positive spectral FWHM");
    }
    if (!(spec.halfwidth_factor >= 2.0)) {
        throw ContractError("grid half width below 2x FWHM aliases the spectrum");
    }
    return FrequencyGrid(spec.points, spec.halfwidth_factor * fwhm_omega);
}

double ChirpedPulsePair::omega_c() const { return omega_from_wavelength(lambda_c); }
double ChirpedPulsePair::bandwidth_chirped() const { return bandwidth_omega(lambda_c, dlambda_chirped); }
double ChirpedPulsePair::bandwidth_antichirped() const
{
    return bandwidth_omega(lambda_c, dlambda_antichirped);
}
double ChirpedPulsePair::stretched_chirped() const { return bandwidth_chirped() / beta; }
double ChirpedPulsePair::stretched_antichirped() const { return bandwidth_antichirped() / beta; }

void ChirpedPulsePair::validate() const
{
    if (!(lambda_c > 0.0)) throw ContractError("pulse pair: centre wavelength must be positive");
    if (!(dlambda_chirped > 0.0) || !(dlambda_antichirped > 0.0)) {
        throw ContractError("pulse pair: bandwidths must be positive");
    }
    if (!(beta > 0.0)) throw ContractError("pulse pair: chirp rate must be positive");
    if (!(tl_duration > 0.0)) throw ContractError("pulse pair: transform-limited duration must be positive");
    if (!std::isfinite(tau_rel)) throw ContractError("pulse pair: relative delay must be finite");
}

ChirpedPulsePair make_pulse_pair(double lambda_c, double dlambda_chirped, double dlambda_antichirped,
                                 double stretched_duration, double tau_rel, double tl_duration)
{
    if (!(stretched_duration > 0.0)) {
        throw ContractError("pulse pair: stretched duration must be positive");
    }
    ChirpedPulsePair p;
    p.lambda_c = lambda_c;
    p.dlambda_chirped = dlambda_chirped;
    p.dlambda_antichirped = dlambda_antichirped;
    p.beta = bandwidth_omega(lambda_c, dlambda_chirped) / stretched_duration;
    p.tau_rel = tau_rel;
    p.tl_duration = tl_duration;
    p.validate();
    return p;
}

SourceSpectrum gaussian_spectrum(double lambda_c, double dlambda_fwhm, const FrequencyGrid& grid, double omega0)
{
    if (!(dlambda_fwhm > 0.0) || !(lambda_c > 0.0)) {
        throw ContractError("gaussian spectrum needs positive centre wavelength and FWHM");
    }
    const double fwhm = bandwidth_omega(lambda_c, dlambda_fwhm);
    if (grid.half_width() < 2.0 * fwhm) {
        throw ContractError("grid half width below 2x FWHM aliases the spectrum");
    }
    const double shift = omega_from_wavelength(lambda_c) - omega0;
    const double a = 4.0 * std::numbers::ln2 / (fwhm * fwhm);

    SourceSpectrum s;
    s.omega0 = omega0;
    s.grid = grid;
    s.intensity.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid[i] - shift;
        s.intensity[i] = std::exp(-a * d * d);
    }
    const double peak = *std::max_element(s.intensity.begin(), s.intensity.end());
    if (!(peak > 0.0)) {
        throw ContractError("gaussian spectrum lies entirely outside the grid");
    }
    if (peak != 1.0) {
        for (double& v : s.intensity) v /= peak;
    }
    return s;
}

SourceSpectrum gaussian_spectrum(double lambda_c, double dlambda_fwhm, const GridSpec& spec)
{
    const FrequencyGrid grid = make_grid(spec, bandwidth_omega(lambda_c, dlambda_fwhm));
    return gaussian_spectrum(lambda_c, dlambda_fwhm, grid, omega_from_wavelength(lambda_c));
}

double operating_frequency(const ChirpedPulsePair& pair)
{
    pair.validate();
    const double half_sum = 0.5 * (pair.bandwidth_chirped() + pair.bandwidth_antichirped());
    if (std::abs(pair.beta * pair.tau_rel) >= half_sum) {
        throw ContractError("relative delay too large: chirped and anti-chirped pulses no longer overlap");
    }
    return pair.omega_c() + 0.5 * pair.beta * pair.tau_rel;
}

double tau_rel_for_operating_frequency(const ChirpedPulsePair& pair, double omega0)
{
    ChirpedPulsePair p = pair;
    p.tau_rel = 2.0 * (omega0 - pair.omega_c()) / pair.beta;
    operating_frequency(p); // overlap check
    return p.tau_rel;
}

std::pair<SourceSpectrum, SourceSpectrum> pulse_spectra(const ChirpedPulsePair& pair, const GridSpec& spec,
                                                        double omega0, bool use_mean_bandwidth)
{
    pair.validate();
    double dl_c = pair.dlambda_chirped;
    double dl_a = pair.dlambda_antichirped;
    if (use_mean_bandwidth) {
        dl_c = dl_a = 0.5 * (dl_c + dl_a);
    }
    // Leave room for the centre offset when ω0 is detuned from ω_c.
    const double widest = bandwidth_omega(pair.lambda_c, std::max(dl_c, dl_a));
    const double detune = std::abs(pair.omega_c() - omega0);
    GridSpec s = spec;
    s.halfwidth_factor = spec.halfwidth_factor + detune / widest;
    const FrequencyGrid grid = make_grid(s, widest);
    return {gaussian_spectrum(pair.lambda_c, dl_c, grid, omega0),
            gaussian_spectrum(pair.lambda_c, dl_a, grid, omega0)};
}

namespace {

void require_nonnegative(const std::vector<double>& v, const FrequencyGrid& grid, const char* what)
{
    if (v.size() != grid.size()) {
        throw ContractError(std::string(what) + ": sample count does not match grid");
    }
    for (double x : v) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw ContractError(std::string(what) + ": samples must be finite and nonnegative");
        }
    }
}

} // namespace

EffectiveSpectrum effective_cpi(const SourceSpectrum& chirped, const SourceSpectrum& antichirped)
{
    if (!chirped.grid.same_as(antichirped.grid) || chirped.omega0 != antichirped.omega0) {
        throw ContractError("effective spectrum: chirped and anti-chirped spectra use different grids");
    }
    const std::size_t n = chirped.grid.size();
    EffectiveSpectrum e;
    e.mode = EffectiveSpectrum::Mode::cpi_product;
    e.omega0 = chirped.omega0;
    e.grid = chirped.grid;
    e.lambda.resize(n);
    const auto& ic = chirped.intensity;
    const auto& ia = antichirped.intensity;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t m = n - 1 - i;
        // Index m sees the same two products, so Λ is even bitwise.
        e.lambda[i] = 0.5 * (ic[i] * ia[m] + ic[m] * ia[i]);
    }
    return e;
}

EffectiveSpectrum effective_qoct(const FrequencyGrid& grid, double omega0, std::vector<double> lambda)
{
    require_nonnegative(lambda, grid, "entangled-photon spectrum");
    return {EffectiveSpectrum::Mode::qoct_given, omega0, grid, std::move(lambda)};
}

EffectiveSpectrum effective_cw_swept(const FrequencyGrid& grid, double omega0, std::vector<double> g)
{
    require_nonnegative(g, grid, "CW sweep distribution");
    return {EffectiveSpectrum::Mode::cw_swept, omega0, grid, std::move(g)};
}

} // namespace cpilab
