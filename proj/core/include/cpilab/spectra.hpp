#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cpilab/grid.hpp"

namespace cpilab {

/// Point count and half width (in multiples of the widest FWHM) of a frequency grid.
struct GridSpec {
    std::size_t points = 8193;
    double halfwidth_factor = 5.0;
};

/// Builds the symmetric grid for a spectrum whose widest FWHM is fwhm_omega.
FrequencyGrid make_grid(const GridSpec& spec, double fwhm_omega);

/// Intensity spectrum I(Ω) on offsets about omega0, peak-normalized.
struct SourceSpectrum {
    double omega0 = 0.0;
    FrequencyGrid grid;
    std::vector<double> intensity;
};

/// Oppositely chirped pulse pair. The chirped pulse sweeps ω_c + β·t, the
/// anti-chirped one ω_c − β·t; the anti-chirped pulse lags by tau_rel.
struct ChirpedPulsePair {
    double lambda_c = 0.0;            // m
    double dlambda_chirped = 0.0;     // m, FWHM
    double dlambda_antichirped = 0.0; // m, FWHM
    double beta = 0.0;                // rad/s², magnitude
    double tau_rel = 0.0;             // s
    double tl_duration = 0.0;         // s

    double omega_c() const;
    double bandwidth_chirped() const;     // rad/s FWHM
    double bandwidth_antichirped() const; // rad/s FWHM
    double stretched_chirped() const;     // s, intensity FWHM = Δω/β
    double stretched_antichirped() const;
    /// Throws ContractError unless beta, bandwidths and tl_duration are positive.
    void validate() const;
};

/// β = Δω_chirped / stretched duration.
ChirpedPulsePair make_pulse_pair(double lambda_c, double dlambda_chirped, double dlambda_antichirped,
                                 double stretched_duration, double tau_rel, double tl_duration);

/// I(Ω) = exp(−4 ln2 (Ω − δ)²/Δω²), Δω = 2πcΔλ/λc², δ = ω_c − omega0, on an existing grid.
SourceSpectrum gaussian_spectrum(double lambda_c, double dlambda_fwhm, const FrequencyGrid& grid,
                                 double omega0);
/// Same, centred on ω_c with a grid built from spec.
SourceSpectrum gaussian_spectrum(double lambda_c, double dlambda_fwhm, const GridSpec& spec);

/// ω0 = 2πc/λc + β·τ_rel/2.
double operating_frequency(const ChirpedPulsePair& pair);
/// Relative delay that puts the operating frequency at omega0.
double tau_rel_for_operating_frequency(const ChirpedPulsePair& pair, double omega0);

/// The two pulse spectra on a shared grid about omega0. With use_mean_bandwidth
/// both carry the mean of the two bandwidths.
std::pair<SourceSpectrum, SourceSpectrum> pulse_spectra(const ChirpedPulsePair& pair, const GridSpec& spec,
                                                        double omega0, bool use_mean_bandwidth);

/// Kernel Λ(Ω) multiplying the interference integrals.
struct EffectiveSpectrum {
    enum class Mode { cpi_product, qoct_given, cw_swept };

    Mode mode = Mode::cpi_product;
    double omega0 = 0.0;
    FrequencyGrid grid;
    std::vector<double> lambda;
};

/// Λ(Ω) = [I_c(Ω)·I_a(−Ω) + I_c(−Ω)·I_a(Ω)] / 2.
EffectiveSpectrum effective_cpi(const SourceSpectrum& chirped, const SourceSpectrum& antichirped);
/// Entangled-photon spectrum, passed through unchanged.
EffectiveSpectrum effective_qoct(const FrequencyGrid& grid, double omega0, std::vector<double> lambda);
/// Anticorrelated CW sweep with distribution G(Ω)δ(Ω + Ω'); Λ = G.
EffectiveSpectrum effective_cw_swept(const FrequencyGrid& grid, double omega0, std::vector<double> g);

} // namespace cpilab
