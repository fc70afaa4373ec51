#pragma once

#include <span>
#include <string>
#include <vector>

#include "cpilab/sample.hpp"
#include "cpilab/spectra.hpp"

namespace cpilab {

enum class ScanKind { cpi, wli, qoct };

const char* to_string(ScanKind kind);
/// Throws FormatError for anything but "CPI", "WLI", "QOCT".
ScanKind scan_kind_from_string(const std::string& s);

/// Normalized detector signal against path delay x = c·Δτ/2 (reference mirror
/// displacement), so a reflector at optical depth n_g·d shows up at x = n_g·d.
struct Interferogram {
    ScanKind kind = ScanKind::cpi;
    std::vector<double> x_um;
    std::vector<double> signal;
    double omega0 = 0.0;  // rad/s, 0 when unknown
    std::string scenario; // scenario hash, may be empty
};

/// Uniform delay axis start, start+step, ... up to and including stop (within 1e-9 step).
std::vector<double> delay_axis(double start_um, double stop_um, double step_um);

/// CPI signal
///   S(Δτ) ∝ ∫Λ|H|² dΩ − Re ∫Λ(Ω) H(Ω) H*(−Ω) e^{−2iΩΔτ} dΩ,
/// trapezoid quadrature, divided by the Δτ-independent term.
Interferogram cpi_interferogram(const EffectiveSpectrum& lambda, const TransferFunction& h,
                                std::span<const double> x_um);

/// Same kernel for an entangled-photon spectrum; tagged QOCT.
Interferogram qoct_interferogram(const EffectiveSpectrum& lambda, const TransferFunction& h,
                                 std::span<const double> x_um);

/// White-light comparator S ∝ ∫I(Ω)|e^{i2(ω0+Ω)x/c} + H(Ω)|² dΩ, divided by ∫I(1+|H|²).
/// The x step must be at most λ0/8 to sample the carrier.
Interferogram wli_interferogram(const SourceSpectrum& source, const TransferFunction& h,
                                std::span<const double> x_um);

/// baseline + |analytic signal of (s − baseline)|, baseline = median of s.
/// Used for WLI envelope widths.
std::vector<double> analytic_envelope(std::span<const double> signal);

/// SFG spectrum against delay. Intensity is spectral power per unit angular
/// frequency (scaled so the overall maximum is 1), row-major [x][lambda].
struct Spectrogram {
    std::vector<double> x_um;
    std::vector<double> lambda_nm; // SFG wavelength, increasing
    std::vector<double> intensity;
    /// |P|² + |Q|² of the two cross-correlation processes (same scale), or empty.
    std::vector<double> background;
    double omega0 = 0.0; // operating frequency of the pair

    double at(std::size_t ix, std::size_t il) const { return intensity[ix * lambda_nm.size() + il]; }
};

struct SpectrogramOptions {
    double window_factor = 8.0;       ///< time window / longest stretched duration
    std::size_t min_samples = 1u << 16;
};

/// Time-domain synthesis. Each arm carries both pulses (chirped E_c, anti-chirped
/// E_a); the sample arm is filtered by the stack's H(ω) (bulk included), the
/// reference arm is delayed by 2x/c. The SFG field is E_s^c·E_r^a − E_s^a·E_r^c
/// (the sign is the input beam splitter's reflection phase); chirped×chirped
/// autocorrelation terms are left out.
///
/// Sampling rule: dt ≤ tl_duration/4 and the fundamental's instantaneous offset
/// β·T/2 at the window edge below half the Nyquist frequency; otherwise ContractError.
Spectrogram sfg_spectrogram(const ChirpedPulsePair& pair, const LayerStack& stack, std::span<const double> x_um,
                            std::span<const double> lambda_nm, const SpectrogramOptions& options = {});

/// Gaussian band-pass (FWHM in nm, centred on the SFG frequency center_omega)
/// integrated per delay. Each delay is divided by the background collected by
/// the same filter placed at 2·omega0, so an on-centre filter reproduces the
/// CPI normalization and an off-centre one reads near zero. Without a
/// background the median of the filtered signal is used.
Interferogram integrate_filtered(const Spectrogram& spec, double center_omega, double fwhm_nm = 0.46);

} // namespace cpilab
