#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpilab/engine.hpp"
#include "cpilab/materials.hpp"

namespace cpilab {

enum class Polarity { dip, peak };
enum class Classification { real, artifact, unknown };

const char* to_string(Polarity p);
const char* to_string(Classification c);

/// A dip or peak in a normalized scan. Visibility is signed, (I_C − I_S)/I_S:
/// negative for dips (destructive), positive for peaks (constructive).
struct Feature {
    double center_um = 0.0;
    double fwhm_um = 0.0;
    double visibility = 0.0;
    Polarity polarity = Polarity::dip;
    Classification classification = Classification::unknown;
};

/// Extrema whose excursion from the baseline (median) reaches min_prominence.
/// WLI scans are reduced to their analytic envelope first. Throws ContractError
/// if the baseline lies outside 1 ± 0.1.
std::vector<Feature> detect_features(const Interferogram& scan, double min_prominence = 0.02);

/// Shoulder level I_S: median of the samples further than 3·FWHM from every listed feature.
double shoulder_level(const Interferogram& scan, std::span<const Feature> features);

/// Signed visibility of `feature`; `others` are additionally kept out of the shoulder estimate.
double visibility(const Interferogram& scan, const Feature& feature, std::span<const Feature> others = {});

/// Signed visibility at the midpoint of the outermost two features, i.e. where a
/// two-surface artifact sits. Throws ContractError with fewer than two features.
double midpoint_visibility(const Interferogram& scan, double min_prominence = 0.02);

/// d = Δx / n_g(λ0), µm.
double thickness_from_dips(double delta_x_um, const DispersiveMaterial& material, double lambda0);

struct FlipPrediction {
    double flip_nm = 0.0;   ///< π²c/(ω0²·α·d): half a cycle of cos 2k(ω0)d
    double period_nm = 0.0; ///< one full cycle
};

/// omega0 in rad/s, alpha in s/m, d in m.
FlipPrediction predict_artifact_flip(double omega0, double alpha, double d);

struct SweepPoint {
    double lambda0_nm = 0.0;
    double visibility = 0.0;
};

/// Least-squares fit of V(λ0) = A·cos(2π(λ0 − λ_ref)/P + φ), λ_ref = mean λ0.
struct SweepResult {
    std::vector<SweepPoint> points;
    double amplitude = 0.0;
    double fitted_period_nm = 0.0;
    double fitted_phase_rad = 0.0;
    double period_ci_nm = 0.0; ///< 1σ from the covariance of the fit
    double lambda_ref_nm = 0.0;
    double rms_residual = 0.0;
};

SweepResult fit_visibility_oscillation(std::span<const SweepPoint> points);

struct ClassifiedFeatures {
    std::vector<Feature> features;
    bool sufficient = false;
    std::string status; ///< "ok" or a warning
};

/// Tracks features across scans taken at different operating wavelengths
/// (matched by nearest centre within one FWHM). A feature whose visibility
/// changes sign is an artifact, one that stays negative is real, anything else
/// unknown. Fewer than three distinct wavelengths leaves everything unknown.
ClassifiedFeatures classify_features(std::span<const std::pair<double, Interferogram>> scans,
                                     double min_prominence = 0.02);

/// FWHM of the dominant extremum of y(x) measured against `baseline`, by
/// linear interpolation of the half-excursion crossings.
double extremum_fwhm(std::span<const double> x, std::span<const double> y, double baseline = 0.0);

/// A straight line λ = intercept + slope·x traced through a spectrogram.
struct SpectralLine {
    double slope_nm_per_um = 0.0;
    double intercept_nm = 0.0;
    std::size_t support = 0; ///< ridge samples on the line
};

struct LineCrossing {
    double x_um = 0.0;
    double lambda_nm = 0.0;
    std::size_t first = 0; ///< indices into the line list
    std::size_t second = 0;
};

/// Finds straight ridges of slope ±nominal_slope (nm per µm) from per-row
/// local maxima above `threshold` × row maximum.
std::vector<SpectralLine> trace_spectrogram_lines(const Spectrogram& spec, double nominal_slope_nm_per_um,
                                                  double threshold = 0.1);

/// Intersections of every pair of lines with opposite slope sign.
std::vector<LineCrossing> line_crossings(std::span<const SpectralLine> lines);

} // namespace cpilab
