#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpilab/analysis.hpp"
#include "cpilab/engine.hpp"
#include "cpilab/materials.hpp"
#include "cpilab/sample.hpp"
#include "cpilab/spectra.hpp"

namespace cpilab {

enum class Mode { cpi, wli, qoct, cw_swept, spectrogram, sweep };

const char* to_string(Mode mode);
/// Throws ConfigError for unknown names.
Mode mode_from_string(const std::string& s);

/// Boundary units: nm, µm, mm, fs, ps.
struct SourceConfig {
    double lambda_c_nm = 790.0;
    double bandwidth_chirped_nm = 11.0;
    double bandwidth_antichirped_nm = 11.0;
    double stretched_ps = 54.0;
    std::optional<double> tau_rel_fs;
    std::optional<double> lambda0_nm; ///< takes precedence over tau_rel_fs
    double tl_fs = 85.0;
    bool mean_bandwidth = false;
    GridSpec grid;
};

struct GapConfig {
    double d_um = 0.0;
    std::string material;
};

struct BulkConfig {
    std::string material;
    double length_mm = 0.0;
    int passes = 1;
    BulkPhase phase = BulkPhase::dispersive;
};

struct SampleConfig {
    std::vector<Complex> reflectances;
    std::vector<GapConfig> gaps;
    std::optional<BulkConfig> bulk;
};

struct XGrid {
    double start_um = 0.0;
    double stop_um = 0.0;
    double step_um = 0.0;
};

struct FilterConfig {
    std::optional<double> center_nm; ///< SFG wavelength; defaults to λ0/2
    double fwhm_nm = 0.46;
};

struct SpectrogramConfig {
    double halfspan_nm = 0.6; ///< SFG wavelength window about λ0/2
    double step_nm = 0.002;
    double line_threshold = 0.1;
};

/// Spectrum of the entangled-photon (QOCT) or CW-sweep (cw_swept) kernel,
/// a Gaussian about λ0.
struct KernelConfig {
    std::optional<double> bandwidth_nm; ///< defaults to the chirped bandwidth
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::vector<Mode> modes;
    SourceConfig source;
    SampleConfig sample;
    std::vector<DispersiveMaterial> materials;
    XGrid x_grid;
    std::vector<double> sweep_lambda0_nm;
    FilterConfig filter;
    SpectrogramConfig spectrogram;
    KernelConfig kernel;
    double min_prominence = 0.02;
    bool classify = true; ///< classify scan features with a short operating-wavelength sweep

    bool has(Mode m) const;
};

/// Parses a JSON scenario. Unknown keys, wrong types and missing required
/// sections throw ConfigError naming the offending path.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Canonical JSON form, parseable by parse_config.
std::string config_to_json(const ScenarioConfig& config);

/// 64-bit FNV-1a of the physics-relevant part of the canonical form (name and
/// mode list excluded), as 16 hex digits.
std::string scenario_hash(const ScenarioConfig& config);

/// Built-in material registry extended by the scenario's own materials.
MaterialRegistry scenario_registry(const ScenarioConfig& config);
/// Pulse pair; lambda0_nm overrides the configured operating wavelength.
ChirpedPulsePair scenario_pulse_pair(const ScenarioConfig& config, std::optional<double> lambda0_nm = {});
LayerStack scenario_stack(const ScenarioConfig& config, const MaterialRegistry& registry);

struct ScanOutcome {
    Mode mode = Mode::cpi;
    Interferogram scan;
    ClassifiedFeatures features;
};

struct SweepOutcome {
    SweepResult fit;
    FlipPrediction predicted;
    double lambda_mean_nm = 0.0;
    ClassifiedFeatures features;
};

struct SpectrogramOutcome {
    Spectrogram spectrogram;
    Interferogram filtered;
    std::vector<Feature> features;
    std::vector<SpectralLine> lines;
    std::vector<LineCrossing> crossings;
};

/// One scan of mode cpi, wli, qoct or cw_swept at the configured (or given)
/// operating wavelength. Features of the interferometric kernels are classified
/// from three extra scans a quarter period apart unless config.classify is off.
ScanOutcome simulate_scan(const ScenarioConfig& config, Mode mode, std::optional<double> lambda0_nm = {});
/// CPI scans over sweep_lambda0_nm; visibility read at the midpoint of the outer dips.
SweepOutcome simulate_sweep(const ScenarioConfig& config);
SpectrogramOutcome simulate_spectrogram(const ScenarioConfig& config, std::optional<double> lambda0_nm = {});

/// Predicted artifact flip for the first gap of the stack at the given wavelength.
FlipPrediction scenario_flip(const ScenarioConfig& config, double lambda0_nm);

struct RunOptions {
    std::filesystem::path out_dir = ".";
    bool plot = false;
    std::optional<double> lambda0_nm;
};

struct RunReport {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> summary;
};

/// Runs the given modes and writes CSV/JSON (and SVG with plot) into out_dir.
RunReport run_scenario(const ScenarioConfig& config, const std::vector<Mode>& modes, const RunOptions& options);

std::string sweep_report_json(const ScenarioConfig& config, const SweepOutcome& outcome);
std::string spectrogram_report_json(const ScenarioConfig& config, const SpectrogramOutcome& outcome);
/// Long-format CSV: x_um,lambda_nm,intensity,background.
std::string format_spectrogram(const Spectrogram& spec, const std::string& scenario);

/// Embedded scenarios: fig2a, fig2b, fig3, fig4a, fig4b, fig4sweep.
std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
ScenarioConfig preset(const std::string& name);
std::string_view preset_json(const std::string& name);

} // namespace cpilab
