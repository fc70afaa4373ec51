// cpi-lab: scenario runner and scan analyzer.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cpilab/analysis.hpp"
#include "cpilab/error.hpp"
#include "cpilab/materials.hpp"
#include "cpilab/scanio.hpp"
#include "cpilab/scenario.hpp"
#include "cpilab/units.hpp"

namespace {

constexpr int kConfigFailure = 2;
constexpr int kContractFailure = 3;

struct Source {
    std::string scenario;
    std::string config;
    std::string out = ".";
    bool plot = false;
    std::optional<double> lambda0_nm;
};

void add_run_flags(CLI::App* cmd, Source& src)
{
    auto* preset = cmd->add_option("--scenario", src.scenario, "built-in scenario name");
    auto* file = cmd->add_option("--config", src.config, "scenario JSON file");
    preset->excludes(file);
    cmd->add_option("--out", src.out, "output directory")->capture_default_str();
    cmd->add_flag("--plot", src.plot, "also write SVG plots");
    cmd->add_option("--lambda0-nm", src.lambda0_nm, "override the operating wavelength (nm)");
}

cpilab::ScenarioConfig load(const Source& src)
{
    if (src.scenario.empty() == src.config.empty()) {
        throw cpilab::ConfigError("config: give exactly one of --scenario or --config");
    }
    return src.scenario.empty() ? cpilab::load_config(src.config) : cpilab::preset(src.scenario);
}

int run(const Source& src, const std::vector<cpilab::Mode>& wanted, const char* command)
{
    cpilab::ScenarioConfig config = load(src);
    std::vector<cpilab::Mode> modes;
    for (auto m : wanted) {
        if (config.has(m)) modes.push_back(m);
    }
    if (modes.empty()) {
        throw cpilab::ConfigError("config: mode: scenario '" + config.name + "' has no mode for '" + command + "'");
    }
    if (src.lambda0_nm) {
        config.source.lambda0_nm = *src.lambda0_nm;
        config.source.tau_rel_fs.reset();
    }
    cpilab::RunOptions options;
    options.out_dir = src.out;
    options.plot = src.plot;
    const auto report = cpilab::run_scenario(config, modes, options);
    std::cout << "scenario " << config.name << " [" << cpilab::scenario_hash(config) << "]\n";
    for (const auto& line : report.summary) std::cout << line << "\n";
    for (const auto& f : report.files) std::cout << "wrote " << f.string() << "\n";
    return 0;
}

int analyze(const std::string& path, const std::string& out, double min_prominence)
{
    const cpilab::Interferogram scan = cpilab::read_scan(path);
    const auto features = cpilab::detect_features(scan, min_prominence);
    const std::string json = cpilab::feature_report_json(scan, features);
    if (out.empty()) {
        std::cout << json;
    } else {
        cpilab::write_file_atomic(out, json);
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int list_materials()
{
    const auto reg = cpilab::MaterialRegistry::with_builtins();
    for (const auto& name : reg.names()) {
        const auto& m = reg.at(name);
        std::cout << name << "  " << (m.model() == cpilab::DispersiveMaterial::Model::constant ? "constant" : "sellmeier")
                  << "  valid " << m.validity().min_um << "-" << m.validity().max_um << " um\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Chirped-pulse interferometry simulator"};
    app.require_subcommand(1);

    Source sim, swp, spg;
    auto* simulate = app.add_subcommand("simulate", "CPI/WLI/QOCT/CW scans with feature reports");
    add_run_flags(simulate, sim);
    auto* sweep = app.add_subcommand("sweep", "artifact visibility against operating wavelength");
    add_run_flags(sweep, swp);
    auto* spectrogram = app.add_subcommand("spectrogram", "SFG spectrum against path delay");
    add_run_flags(spectrogram, spg);

    std::string scan_path, report_path;
    double min_prominence = 0.02;
    auto* analyze_cmd = app.add_subcommand("analyze", "detect features in a scan CSV");
    analyze_cmd->add_option("scan", scan_path, "scan CSV")->required();
    analyze_cmd->add_option("--out", report_path, "write the JSON report here instead of stdout");
    analyze_cmd->add_option("--min-prominence", min_prominence, "feature threshold")->capture_default_str();

    auto* materials = app.add_subcommand("materials", "material registry");
    materials->require_subcommand(1);
    auto* list = materials->add_subcommand("list", "list built-in materials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return kConfigFailure;
    }

    using cpilab::Mode;
    try {
        if (*simulate) return run(sim, {Mode::cpi, Mode::wli, Mode::qoct, Mode::cw_swept}, "simulate");
        if (*sweep) return run(swp, {Mode::sweep}, "sweep");
        if (*spectrogram) return run(spg, {Mode::spectrogram}, "spectrogram");
        if (*analyze_cmd) return analyze(scan_path, report_path, min_prominence);
        if (*list) return list_materials();
    } catch (const cpilab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigFailure;
    } catch (const cpilab::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigFailure;
    } catch (const cpilab::ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kContractFailure;
    } catch (const cpilab::ValidityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kContractFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
