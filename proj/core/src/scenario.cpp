#include "cpilab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "cpilab/error.hpp"
#include "cpilab/plot.hpp"
#include "cpilab/scanio.hpp"
#include "cpilab/units.hpp"

namespace cpilab {

using Json = nlohmann::ordered_json;

const char* to_string(Mode mode)
{
    switch (mode) {
    case Mode::cpi: return "cpi";
    case Mode::wli: return "wli";
    case Mode::qoct: return "qoct";
    case Mode::cw_swept: return "cw_swept";
    case Mode::spectrogram: return "spectrogram";
    case Mode::sweep: return "sweep";
    }
    return "cpi";
}

Mode mode_from_string(const std::string& s)
{
    for (Mode m : {Mode::cpi, Mode::wli, Mode::qoct, Mode::cw_swept, Mode::spectrogram, Mode::sweep}) {
        if (s == to_string(m)) return m;
    }
    throw ConfigError("config: mode: unknown mode '" + s + "'");
}

bool ScenarioConfig::has(Mode m) const
{
    return std::find(modes.begin(), modes.end(), m) != modes.end();
}

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what)
{
    throw ConfigError("config: " + path + ": " + what);
}

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

void require_object(const Json& j, const std::string& path, std::initializer_list<std::string_view> allowed)
{
    if (!j.is_object()) bad(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            bad(join(path, key), "unknown key");
        }
    }
}

double to_number(const Json& j, const std::string& path)
{
    if (!j.is_number()) bad(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) bad(path, "must be finite");
    return v;
}

double number(const Json& obj, const std::string& path, const char* key)
{
    if (!obj.contains(key)) bad(join(path, key), "missing required value");
    return to_number(obj[key], join(path, key));
}

std::optional<double> optional_number(const Json& obj, const std::string& path, const char* key)
{
    if (!obj.contains(key)) return std::nullopt;
    return to_number(obj[key], join(path, key));
}

double positive(const Json& obj, const std::string& path, const char* key)
{
    const double v = number(obj, path, key);
    if (!(v > 0.0)) bad(join(path, key), "must be positive");
    return v;
}

std::string text(const Json& obj, const std::string& path, const char* key)
{
    if (!obj.contains(key)) bad(join(path, key), "missing required value");
    if (!obj[key].is_string()) bad(join(path, key), "expected a string");
    return obj[key].get<std::string>();
}

bool flag(const Json& obj, const std::string& path, const char* key, bool fallback)
{
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) bad(join(path, key), "expected true or false");
    return obj[key].get<bool>();
}

const Json& array(const Json& obj, const std::string& path, const char* key)
{
    if (!obj.contains(key)) bad(join(path, key), "missing required value");
    if (!obj[key].is_array()) bad(join(path, key), "expected an array");
    return obj[key];
}

std::string item(const std::string& path, std::size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

SourceConfig parse_source(const Json& j)
{
    const std::string p = "source";
    require_object(j, p,
                   {"lambda_c_nm", "bandwidth_nm", "stretched_ps", "tau_rel_fs", "lambda0_nm", "tl_fs",
                    "mean_bandwidth", "grid"});
    SourceConfig s;
    s.lambda_c_nm = positive(j, p, "lambda_c_nm");
    const std::string bp = join(p, "bandwidth_nm");
    if (!j.contains("bandwidth_nm")) bad(bp, "missing required value");
    const Json& bw = j["bandwidth_nm"];
    if (bw.is_number()) {
        s.bandwidth_chirped_nm = s.bandwidth_antichirped_nm = to_number(bw, bp);
    } else {
        require_object(bw, bp, {"chirped", "antichirped"});
        s.bandwidth_chirped_nm = positive(bw, bp, "chirped");
        s.bandwidth_antichirped_nm = positive(bw, bp, "antichirped");
    }
    if (!(s.bandwidth_chirped_nm > 0.0)) bad(bp, "must be positive");
    s.stretched_ps = positive(j, p, "stretched_ps");
    s.tau_rel_fs = optional_number(j, p, "tau_rel_fs");
    s.lambda0_nm = optional_number(j, p, "lambda0_nm");
    if (s.lambda0_nm && s.tau_rel_fs) bad(p, "give either lambda0_nm or tau_rel_fs, not both");
    if (s.lambda0_nm && !(*s.lambda0_nm > 0.0)) bad(join(p, "lambda0_nm"), "must be positive");
    if (j.contains("tl_fs")) s.tl_fs = positive(j, p, "tl_fs");
    s.mean_bandwidth = flag(j, p, "mean_bandwidth", false);
    if (j.contains("grid")) {
        const std::string gp = join(p, "grid");
        const Json& g = j["grid"];
        require_object(g, gp, {"points", "halfwidth_factor"});
        if (g.contains("points")) {
            if (!g["points"].is_number_unsigned()) bad(join(gp, "points"), "expected a positive integer");
            s.grid.points = g["points"].get<std::size_t>();
            if (s.grid.points < 3 || s.grid.points % 2 == 0) bad(join(gp, "points"), "must be odd and at least 3");
        }
        if (g.contains("halfwidth_factor")) s.grid.halfwidth_factor = positive(g, gp, "halfwidth_factor");
    }
    return s;
}

SampleConfig parse_sample(const Json& j)
{
    const std::string p = "sample";
    require_object(j, p, {"interfaces", "gaps", "bulk"});
    SampleConfig s;
    const Json& ifs = array(j, p, "interfaces");
    if (ifs.empty()) bad(join(p, "interfaces"), "at least one interface is required");
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        const std::string ip = item(join(p, "interfaces"), i);
        require_object(ifs[i], ip, {"r_real", "r_imag"});
        const double re = number(ifs[i], ip, "r_real");
        const double im = optional_number(ifs[i], ip, "r_imag").value_or(0.0);
        if (std::hypot(re, im) > 1.0) bad(ip, "|r| must not exceed 1");
        s.reflectances.emplace_back(re, im);
    }
    if (j.contains("gaps")) {
        const Json& gaps = array(j, p, "gaps");
        for (std::size_t i = 0; i < gaps.size(); ++i) {
            const std::string gp = item(join(p, "gaps"), i);
            require_object(gaps[i], gp, {"d_um", "material"});
            s.gaps.push_back({positive(gaps[i], gp, "d_um"), text(gaps[i], gp, "material")});
        }
    }
    if (s.gaps.size() + 1 != s.reflectances.size()) {
        bad(join(p, "gaps"), "need exactly one gap fewer than interfaces");
    }
    if (j.contains("bulk")) {
        const std::string bp = join(p, "bulk");
        const Json& b = j["bulk"];
        require_object(b, bp, {"material", "length_mm", "passes", "phase"});
        BulkConfig bulk;
        bulk.material = text(b, bp, "material");
        bulk.length_mm = positive(b, bp, "length_mm");
        if (b.contains("passes")) {
            if (!b["passes"].is_number_integer() || b["passes"].get<int>() < 1) {
                bad(join(bp, "passes"), "expected a positive integer");
            }
            bulk.passes = b["passes"].get<int>();
        }
        if (b.contains("phase")) {
            const std::string ph = text(b, bp, "phase");
            if (ph == "full") {
                bulk.phase = BulkPhase::full;
            } else if (ph == "dispersive") {
                bulk.phase = BulkPhase::dispersive;
            } else {
                bad(join(bp, "phase"), "expected 'full' or 'dispersive'");
            }
        }
        s.bulk = bulk;
    }
    return s;
}

DispersiveMaterial parse_material(const Json& j, const std::string& p)
{
    require_object(j, p, {"name", "model", "terms", "n", "validity_um"});
    const std::string name = text(j, p, "name");
    const std::string model = text(j, p, "model");
    const Json& v = array(j, p, "validity_um");
    if (v.size() != 2) bad(join(p, "validity_um"), "expected [min, max]");
    const ValidityRange range{to_number(v[0], join(p, "validity_um") + "[0]"),
                              to_number(v[1], join(p, "validity_um") + "[1]")};
    if (!(range.min_um > 0.0) || !(range.max_um > range.min_um)) {
        bad(join(p, "validity_um"), "expected 0 < min < max");
    }
    try {
        if (model == "constant") {
            if (j.contains("terms")) bad(join(p, "terms"), "not used by the constant model");
            return DispersiveMaterial::constant(name, number(j, p, "n"), range);
        }
        if (model == "sellmeier") {
            if (j.contains("n")) bad(join(p, "n"), "not used by the sellmeier model");
            const Json& terms = array(j, p, "terms");
            std::vector<SellmeierTerm> t;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                const std::string tp = item(join(p, "terms"), i);
                require_object(terms[i], tp, {"B", "C_um2"});
                t.push_back({number(terms[i], tp, "B"), number(terms[i], tp, "C_um2")});
            }
            if (t.empty()) bad(join(p, "terms"), "at least one term is required");
            return DispersiveMaterial::sellmeier(name, std::move(t), range);
        }
    } catch (const ContractError& e) {
        bad(p, e.what());
    }
    bad(join(p, "model"), "expected 'constant' or 'sellmeier'");
}

XGrid parse_x_grid(const Json& j)
{
    const std::string p = "x_grid";
    require_object(j, p, {"start_um", "stop_um", "step_um"});
    XGrid g{number(j, p, "start_um"), number(j, p, "stop_um"), positive(j, p, "step_um")};
    if (!(g.stop_um > g.start_um)) bad(join(p, "stop_um"), "must exceed start_um");
    return g;
}

Json material_json(const DispersiveMaterial& m)
{
    Json j;
    j["name"] = m.name();
    if (m.model() == DispersiveMaterial::Model::constant) {
        j["model"] = "constant";
        j["n"] = m.constant_index();
    } else {
        j["model"] = "sellmeier";
        j["terms"] = Json::array();
        for (const auto& t : m.terms()) j["terms"].push_back(Json{{"B", t.b}, {"C_um2", t.c_um2}});
    }
    j["validity_um"] = Json::array({m.validity().min_um, m.validity().max_um});
    return j;
}

Json physics_json(const ScenarioConfig& c)
{
    Json j;
    Json src;
    src["lambda_c_nm"] = c.source.lambda_c_nm;
    src["bandwidth_nm"] = Json{{"chirped", c.source.bandwidth_chirped_nm},
                               {"antichirped", c.source.bandwidth_antichirped_nm}};
    src["stretched_ps"] = c.source.stretched_ps;
    if (c.source.tau_rel_fs) src["tau_rel_fs"] = *c.source.tau_rel_fs;
    if (c.source.lambda0_nm) src["lambda0_nm"] = *c.source.lambda0_nm;
    src["tl_fs"] = c.source.tl_fs;
    src["mean_bandwidth"] = c.source.mean_bandwidth;
    src["grid"] = Json{{"points", c.source.grid.points}, {"halfwidth_factor", c.source.grid.halfwidth_factor}};
    j["source"] = src;

    Json sample;
    sample["interfaces"] = Json::array();
    for (const auto& r : c.sample.reflectances) {
        sample["interfaces"].push_back(Json{{"r_real", r.real()}, {"r_imag", r.imag()}});
    }
    sample["gaps"] = Json::array();
    for (const auto& g : c.sample.gaps) sample["gaps"].push_back(Json{{"d_um", g.d_um}, {"material", g.material}});
    if (c.sample.bulk) {
        const auto& b = *c.sample.bulk;
        sample["bulk"] = Json{{"material", b.material},
                              {"length_mm", b.length_mm},
                              {"passes", b.passes},
                              {"phase", b.phase == BulkPhase::full ? "full" : "dispersive"}};
    }
    j["sample"] = sample;

    j["materials"] = Json::array();
    for (const auto& m : c.materials) j["materials"].push_back(material_json(m));
    j["x_grid"] = Json{{"start_um", c.x_grid.start_um}, {"stop_um", c.x_grid.stop_um}, {"step_um", c.x_grid.step_um}};
    if (!c.sweep_lambda0_nm.empty()) j["sweep"] = Json{{"lambda0_list_nm", c.sweep_lambda0_nm}};
    Json filter;
    if (c.filter.center_nm) filter["center_nm"] = *c.filter.center_nm;
    filter["fwhm_nm"] = c.filter.fwhm_nm;
    j["filter"] = filter;
    j["spectrogram"] = Json{{"halfspan_nm", c.spectrogram.halfspan_nm},
                            {"step_nm", c.spectrogram.step_nm},
                            {"line_threshold", c.spectrogram.line_threshold}};
    Json kernel = Json::object();
    if (c.kernel.bandwidth_nm) kernel["bandwidth_nm"] = *c.kernel.bandwidth_nm;
    j["kernel"] = kernel;
    j["analysis"] = Json{{"min_prominence", c.min_prominence}, {"classify", c.classify}};
    return j;
}

double operating_lambda_nm(const ScenarioConfig& c, std::optional<double> override_nm)
{
    if (override_nm) return *override_nm;
    const ChirpedPulsePair pair = scenario_pulse_pair(c);
    return wavelength_from_omega(operating_frequency(pair)) / kNano;
}

std::vector<double> x_axis(const ScenarioConfig& c)
{
    return delay_axis(c.x_grid.start_um, c.x_grid.stop_um, c.x_grid.step_um);
}

Interferogram scan_once(const ScenarioConfig& c, Mode mode, double lambda0_nm, const LayerStack& stack,
                        std::span<const double> x)
{
    const ChirpedPulsePair pair = scenario_pulse_pair(c, lambda0_nm);
    const double omega0 = operating_frequency(pair);
    switch (mode) {
    case Mode::cpi: {
        const auto [ic, ia] = pulse_spectra(pair, c.source.grid, omega0, c.source.mean_bandwidth);
        const EffectiveSpectrum lambda = effective_cpi(ic, ia);
        return cpi_interferogram(lambda, transfer_function(stack, lambda.grid, omega0), x);
    }
    case Mode::wli: {
        const auto spectra = pulse_spectra(pair, c.source.grid, omega0, c.source.mean_bandwidth);
        const SourceSpectrum& source = spectra.first;
        return wli_interferogram(source, transfer_function(stack, source.grid, omega0), x);
    }
    case Mode::qoct:
    case Mode::cw_swept: {
        const double bw = c.kernel.bandwidth_nm.value_or(c.source.bandwidth_chirped_nm);
        const double lambda0 = lambda0_nm * kNano;
        const FrequencyGrid grid = make_grid(c.source.grid, bandwidth_omega(lambda0, bw * kNano));
        std::vector<double> g = gaussian_spectrum(lambda0, bw * kNano, grid, omega0).intensity;
        const TransferFunction h = transfer_function(stack, grid, omega0);
        if (mode == Mode::qoct) {
            return qoct_interferogram(effective_qoct(grid, omega0, std::move(g)), h, x);
        }
        return cpi_interferogram(effective_cw_swept(grid, omega0, std::move(g)), h, x);
    }
    default: break;
    }
    throw ContractError(std::string("mode '") + to_string(mode) + "' does not produce a single scan");
}

void require_gap(const ScenarioConfig& c, const char* what)
{
    if (c.sample.gaps.empty()) {
        throw ConfigError(std::string("config: sample.gaps: ") + what + " needs at least one gap");
    }
}

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s = buf;
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

Json features_json(std::span<const Feature> features)
{
    Json arr = Json::array();
    for (const auto& f : features) {
        arr.push_back(Json{{"center_um", f.center_um},
                           {"fwhm_um", f.fwhm_um},
                           {"visibility", f.visibility},
                           {"visibility_abs", std::abs(f.visibility)},
                           {"polarity", to_string(f.polarity)},
                           {"classification", to_string(f.classification)}});
    }
    return arr;
}

} // namespace

ScenarioConfig parse_config(std::string_view json_text)
{
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    require_object(j, "",
                   {"name", "mode", "source", "sample", "materials", "x_grid", "sweep", "filter", "spectrogram",
                    "kernel", "analysis"});
    ScenarioConfig c;
    if (j.contains("name")) c.name = text(j, "", "name");
    if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos) {
        bad("name", "must be a non-empty file-name-safe string");
    }

    if (!j.contains("mode")) bad("mode", "missing required value");
    if (j["mode"].is_string()) {
        c.modes.push_back(mode_from_string(j["mode"].get<std::string>()));
    } else if (j["mode"].is_array()) {
        for (std::size_t i = 0; i < j["mode"].size(); ++i) {
            if (!j["mode"][i].is_string()) bad(item("mode", i), "expected a string");
            const Mode m = mode_from_string(j["mode"][i].get<std::string>());
            if (!c.has(m)) c.modes.push_back(m);
        }
    } else {
        bad("mode", "expected a string or an array of strings");
    }
    if (c.modes.empty()) bad("mode", "at least one mode is required");

    if (!j.contains("source")) bad("source", "missing required section");
    c.source = parse_source(j["source"]);
    if (!j.contains("sample")) bad("sample", "missing required section");
    c.sample = parse_sample(j["sample"]);
    if (j.contains("materials")) {
        const Json& mats = array(j, "", "materials");
        for (std::size_t i = 0; i < mats.size(); ++i) c.materials.push_back(parse_material(mats[i], item("materials", i)));
    }
    if (!j.contains("x_grid")) bad("x_grid", "missing required section");
    c.x_grid = parse_x_grid(j["x_grid"]);

    if (j.contains("sweep")) {
        require_object(j["sweep"], "sweep", {"lambda0_list_nm"});
        const Json& list = array(j["sweep"], "sweep", "lambda0_list_nm");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const double v = to_number(list[i], item("sweep.lambda0_list_nm", i));
            if (!(v > 0.0)) bad(item("sweep.lambda0_list_nm", i), "must be positive");
            c.sweep_lambda0_nm.push_back(v);
        }
    }
    if (c.has(Mode::sweep) && c.sweep_lambda0_nm.size() < 4) {
        bad("sweep.lambda0_list_nm", "sweep mode needs at least 4 operating wavelengths");
    }
    if (j.contains("filter")) {
        require_object(j["filter"], "filter", {"center_nm", "fwhm_nm"});
        c.filter.center_nm = optional_number(j["filter"], "filter", "center_nm");
        if (j["filter"].contains("fwhm_nm")) c.filter.fwhm_nm = positive(j["filter"], "filter", "fwhm_nm");
    }
    if (j.contains("spectrogram")) {
        const Json& s = j["spectrogram"];
        require_object(s, "spectrogram", {"halfspan_nm", "step_nm", "line_threshold"});
        if (s.contains("halfspan_nm")) c.spectrogram.halfspan_nm = positive(s, "spectrogram", "halfspan_nm");
        if (s.contains("step_nm")) c.spectrogram.step_nm = positive(s, "spectrogram", "step_nm");
        if (s.contains("line_threshold")) c.spectrogram.line_threshold = positive(s, "spectrogram", "line_threshold");
    }
    if (j.contains("kernel")) {
        require_object(j["kernel"], "kernel", {"bandwidth_nm"});
        if (j["kernel"].contains("bandwidth_nm")) c.kernel.bandwidth_nm = positive(j["kernel"], "kernel", "bandwidth_nm");
    }
    if (j.contains("analysis")) {
        require_object(j["analysis"], "analysis", {"min_prominence", "classify"});
        if (j["analysis"].contains("min_prominence")) {
            c.min_prominence = positive(j["analysis"], "analysis", "min_prominence");
        }
        c.classify = flag(j["analysis"], "analysis", "classify", true);
    }

    // Material names must resolve.
    const MaterialRegistry reg = scenario_registry(c);
    for (std::size_t i = 0; i < c.sample.gaps.size(); ++i) {
        if (!reg.contains(c.sample.gaps[i].material)) {
            bad(item("sample.gaps", i) + ".material", "unknown material '" + c.sample.gaps[i].material + "'");
        }
    }
    if (c.sample.bulk && !reg.contains(c.sample.bulk->material)) {
        bad("sample.bulk.material", "unknown material '" + c.sample.bulk->material + "'");
    }
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::string text;
    try {
        text = read_file(path);
    } catch (const FormatError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return parse_config(text);
}

std::string config_to_json(const ScenarioConfig& config)
{
    Json j;
    j["name"] = config.name;
    j["mode"] = Json::array();
    for (Mode m : config.modes) j["mode"].push_back(to_string(m));
    const Json physics = physics_json(config);
    for (const auto& [key, value] : physics.items()) j[key] = value;
    return j.dump(2) + "\n";
}

std::string scenario_hash(const ScenarioConfig& config)
{
    const std::string canonical = physics_json(config).dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

MaterialRegistry scenario_registry(const ScenarioConfig& config)
{
    MaterialRegistry reg = MaterialRegistry::with_builtins();
    for (const auto& m : config.materials) reg.add(m);
    return reg;
}

ChirpedPulsePair scenario_pulse_pair(const ScenarioConfig& config, std::optional<double> lambda0_nm)
{
    const auto& s = config.source;
    ChirpedPulsePair pair = make_pulse_pair(s.lambda_c_nm * kNano, s.bandwidth_chirped_nm * kNano,
                                            s.bandwidth_antichirped_nm * kNano, s.stretched_ps * kPico,
                                            s.tau_rel_fs.value_or(0.0) * kFemto, s.tl_fs * kFemto);
    const std::optional<double> l0 = lambda0_nm ? lambda0_nm : s.lambda0_nm;
    if (l0) {
        pair.tau_rel = tau_rel_for_operating_frequency(pair, omega_from_wavelength(*l0 * kNano));
    }
    operating_frequency(pair);
    return pair;
}

LayerStack scenario_stack(const ScenarioConfig& config, const MaterialRegistry& registry)
{
    LayerStack stack;
    for (const auto& r : config.sample.reflectances) stack.interfaces.push_back({r});
    for (const auto& g : config.sample.gaps) stack.gaps.push_back({g.d_um * kMicro, registry.at(g.material)});
    if (config.sample.bulk) {
        const auto& b = *config.sample.bulk;
        stack.bulk = BulkElement{registry.at(b.material), b.length_mm * kMilli, b.passes, b.phase};
    }
    stack.validate();
    return stack;
}

FlipPrediction scenario_flip(const ScenarioConfig& config, double lambda0_nm)
{
    require_gap(config, "artifact flip prediction");
    const MaterialRegistry reg = scenario_registry(config);
    const auto& gap = config.sample.gaps.front();
    const double lambda0 = lambda0_nm * kNano;
    const double alpha = group_index(reg.at(gap.material), lambda0) / kSpeedOfLight;
    return predict_artifact_flip(omega_from_wavelength(lambda0), alpha, gap.d_um * kMicro);
}

ScanOutcome simulate_scan(const ScenarioConfig& config, Mode mode, std::optional<double> lambda0_nm)
{
    const MaterialRegistry reg = scenario_registry(config);
    const LayerStack stack = scenario_stack(config, reg);
    const std::vector<double> x = x_axis(config);
    const double l0 = operating_lambda_nm(config, lambda0_nm);

    ScanOutcome out;
    out.mode = mode;
    out.scan = scan_once(config, mode, l0, stack, x);
    out.scan.scenario = scenario_hash(config);

    const bool interferometric = mode == Mode::cpi || mode == Mode::qoct || mode == Mode::cw_swept;
    if (interferometric && config.classify && !config.sample.gaps.empty()) {
        const double quarter = 0.5 * scenario_flip(config, l0).flip_nm;
        std::vector<std::pair<double, Interferogram>> scans;
        scans.emplace_back(l0, out.scan);
        for (int k = 1; k <= 3; ++k) {
            const double lk = l0 + k * quarter;
            scans.emplace_back(lk, scan_once(config, mode, lk, stack, x));
        }
        out.features = classify_features(scans, config.min_prominence);
        // Report positions and visibilities as seen at the operating wavelength itself.
        const auto here = detect_features(out.scan, config.min_prominence);
        for (auto& f : out.features.features) {
            for (const auto& h : here) {
                if (std::abs(h.center_um - f.center_um) <= f.fwhm_um) {
                    const auto cls = f.classification;
                    f = h;
                    f.classification = cls;
                    break;
                }
            }
        }
        std::vector<Feature> kept;
        for (const auto& f : out.features.features) {
            const bool seen = std::any_of(here.begin(), here.end(), [&](const Feature& h) {
                return std::abs(h.center_um - f.center_um) <= f.fwhm_um;
            });
            if (seen) kept.push_back(f);
        }
        out.features.features = std::move(kept);
    } else {
        out.features.features = detect_features(out.scan, config.min_prominence);
        out.features.sufficient = false;
        out.features.status = interferometric ? "classification disabled" : "not classified for this scan kind";
    }
    return out;
}

SweepOutcome simulate_sweep(const ScenarioConfig& config)
{
    if (config.sweep_lambda0_nm.size() < 4) {
        throw ConfigError("config: sweep.lambda0_list_nm: at least 4 operating wavelengths are required");
    }
    require_gap(config, "a sweep");
    const MaterialRegistry reg = scenario_registry(config);
    const LayerStack stack = scenario_stack(config, reg);
    const std::vector<double> x = x_axis(config);

    SweepOutcome out;
    std::vector<std::pair<double, Interferogram>> scans;
    std::vector<SweepPoint> points;
    for (double l0 : config.sweep_lambda0_nm) {
        Interferogram scan = scan_once(config, Mode::cpi, l0, stack, x);
        scan.scenario = scenario_hash(config);
        points.push_back({l0, midpoint_visibility(scan, config.min_prominence)});
        scans.emplace_back(l0, std::move(scan));
    }
    out.fit = fit_visibility_oscillation(points);
    double sum = 0.0;
    for (double l0 : config.sweep_lambda0_nm) sum += l0;
    out.lambda_mean_nm = sum / static_cast<double>(config.sweep_lambda0_nm.size());
    out.predicted = scenario_flip(config, out.lambda_mean_nm);
    out.features = classify_features(scans, config.min_prominence);
    return out;
}

SpectrogramOutcome simulate_spectrogram(const ScenarioConfig& config, std::optional<double> lambda0_nm)
{
    const MaterialRegistry reg = scenario_registry(config);
    const LayerStack stack = scenario_stack(config, reg);
    const std::vector<double> x = x_axis(config);
    const double l0 = operating_lambda_nm(config, lambda0_nm);
    const ChirpedPulsePair pair = scenario_pulse_pair(config, l0);

    const double centre = 0.5 * l0;
    const auto& sc = config.spectrogram;
    const auto steps = static_cast<long>(std::floor(sc.halfspan_nm / sc.step_nm + 1e-9));
    if (steps < 2) {
        throw ConfigError("config: spectrogram.step_nm: must be well below halfspan_nm");
    }
    std::vector<double> lambda_nm;
    for (long i = -steps; i <= steps; ++i) lambda_nm.push_back(centre + static_cast<double>(i) * sc.step_nm);

    SpectrogramOutcome out;
    out.spectrogram = sfg_spectrogram(pair, stack, x, lambda_nm);
    const double filter_nm = config.filter.center_nm.value_or(centre);
    out.filtered = integrate_filtered(out.spectrogram, omega_from_wavelength(filter_nm * kNano), config.filter.fwhm_nm);
    out.filtered.scenario = scenario_hash(config);
    out.features = detect_features(out.filtered, config.min_prominence);

    // |dλ_sfg/dx| of a ridge: λ_sfg²·β/(π·c²) per unit mirror travel, in nm per µm.
    const double ls = centre * kNano;
    const double slope = ls * ls * pair.beta / (kPi * kSpeedOfLight * kSpeedOfLight) * kMicro / kNano;
    out.lines = trace_spectrogram_lines(out.spectrogram, slope, sc.line_threshold);
    out.crossings = line_crossings(out.lines);
    return out;
}

std::string sweep_report_json(const ScenarioConfig& config, const SweepOutcome& o)
{
    Json j;
    j["scenario"] = scenario_hash(config);
    j["points"] = Json::array();
    for (const auto& p : o.fit.points) j["points"].push_back(Json{{"lambda0_nm", p.lambda0_nm}, {"visibility", p.visibility}});
    j["amplitude"] = o.fit.amplitude;
    j["fitted_period_nm"] = o.fit.fitted_period_nm;
    j["fitted_phase_rad"] = o.fit.fitted_phase_rad;
    j["period_ci_nm"] = o.fit.period_ci_nm;
    j["lambda_ref_nm"] = o.fit.lambda_ref_nm;
    j["rms_residual"] = o.fit.rms_residual;
    j["predicted_flip_nm"] = o.predicted.flip_nm;
    j["predicted_period_nm"] = o.predicted.period_nm;
    j["classification_status"] = o.features.status;
    j["features"] = features_json(o.features.features);
    return j.dump(2) + "\n";
}

std::string spectrogram_report_json(const ScenarioConfig& config, const SpectrogramOutcome& o)
{
    Json j;
    j["scenario"] = scenario_hash(config);
    j["omega0_nm"] = wavelength_from_omega(o.spectrogram.omega0) / kNano;
    j["lines"] = Json::array();
    for (const auto& l : o.lines) {
        j["lines"].push_back(Json{{"slope_nm_per_um", l.slope_nm_per_um},
                                  {"intercept_nm", l.intercept_nm},
                                  {"support", l.support}});
    }
    j["crossings"] = Json::array();
    for (const auto& c : o.crossings) {
        j["crossings"].push_back(Json{{"x_um", c.x_um}, {"lambda_nm", c.lambda_nm}, {"lines", {c.first, c.second}}});
    }
    j["filtered_features"] = features_json(o.features);
    return j.dump(2) + "\n";
}

std::string format_spectrogram(const Spectrogram& spec, const std::string& scenario)
{
    std::string out = "# cpi-lab spectrogram v1\n# omega0: ";
    char buf[32];
    auto put = [&](double v) {
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, res.ptr);
    };
    put(spec.omega0);
    out += "\n# scenario: " + scenario + "\nx_um,lambda_nm,intensity,background\n";
    const std::size_t nl = spec.lambda_nm.size();
    for (std::size_t ix = 0; ix < spec.x_um.size(); ++ix) {
        for (std::size_t il = 0; il < nl; ++il) {
            put(spec.x_um[ix]);
            out += ',';
            put(spec.lambda_nm[il]);
            out += ',';
            put(spec.intensity[ix * nl + il]);
            out += ',';
            put(spec.background.empty() ? 0.0 : spec.background[ix * nl + il]);
            out += '\n';
        }
    }
    return out;
}

RunReport run_scenario(const ScenarioConfig& config, const std::vector<Mode>& modes, const RunOptions& options)
{
    RunReport report;
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec) {
        throw Error("cannot create output directory " + options.out_dir.string());
    }
    auto emit = [&](const std::string& file, const std::string& content) {
        const auto path = options.out_dir / file;
        write_file_atomic(path, content);
        report.files.push_back(path);
    };
    const std::string& name = config.name;

    for (Mode mode : modes) {
        switch (mode) {
        case Mode::cpi:
        case Mode::wli:
        case Mode::qoct:
        case Mode::cw_swept: {
            const ScanOutcome o = simulate_scan(config, mode, options.lambda0_nm);
            const std::string stem = name + "_" + to_string(mode);
            emit(stem + ".csv", format_scan(o.scan));
            emit(stem + ".json", feature_report_json(o.scan, o.features.features));
            if (options.plot) {
                emit(stem + ".svg", svg_line_chart({{to_string(o.scan.kind), o.scan.x_um, o.scan.signal}},
                                                   name + " " + to_string(mode), "path delay x (um)",
                                                   "normalized signal"));
            }
            std::string line = std::string(to_string(mode)) + ": " + std::to_string(o.features.features.size()) +
                               " features";
            for (const auto& f : o.features.features) {
                line += " | x=" + fixed(f.center_um, 2) + " um fwhm=" + fixed(f.fwhm_um, 2) + " V=" +
                        fixed(f.visibility, 3) + " " + to_string(f.classification);
            }
            report.summary.push_back(line);
            break;
        }
        case Mode::sweep: {
            const SweepOutcome o = simulate_sweep(config);
            emit(name + "_sweep.json", sweep_report_json(config, o));
            if (options.plot) {
                PlotSeries pts{"simulated", {}, {}};
                for (const auto& p : o.fit.points) {
                    pts.x.push_back(p.lambda0_nm);
                    pts.y.push_back(p.visibility);
                }
                PlotSeries fit{"fit", {}, {}};
                const double a = pts.x.front(), b = pts.x.back();
                for (int i = 0; i <= 400; ++i) {
                    const double l = a + (b - a) * i / 400.0;
                    fit.x.push_back(l);
                    fit.y.push_back(o.fit.amplitude * std::cos(2.0 * kPi * (l - o.fit.lambda_ref_nm) /
                                                                   o.fit.fitted_period_nm +
                                                               o.fit.fitted_phase_rad));
                }
                emit(name + "_sweep.svg", svg_line_chart({pts, fit}, name + " artifact visibility",
                                                         "operating wavelength (nm)", "visibility"));
            }
            report.summary.push_back("sweep: fitted period " + fixed(o.fit.fitted_period_nm, 4) + " +/- " +
                                     fixed(o.fit.period_ci_nm, 4) + " nm, predicted " +
                                     fixed(o.predicted.period_nm, 4) + " nm");
            break;
        }
        case Mode::spectrogram: {
            const SpectrogramOutcome o = simulate_spectrogram(config, options.lambda0_nm);
            emit(name + "_spectrogram.csv", format_spectrogram(o.spectrogram, scenario_hash(config)));
            emit(name + "_filtered.csv", format_scan(o.filtered));
            emit(name + "_spectrogram.json", spectrogram_report_json(config, o));
            if (options.plot) {
                emit(name + "_spectrogram.svg", svg_spectrogram(o.spectrogram, name + " SFG spectrum"));
                emit(name + "_filtered.svg", svg_line_chart({{"filtered", o.filtered.x_um, o.filtered.signal}},
                                                            name + " filtered SFG", "path delay x (um)",
                                                            "normalized signal"));
            }
            report.summary.push_back("spectrogram: " + std::to_string(o.lines.size()) + " lines, " +
                                     std::to_string(o.crossings.size()) + " crossings, " +
                                     std::to_string(o.features.size()) + " filtered features");
            break;
        }
        }
    }
    return report;
}

} // namespace cpilab
