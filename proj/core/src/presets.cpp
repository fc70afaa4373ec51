#include <map>

#include "cpilab/error.hpp"
#include "cpilab/scenario.hpp"

namespace cpilab {

namespace {

// BK7 plus a constant term, matching n_g = 1.53482 at 790.8 nm.
constexpr const char* kCoverglass = R"("materials": [
    {"name": "coverglass", "model": "sellmeier", "validity_um": [0.3, 2.5],
     "terms": [{"B": 1.03961212, "C_um2": 0.00600069867},
               {"B": 0.231792344, "C_um2": 0.0200179144},
               {"B": 1.01046945, "C_um2": 103.560653},
               {"B": 0.023885233466, "C_um2": 0.0}]}
  ])";

constexpr const char* kSource = R"("lambda_c_nm": 790.0,
    "bandwidth_nm": {"chirped": 11.0, "antichirped": 10.0},
    "stretched_ps": 54.0,
    "tl_fs": 85.0,
    "mean_bandwidth": false)";

std::string coverslip(double d_um, const std::string& bulk = "")
{
    std::string s = R"("sample": {
    "interfaces": [{"r_real": 0.2, "r_imag": 0.0}, {"r_real": 0.2, "r_imag": 0.0}],
    "gaps": [{"d_um": )" + std::to_string(d_um) + R"(, "material": "coverglass"}])";
    if (!bulk.empty()) s += ",\n    " + bulk;
    return s + "\n  }";
}

std::string scenario(const std::string& name, const std::string& mode, double lambda0_nm, const std::string& sample,
                     const std::string& x_grid, const std::string& extra = "")
{
    std::string s = "{\n  \"name\": \"" + name + "\",\n  \"mode\": " + mode + ",\n  \"source\": {\n    " + kSource +
                    ",\n    \"lambda0_nm\": " + std::to_string(lambda0_nm) + "\n  },\n  " + sample + ",\n  " +
                    kCoverglass + ",\n  \"x_grid\": " + x_grid;
    if (!extra.empty()) s += ",\n  " + extra;
    return s + "\n}\n";
}

const std::map<std::string, std::string>& presets()
{
    static const std::map<std::string, std::string> table = [] {
        const std::string fine = R"({"start_um": -100.0, "stop_um": 400.0, "step_um": 0.05})";
        std::string sweep_list;
        for (int i = 0; i <= 27; ++i) {
            if (i) sweep_list += ", ";
            sweep_list += std::to_string(790.3 + 0.1 * i);
        }
        std::map<std::string, std::string> t;
        t["fig2a"] = scenario("fig2a", R"(["cpi", "wli"])", 790.8, coverslip(186.4), fine);
        t["fig2b"] = scenario("fig2b", R"(["cpi", "wli"])", 790.8,
                              coverslip(186.4, R"("bulk": {"material": "calcite_o", "length_mm": 80.58, "passes": 1, "phase": "dispersive"})"),
                              fine);
        t["fig3"] = scenario("fig3", R"("spectrogram")", 790.8, coverslip(186.4),
                             R"({"start_um": -100.0, "stop_um": 400.0, "step_um": 1.0})",
                             R"("spectrogram": {"halfspan_nm": 0.6, "step_nm": 0.002, "line_threshold": 0.1},
  "filter": {"fwhm_nm": 0.46})");
        t["fig4a"] = scenario("fig4a", R"("cpi")", 792.10, coverslip(186.3144), fine);
        t["fig4b"] = scenario("fig4b", R"("cpi")", 791.54, coverslip(186.3144), fine);
        t["fig4sweep"] = scenario("fig4sweep", R"("sweep")", 791.54, coverslip(186.3144),
                                  R"({"start_um": -100.0, "stop_um": 400.0, "step_um": 0.25})",
                                  "\"sweep\": {\"lambda0_list_nm\": [" + sweep_list + "]}");
        return t;
    }();
    return table;
}

} // namespace

std::vector<std::string> preset_names()
{
    std::vector<std::string> names;
    for (const auto& [name, _] : presets()) names.push_back(name);
    return names;
}

std::string_view preset_json(const std::string& name)
{
    const auto& table = presets();
    const auto it = table.find(name);
    if (it == table.end()) {
        throw ConfigError("config: unknown scenario preset '" + name + "'");
    }
    return it->second;
}

ScenarioConfig preset(const std::string& name)
{
    return parse_config(preset_json(name));
}

} // namespace cpilab
