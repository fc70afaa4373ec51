#include <gtest/gtest.h>

#include <filesystem>

#include "cpilab/error.hpp"
#include "cpilab/scanio.hpp"
#include "cpilab/scenario.hpp"

using namespace cpilab;

namespace {

constexpr const char* kMinimal = R"({
  "name": "mini",
  "mode": ["cpi", "wli"],
  "source": {"lambda_c_nm": 790.0, "bandwidth_nm": 11.0, "stretched_ps": 54.0, "lambda0_nm": 790.5,
             "grid": {"points": 2049}},
  "sample": {"interfaces": [{"r_real": 0.2}, {"r_real": 0.2}], "gaps": [{"d_um": 60.0, "material": "glass"}]},
  "materials": [{"name": "glass", "model": "constant", "n": 1.5, "validity_um": [0.4, 1.2]}],
  "x_grid": {"start_um": -150.0, "stop_um": 250.0, "step_um": 0.08}
})";

std::string replace(std::string s, const std::string& from, const std::string& to)
{
    const auto at = s.find(from);
    if (at == std::string::npos) throw std::logic_error("pattern not found: " + from);
    return s.replace(at, from.size(), to);
}

void expect_config_error(const std::string& text, const std::string& fragment)
{
    try {
        parse_config(text);
        FAIL() << "accepted: " << fragment;
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
}

} // namespace

TEST(Scenario, MinimalConfigParses)
{
    const auto c = parse_config(kMinimal);
    EXPECT_EQ(c.name, "mini");
    ASSERT_EQ(c.modes.size(), 2u);
    EXPECT_TRUE(c.has(Mode::wli));
    EXPECT_EQ(c.source.bandwidth_antichirped_nm, 11.0);
    EXPECT_EQ(c.source.grid.points, 2049u);
    ASSERT_EQ(c.sample.gaps.size(), 1u);
    EXPECT_EQ(c.sample.gaps[0].material, "glass");
}

TEST(Scenario, CanonicalFormReparses)
{
    const auto c = parse_config(kMinimal);
    const auto again = parse_config(config_to_json(c));
    EXPECT_EQ(config_to_json(again), config_to_json(c));
    EXPECT_EQ(scenario_hash(again), scenario_hash(c));
}

TEST(Scenario, StrictKeysAndTypes)
{
    expect_config_error(replace(kMinimal, "\"stretched_ps\"", "\"colour\": 1, \"stretched_ps\""), "source.colour");
    expect_config_error(replace(kMinimal, "\"name\": \"mini\",", "\"nmae\": \"x\","), "nmae");
    expect_config_error(replace(kMinimal, "\"d_um\": 60.0", "\"d_um\": \"60\""), "sample.gaps[0].d_um");
    expect_config_error(replace(kMinimal, "\"step_um\": 0.08", "\"step_um\": 0.0"), "x_grid.step_um");
    expect_config_error(replace(kMinimal, "\"cpi\", \"wli\"", "\"cpi\", \"oct\""), "mode");
    expect_config_error(replace(kMinimal, "\"material\": \"glass\"", "\"material\": \"amber\""), "amber");
    expect_config_error(replace(kMinimal, "\"points\": 2049", "\"points\": 2048"), "source.grid.points");
    expect_config_error(replace(kMinimal, "[\"cpi\", \"wli\"]", "\"sweep\""), "sweep.lambda0_list_nm");
    expect_config_error("{not json", "not valid JSON");
}

TEST(Scenario, HashTracksPhysicsOnly)
{
    const auto base = parse_config(kMinimal);
    const std::string h = scenario_hash(base);
    EXPECT_EQ(h.size(), 16u);

    auto renamed = base;
    renamed.name = "other";
    renamed.modes = {Mode::cpi};
    EXPECT_EQ(scenario_hash(renamed), h);

    EXPECT_NE(scenario_hash(parse_config(replace(kMinimal, "60.0", "60.5"))), h);
    EXPECT_NE(scenario_hash(parse_config(replace(kMinimal, "790.5", "790.6"))), h);
    EXPECT_NE(scenario_hash(parse_config(replace(kMinimal, "\"n\": 1.5", "\"n\": 1.51"))), h);
    EXPECT_NE(scenario_hash(parse_config(replace(kMinimal, "\"step_um\": 0.08", "\"step_um\": 0.07"))), h);
}

TEST(Scenario, PresetsParse)
{
    const auto names = preset_names();
    for (const char* want : {"fig2a", "fig2b", "fig3", "fig4a", "fig4b", "fig4sweep"}) {
        EXPECT_NE(std::find(names.begin(), names.end(), want), names.end()) << want;
    }
    for (const auto& n : names) {
        const auto c = preset(n);
        EXPECT_EQ(c.name, n);
    }
    EXPECT_TRUE(preset("fig2b").sample.bulk.has_value());
    EXPECT_THROW(preset("fig9"), ConfigError);
}

TEST(Scenario, SimulatedSlabRecoversThickness)
{
    const auto c = parse_config(kMinimal);
    const auto o = simulate_scan(c, Mode::cpi);
    ASSERT_TRUE(o.features.sufficient) << o.features.status;
    ASSERT_EQ(o.features.features.size(), 3u);
    const auto& f = o.features.features;
    EXPECT_EQ(f[0].classification, Classification::real);
    EXPECT_EQ(f[1].classification, Classification::artifact);
    EXPECT_EQ(f[2].classification, Classification::real);
    EXPECT_NEAR(f[2].center_um - f[0].center_um, 90.0, 0.1);
    EXPECT_EQ(o.scan.scenario, scenario_hash(c));
}

TEST(Scenario, RunIsDeterministic)
{
    const auto c = parse_config(kMinimal);
    const auto base = std::filesystem::temp_directory_path() / "cpilab_test_determinism";
    std::filesystem::remove_all(base);
    RunOptions a{base / "a", true, {}};
    RunOptions b{base / "b", true, {}};
    const auto ra = run_scenario(c, c.modes, a);
    const auto rb = run_scenario(c, c.modes, b);
    ASSERT_EQ(ra.files.size(), rb.files.size());
    ASSERT_EQ(ra.files.size(), 6u);
    for (std::size_t i = 0; i < ra.files.size(); ++i) {
        EXPECT_EQ(ra.files[i].filename(), rb.files[i].filename());
        EXPECT_EQ(read_file(ra.files[i]), read_file(rb.files[i])) << ra.files[i];
    }
}

TEST(Scenario, SweepSectionRequiredForSweep)
{
    const auto c = parse_config(kMinimal);
    EXPECT_THROW(simulate_sweep(c), ConfigError);
}
