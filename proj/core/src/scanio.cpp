#include "cpilab/scanio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cpilab/error.hpp"
#include "cpilab/units.hpp"

namespace cpilab {

namespace {

constexpr std::string_view kVersionLine = "# cpi-lab scan v1";

void append_number(std::string& out, double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_number(std::string_view s, double& v)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what)
{
    throw FormatError("line " + std::to_string(line) + ": " + what);
}

} // namespace

std::string format_scan(const Interferogram& scan)
{
    if (scan.x_um.size() != scan.signal.size()) {
        throw ContractError("scan axis and signal lengths differ");
    }
    std::string out;
    out.reserve(48 * scan.x_um.size() + 128);
    out += kVersionLine;
    out += "\n# kind: ";
    out += to_string(scan.kind);
    out += "\n# omega0: ";
    append_number(out, scan.omega0);
    out += "\n# scenario: ";
    out += scan.scenario;
    out += "\nx_um,signal\n";
    for (std::size_t i = 0; i < scan.x_um.size(); ++i) {
        append_number(out, scan.x_um[i]);
        out += ',';
        append_number(out, scan.signal[i]);
        out += '\n';
    }
    return out;
}

Interferogram parse_scan(std::string_view text)
{
    Interferogram scan;
    std::size_t line_no = 0;
    bool versioned = false;
    bool header_seen = false;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = trim(text.substr(0, eol));
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        ++line_no;

        if (!versioned) {
            if (line != kVersionLine) {
                throw FormatError("line 1: expected version header '" + std::string(kVersionLine) + "'");
            }
            versioned = true;
            continue;
        }
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto colon = line.find(':');
            if (colon == std::string_view::npos) continue;
            const auto key = trim(line.substr(1, colon - 1));
            const auto value = trim(line.substr(colon + 1));
            if (key == "kind") {
                try {
                    scan.kind = scan_kind_from_string(std::string(value));
                } catch (const FormatError& e) {
                    fail_at(line_no, e.what());
                }
            } else if (key == "omega0") {
                if (!parse_number(value, scan.omega0) || !std::isfinite(scan.omega0)) {
                    fail_at(line_no, "bad omega0 value");
                }
            } else if (key == "scenario") {
                scan.scenario = std::string(value);
            }
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            fail_at(line_no, "expected two comma-separated columns");
        }
        double x = 0.0, s = 0.0;
        const bool ok_x = parse_number(line.substr(0, comma), x);
        const bool ok_s = parse_number(line.substr(comma + 1), s);
        if (!ok_x && !ok_s && !header_seen && scan.x_um.empty()) {
            header_seen = true;
            continue;
        }
        if (!ok_x || !ok_s) fail_at(line_no, "malformed row '" + std::string(line) + "'");
        if (!std::isfinite(x) || !std::isfinite(s)) fail_at(line_no, "non-finite value");
        if (!scan.x_um.empty() && !(x > scan.x_um.back())) fail_at(line_no, "x is not strictly increasing");
        scan.x_um.push_back(x);
        scan.signal.push_back(s);
    }
    if (!versioned) {
        throw FormatError("line 1: expected version header '" + std::string(kVersionLine) + "'");
    }
    if (scan.x_um.empty()) {
        throw FormatError("scan has no data rows");
    }
    return scan;
}

void write_scan(const std::filesystem::path& path, const Interferogram& scan)
{
    write_file_atomic(path, format_scan(scan));
}

Interferogram read_scan(const std::filesystem::path& path)
{
    try {
        return parse_scan(read_file(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::string feature_report_json(const Interferogram& scan, std::span<const Feature> features)
{
    nlohmann::ordered_json j;
    j["kind"] = to_string(scan.kind);
    j["omega0_nm"] = scan.omega0 > 0.0 ? wavelength_from_omega(scan.omega0) / kNano : 0.0;
    j["scenario"] = scan.scenario;
    j["features"] = nlohmann::ordered_json::array();
    for (const auto& f : features) {
        nlohmann::ordered_json e;
        e["center_um"] = f.center_um;
        e["fwhm_um"] = f.fwhm_um;
        e["visibility"] = f.visibility;
        e["visibility_abs"] = std::abs(f.visibility);
        e["polarity"] = to_string(f.polarity);
        e["classification"] = to_string(f.classification);
        j["features"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw Error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot rename into " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace cpilab
