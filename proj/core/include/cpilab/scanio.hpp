#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "cpilab/analysis.hpp"
#include "cpilab/engine.hpp"

namespace cpilab {

/// Text of a scan file:
///   # cpi-lab scan v1
///   # kind: CPI
///   # omega0: <rad/s>
///   # scenario: <hash>
///   x_um,signal
///   ...
/// Numbers use the shortest decimal form that reads back to the same double.
std::string format_scan(const Interferogram& scan);

/// Inverse of format_scan. The version line is mandatory; the other comment
/// lines and the column header are optional, so plain two-column CSV with a
/// version line is accepted (missing kind defaults to CPI). Throws FormatError
/// naming the line for malformed rows, non-finite values or non-increasing x.
Interferogram parse_scan(std::string_view text);

void write_scan(const std::filesystem::path& path, const Interferogram& scan);
Interferogram read_scan(const std::filesystem::path& path);

/// {kind, omega0_nm, scenario, features:[{center_um, fwhm_um, visibility,
/// visibility_abs, polarity, classification}]}
std::string feature_report_json(const Interferogram& scan, std::span<const Feature> features);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

} // namespace cpilab
