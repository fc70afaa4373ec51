#include "cpilab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cpilab/error.hpp"
#include "cpilab/units.hpp"
#include "stats.hpp"

namespace cpilab {

const char* to_string(Polarity p)
{
    return p == Polarity::dip ? "dip" : "peak";
}

const char* to_string(Classification c)
{
    switch (c) {
    case Classification::real: return "real";
    case Classification::artifact: return "artifact";
    case Classification::unknown: return "unknown";
    }
    return "unknown";
}

namespace {

/// Samples the features are measured on: the envelope for WLI, the raw signal otherwise.
std::vector<double> working_signal(const Interferogram& scan)
{
    if (scan.x_um.size() != scan.signal.size() || scan.signal.empty()) {
        throw ContractError("scan axis and signal lengths differ or are empty");
    }
    if (scan.kind == ScanKind::wli) {
        return analytic_envelope(scan.signal);
    }
    return scan.signal;
}

double interpolate_at(std::span<const double> x, std::span<const double> y, double at)
{
    if (at <= x.front()) return y.front();
    if (at >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), at);
    const auto i = static_cast<std::size_t>(it - x.begin());
    const double t = (at - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + t * (y[i] - y[i - 1]);
}

double shoulder_on(std::span<const double> x, std::span<const double> y, std::span<const Feature> excluded)
{
    std::vector<double> kept;
    kept.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        bool near = false;
        for (const auto& f : excluded) {
            if (std::abs(x[i] - f.center_um) <= 3.0 * f.fwhm_um) {
                near = true;
                break;
            }
        }
        if (!near) kept.push_back(y[i]);
    }
    if (kept.empty()) {
        throw ContractError("no shoulder region left outside the features");
    }
    const double s = detail::median(kept);
    if (!(s > 0.0)) {
        throw ContractError("shoulder level is not positive");
    }
    return s;
}

/// Half-excursion crossing walking from `peak` in direction `dir`; returns the interpolated x.
double half_crossing(std::span<const double> x, std::span<const double> y, std::size_t peak, int dir, double level,
                     bool below)
{
    std::size_t i = peak;
    while (true) {
        const long next = static_cast<long>(i) + dir;
        if (next < 0 || next >= static_cast<long>(y.size())) {
            return x[i];
        }
        const auto j = static_cast<std::size_t>(next);
        const bool crossed = below ? y[j] >= level : y[j] <= level;
        if (crossed) {
            const double t = (level - y[i]) / (y[j] - y[i]);
            return x[i] + t * (x[j] - x[i]);
        }
        i = j;
    }
}

/// Vertex of the parabola through three neighbours, clamped to one step.
double refine_center(std::span<const double> x, std::span<const double> y, std::size_t i)
{
    if (i == 0 || i + 1 >= y.size()) return x[i];
    const double a = y[i - 1], b = y[i], c = y[i + 1];
    const double denom = a - 2.0 * b + c;
    if (denom == 0.0) return x[i];
    const double off = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    return x[i] + off * (x[i + 1] - x[i - 1]) * 0.5;
}

std::vector<Feature> detect_on(std::span<const double> x, std::span<const double> y, double baseline,
                               double min_prominence)
{
    std::vector<Feature> out;
    const double gate = 0.5 * min_prominence;
    std::size_t i = 0;
    const std::size_t n = y.size();
    while (i < n) {
        const double dev = y[i] - baseline;
        if (std::abs(dev) <= gate) {
            ++i;
            continue;
        }
        const bool below = dev < 0.0;
        std::size_t ext = i;
        std::size_t j = i;
        while (j < n && std::abs(y[j] - baseline) > gate && ((y[j] - baseline) < 0.0) == below) {
            if (below ? y[j] < y[ext] : y[j] > y[ext]) ext = j;
            ++j;
        }
        const double excursion = y[ext] - baseline;
        if (std::abs(excursion) >= min_prominence) {
            const double level = baseline + 0.5 * excursion;
            const double left = half_crossing(x, y, ext, -1, level, below);
            const double right = half_crossing(x, y, ext, +1, level, below);
            Feature f;
            f.center_um = refine_center(x, y, ext);
            f.fwhm_um = right - left;
            f.polarity = below ? Polarity::dip : Polarity::peak;
            if (f.fwhm_um > 0.0) out.push_back(f);
        }
        i = j;
    }
    return out;
}

} // namespace

double extremum_fwhm(std::span<const double> x, std::span<const double> y, double baseline)
{
    if (x.size() != y.size() || x.size() < 3) {
        throw ContractError("FWHM needs matching axes with at least 3 samples");
    }
    std::size_t ext = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (std::abs(y[i] - baseline) > std::abs(y[ext] - baseline)) ext = i;
    }
    const double excursion = y[ext] - baseline;
    if (excursion == 0.0) {
        throw ContractError("FWHM of a flat curve");
    }
    const double level = baseline + 0.5 * excursion;
    const bool below = excursion < 0.0;
    return half_crossing(x, y, ext, +1, level, below) - half_crossing(x, y, ext, -1, level, below);
}

std::vector<Feature> detect_features(const Interferogram& scan, double min_prominence)
{
    if (!(min_prominence > 0.0)) {
        throw ContractError("min_prominence must be positive");
    }
    const std::vector<double> y = working_signal(scan);
    const double baseline = detail::median(y);
    if (std::abs(baseline - 1.0) > 0.1) {
        throw ContractError("scan is not baseline-normalized (median " + std::to_string(baseline) + ")");
    }
    std::vector<Feature> features = detect_on(scan.x_um, y, baseline, min_prominence);
    if (features.empty()) return features;

    const double shoulder = shoulder_on(scan.x_um, y, features);
    for (auto& f : features) {
        const double centre = interpolate_at(scan.x_um, y, f.center_um);
        f.visibility = (centre - shoulder) / shoulder;
    }
    std::sort(features.begin(), features.end(),
              [](const Feature& a, const Feature& b) { return a.center_um < b.center_um; });
    return features;
}

double shoulder_level(const Interferogram& scan, std::span<const Feature> features)
{
    const std::vector<double> y = working_signal(scan);
    return shoulder_on(scan.x_um, y, features);
}

double visibility(const Interferogram& scan, const Feature& feature, std::span<const Feature> others)
{
    const std::vector<double> y = working_signal(scan);
    if (feature.center_um < scan.x_um.front() || feature.center_um > scan.x_um.back()) {
        throw ContractError("feature centre lies outside the scan");
    }
    std::vector<Feature> excluded(others.begin(), others.end());
    excluded.push_back(feature);
    const double shoulder = shoulder_on(scan.x_um, y, excluded);
    return (interpolate_at(scan.x_um, y, feature.center_um) - shoulder) / shoulder;
}

double midpoint_visibility(const Interferogram& scan, double min_prominence)
{
    const auto features = detect_features(scan, min_prominence);
    if (features.size() < 2) {
        throw ContractError("midpoint visibility needs two outer features");
    }
    Feature mid;
    mid.center_um = 0.5 * (features.front().center_um + features.back().center_um);
    mid.fwhm_um = 0.5 * (features.front().fwhm_um + features.back().fwhm_um);
    return visibility(scan, mid, features);
}

double thickness_from_dips(double delta_x_um, const DispersiveMaterial& material, double lambda0)
{
    if (!(delta_x_um > 0.0)) {
        throw ContractError("dip separation must be positive");
    }
    return delta_x_um / group_index(material, lambda0);
}

FlipPrediction predict_artifact_flip(double omega0, double alpha, double d)
{
    if (!(omega0 > 0.0) || !(alpha > 0.0) || !(d > 0.0)) {
        throw ContractError("artifact flip prediction needs positive omega0, alpha and thickness");
    }
    const double flip = kPi * kPi * kSpeedOfLight / (omega0 * omega0 * alpha * d);
    return {flip / kNano, 2.0 * flip / kNano};
}

ClassifiedFeatures classify_features(std::span<const std::pair<double, Interferogram>> scans,
                                     double min_prominence)
{
    if (scans.empty()) {
        throw ContractError("classification needs at least one scan");
    }
    std::vector<std::vector<Feature>> detected;
    detected.reserve(scans.size());
    std::size_t reference = 0;
    for (std::size_t s = 0; s < scans.size(); ++s) {
        detected.push_back(detect_features(scans[s].second, min_prominence));
        if (detected[s].size() > detected[reference].size()) reference = s;
    }

    // Tracks seeded from the richest scan, extended by nearest-centre matching.
    std::vector<Feature> tracks = detected[reference];
    for (std::size_t s = 0; s < scans.size(); ++s) {
        if (s == reference) continue;
        for (const auto& f : detected[s]) {
            bool matched = false;
            for (const auto& t : tracks) {
                if (std::abs(t.center_um - f.center_um) <= t.fwhm_um) {
                    matched = true;
                    break;
                }
            }
            if (!matched) tracks.push_back(f);
        }
    }
    std::sort(tracks.begin(), tracks.end(),
              [](const Feature& a, const Feature& b) { return a.center_um < b.center_um; });

    std::map<double, int> distinct;
    for (const auto& [lambda0, _] : scans) distinct[lambda0] = 1;

    ClassifiedFeatures out;
    out.features = tracks;
    if (distinct.size() < 3) {
        out.sufficient = false;
        out.status = "insufficient operating wavelengths for classification (need >= 3)";
        for (auto& f : out.features) f.classification = Classification::unknown;
        return out;
    }
    out.sufficient = true;
    out.status = "ok";

    const double sign_gate = 0.5 * min_prominence;
    for (std::size_t k = 0; k < tracks.size(); ++k) {
        bool any_pos = false, any_neg = false, all_neg = true;
        std::vector<Feature> others;
        for (std::size_t o = 0; o < tracks.size(); ++o)
            if (o != k) others.push_back(tracks[o]);
        for (std::size_t s = 0; s < scans.size(); ++s) {
            // Prefer the matched detection in this scan; ties go to the smaller offset.
            const Feature* best = nullptr;
            for (const auto& f : detected[s]) {
                const double off = std::abs(f.center_um - tracks[k].center_um);
                if (off <= tracks[k].fwhm_um && (best == nullptr || off < std::abs(best->center_um - tracks[k].center_um))) {
                    best = &f;
                }
            }
            double v = 0.0;
            if (best != nullptr) {
                v = best->visibility;
            } else {
                v = visibility(scans[s].second, tracks[k], others);
            }
            any_pos = any_pos || v > sign_gate;
            any_neg = any_neg || v < -sign_gate;
            all_neg = all_neg && v < -sign_gate;
        }
        auto& f = out.features[k];
        if (any_pos && any_neg) {
            f.classification = Classification::artifact;
        } else if (all_neg) {
            f.classification = Classification::real;
        } else {
            f.classification = Classification::unknown;
        }
    }
    return out;
}

std::vector<SpectralLine> trace_spectrogram_lines(const Spectrogram& spec, double nominal_slope_nm_per_um,
                                                  double threshold)
{
    const std::size_t nx = spec.x_um.size();
    const std::size_t nl = spec.lambda_nm.size();
    if (nx < 3 || nl < 3 || spec.intensity.size() != nx * nl) {
        throw ContractError("spectrogram too small or inconsistent for line tracing");
    }
    if (!(nominal_slope_nm_per_um > 0.0)) {
        throw ContractError("nominal line slope must be positive");
    }
    const double dl = (spec.lambda_nm.back() - spec.lambda_nm.front()) / static_cast<double>(nl - 1);

    struct Ridge {
        double x, lambda;
    };
    std::vector<Ridge> ridges;
    for (std::size_t ix = 0; ix < nx; ++ix) {
        const double* row = spec.intensity.data() + ix * nl;
        const double peak = *std::max_element(row, row + nl);
        if (!(peak > 0.0)) continue;
        for (std::size_t i = 1; i + 1 < nl; ++i) {
            if (row[i] >= threshold * peak && row[i] >= row[i - 1] && row[i] > row[i + 1]) {
                const double a = row[i - 1], b = row[i], c = row[i + 1];
                const double denom = a - 2.0 * b + c;
                const double off = denom != 0.0 ? std::clamp(0.5 * (a - c) / denom, -0.5, 0.5) : 0.0;
                ridges.push_back({spec.x_um[ix], spec.lambda_nm[i] + off * dl});
            }
        }
    }

    const double tol = 3.0 * dl;
    const auto min_support = std::max<std::size_t>(5, nx / 5);
    std::vector<SpectralLine> lines;
    for (int sign : {+1, -1}) {
        const double slope = sign * nominal_slope_nm_per_um;
        std::vector<double> intercepts;
        intercepts.reserve(ridges.size());
        for (const auto& r : ridges) intercepts.push_back(r.lambda - slope * r.x);
        std::sort(intercepts.begin(), intercepts.end());
        std::vector<bool> used(intercepts.size(), false);

        // Greedy density peaks: ridge points of the opposite slope smear their
        // intercepts thinly, points on a line pile up within a few λ steps.
        while (true) {
            std::size_t best = 0, best_count = 0;
            std::size_t lo = 0, hi = 0, count = 0;
            for (std::size_t i = 0; i < intercepts.size(); ++i) {
                while (hi < intercepts.size() && intercepts[hi] <= intercepts[i] + tol) {
                    if (!used[hi]) ++count;
                    ++hi;
                }
                while (intercepts[lo] < intercepts[i] - tol) {
                    if (!used[lo]) --count;
                    ++lo;
                }
                if (!used[i] && count > best_count) {
                    best_count = count;
                    best = i;
                }
            }
            if (best_count < min_support) break;

            const double b0 = intercepts[best];
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            std::size_t m = 0;
            for (const auto& r : ridges) {
                if (std::abs(r.lambda - (b0 + slope * r.x)) <= tol) {
                    sx += r.x;
                    sy += r.lambda;
                    sxx += r.x * r.x;
                    sxy += r.x * r.lambda;
                    ++m;
                }
            }
            const double det = static_cast<double>(m) * sxx - sx * sx;
            if (m >= min_support && det > 0.0) {
                SpectralLine line;
                line.slope_nm_per_um = (static_cast<double>(m) * sxy - sx * sy) / det;
                line.intercept_nm = (sy - line.slope_nm_per_um * sx) / static_cast<double>(m);
                line.support = m;
                lines.push_back(line);
            }
            for (std::size_t i = 0; i < intercepts.size(); ++i) {
                if (std::abs(intercepts[i] - b0) <= 2.0 * tol) used[i] = true;
            }
        }
    }
    return lines;
}

std::vector<LineCrossing> line_crossings(std::span<const SpectralLine> lines)
{
    std::vector<LineCrossing> out;
    for (std::size_t a = 0; a < lines.size(); ++a) {
        for (std::size_t b = a + 1; b < lines.size(); ++b) {
            const double sa = lines[a].slope_nm_per_um;
            const double sb = lines[b].slope_nm_per_um;
            if (sa * sb >= 0.0) continue;
            LineCrossing c;
            c.x_um = (lines[b].intercept_nm - lines[a].intercept_nm) / (sa - sb);
            c.lambda_nm = lines[a].intercept_nm + sa * c.x_um;
            c.first = a;
            c.second = b;
            out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end(), [](const LineCrossing& l, const LineCrossing& r) {
        return l.x_um != r.x_um ? l.x_um < r.x_um : l.lambda_nm < r.lambda_nm;
    });
    return out;
}

} // namespace cpilab
