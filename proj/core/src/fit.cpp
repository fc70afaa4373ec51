#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cpilab/analysis.hpp"
#include "cpilab/error.hpp"
#include "cpilab/units.hpp"

namespace cpilab {

namespace {

struct CosineModel {
    double amplitude;
    double frequency; // cycles per nm
    double phase;
};

/// Best single-frequency least-squares fit a·cos θ + b·sin θ on a frequency scan.
CosineModel coarse_estimate(std::span<const double> u, std::span<const double> v, double f_min, double f_max)
{
    constexpr int kSteps = 4000;
    CosineModel best{0.0, f_min, 0.0};
    double best_rss = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= kSteps; ++s) {
        const double f = f_min + (f_max - f_min) * s / kSteps;
        double cc = 0, ss = 0, cs = 0, vc = 0, vs = 0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double th = 2.0 * kPi * f * u[i];
            const double c = std::cos(th), sn = std::sin(th);
            cc += c * c;
            ss += sn * sn;
            cs += c * sn;
            vc += v[i] * c;
            vs += v[i] * sn;
        }
        const double det = cc * ss - cs * cs;
        if (std::abs(det) < 1e-12 * (cc * ss + 1e-300)) continue;
        const double a = (vc * ss - vs * cs) / det;
        const double b = (vs * cc - vc * cs) / det;
        double rss = 0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double th = 2.0 * kPi * f * u[i];
            const double r = v[i] - a * std::cos(th) - b * std::sin(th);
            rss += r * r;
        }
        if (rss < best_rss) {
            best_rss = rss;
            best = {std::hypot(a, b), f, std::atan2(-b, a)};
        }
    }
    return best;
}

double residuals(const CosineModel& m, std::span<const double> u, std::span<const double> v, Eigen::VectorXd& r)
{
    double rss = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        r[static_cast<Eigen::Index>(i)] = v[i] - m.amplitude * std::cos(2.0 * kPi * m.frequency * u[i] + m.phase);
        rss += r[static_cast<Eigen::Index>(i)] * r[static_cast<Eigen::Index>(i)];
    }
    return rss;
}

void jacobian(const CosineModel& m, std::span<const double> u, Eigen::MatrixXd& j)
{
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const double th = 2.0 * kPi * m.frequency * u[i] + m.phase;
        const double s = std::sin(th);
        j(row, 0) = std::cos(th);
        j(row, 1) = -m.amplitude * s * 2.0 * kPi * u[i];
        j(row, 2) = -m.amplitude * s;
    }
}

double wrap_phase(double p)
{
    p = std::remainder(p, 2.0 * kPi);
    return p <= -kPi ? p + 2.0 * kPi : p;
}

} // namespace

SweepResult fit_visibility_oscillation(std::span<const SweepPoint> points)
{
    if (points.size() < 4) {
        throw ContractError("oscillation fit needs at least 4 points");
    }
    std::vector<SweepPoint> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const SweepPoint& a, const SweepPoint& b) { return a.lambda0_nm < b.lambda0_nm; });
    for (const auto& p : sorted) {
        if (!std::isfinite(p.lambda0_nm) || !std::isfinite(p.visibility)) {
            throw ContractError("oscillation fit input contains non-finite values");
        }
    }
    const double span = sorted.back().lambda0_nm - sorted.front().lambda0_nm;
    if (!(span > 0.0)) {
        throw ContractError("oscillation fit: all points share one wavelength");
    }

    const std::size_t n = sorted.size();
    const double ref = std::accumulate(sorted.begin(), sorted.end(), 0.0,
                                       [](double s, const SweepPoint& p) { return s + p.lambda0_nm; }) /
                       static_cast<double>(n);
    std::vector<double> u(n), v(n), gaps;
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = sorted[i].lambda0_nm - ref;
        v[i] = sorted[i].visibility;
        if (i > 0 && sorted[i].lambda0_nm > sorted[i - 1].lambda0_nm) {
            gaps.push_back(sorted[i].lambda0_nm - sorted[i - 1].lambda0_nm);
        }
    }
    std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2), gaps.end());
    const double typical_gap = gaps[gaps.size() / 2];

    // Periods from twice the span (half a cycle covered) down to the Nyquist limit.
    const double f_min = 0.5 / span;
    const double f_max = std::max(0.5 / typical_gap, 1.5 * f_min);
    CosineModel m = coarse_estimate(u, v, f_min, f_max);

    // Levenberg-Marquardt on (A, f, φ).
    Eigen::VectorXd r(static_cast<Eigen::Index>(n));
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), 3);
    double rss = residuals(m, u, v, r);
    double mu = 1e-3;
    bool converged = false;
    for (int iter = 0; iter < 200 && !converged; ++iter) {
        jacobian(m, u, jac);
        const Eigen::Matrix3d jtj = jac.transpose() * jac;
        const Eigen::Vector3d jtr = jac.transpose() * r;
        bool improved = false;
        for (int tries = 0; tries < 30 && !improved; ++tries) {
            Eigen::Matrix3d a = jtj;
            a.diagonal() += mu * jtj.diagonal().cwiseMax(1e-30);
            const Eigen::Vector3d step = a.ldlt().solve(jtr);
            CosineModel trial{m.amplitude + step[0], m.frequency + step[1], m.phase + step[2]};
            Eigen::VectorXd rt(static_cast<Eigen::Index>(n));
            const double rss_t = residuals(trial, u, v, rt);
            if (rss_t < rss) {
                const double gain = rss - rss_t;
                m = trial;
                r = rt;
                rss = rss_t;
                mu = std::max(mu * 0.3, 1e-12);
                improved = true;
                converged = gain <= 1e-15 * (rss + 1e-300);
            } else {
                mu *= 10.0;
            }
        }
        if (!improved) break;
    }
    if (!(m.frequency > 0.0)) {
        throw ContractError("oscillation fit diverged to a non-positive frequency");
    }
    if (m.amplitude < 0.0) {
        m.amplitude = -m.amplitude;
        m.phase += kPi;
    }

    SweepResult out;
    out.points = std::move(sorted);
    out.amplitude = m.amplitude;
    out.fitted_period_nm = 1.0 / m.frequency;
    out.fitted_phase_rad = wrap_phase(m.phase);
    out.lambda_ref_nm = ref;
    out.rms_residual = std::sqrt(rss / static_cast<double>(n));
    if (span < 0.5 * out.fitted_period_nm) {
        throw ContractError("sweep spans less than half of the fitted period");
    }

    jacobian(m, u, jac);
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const double sigma2 = n > 3 ? rss / static_cast<double>(n - 3) : 0.0;
    const Eigen::Matrix3d cov = sigma2 * jtj.inverse();
    const double var_f = std::max(cov(1, 1), 0.0);
    out.period_ci_nm = std::sqrt(var_f) / (m.frequency * m.frequency);
    return out;
}

} // namespace cpilab
