#include "cpilab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "cpilab/error.hpp"
#include "cpilab/units.hpp"
#include "fft.hpp"
#include "stats.hpp"

namespace cpilab {

const char* to_string(ScanKind kind)
{
    switch (kind) {
    case ScanKind::cpi: return "CPI";
    case ScanKind::wli: return "WLI";
    case ScanKind::qoct: return "QOCT";
    }
    return "CPI";
}

ScanKind scan_kind_from_string(const std::string& s)
{
    if (s == "CPI") return ScanKind::cpi;
    if (s == "WLI") return ScanKind::wli;
    if (s == "QOCT") return ScanKind::qoct;
    throw FormatError("unknown scan kind '" + s + "'");
}

std::vector<double> delay_axis(double start_um, double stop_um, double step_um)
{
    if (!(step_um > 0.0) || !std::isfinite(step_um)) {
        throw ContractError("delay step must be positive");
    }
    if (!(stop_um >= start_um)) {
        throw ContractError("delay axis stop lies before start");
    }
    const auto n = static_cast<std::size_t>(std::floor((stop_um - start_um) / step_um + 1e-9)) + 1;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = start_um + static_cast<double>(i) * step_um;
    }
    return x;
}

namespace {

/// step · Σ_k w_k f_k e^{−iΩ_k t}, trapezoid weights w. The phasor is advanced by
/// rotation and re-anchored every 256 nodes to bound accumulated rounding.
Complex fourier_sum(std::span<const Complex> f, const FrequencyGrid& grid, double t)
{
    const std::size_t n = f.size();
    const double rc = std::cos(grid.step() * t);
    const double rs = -std::sin(grid.step() * t);
    double acc_re = 0.0;
    double acc_im = 0.0;
    double pr = 0.0;
    double pi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 256 == 0) {
            const double a = -grid[i] * t;
            pr = std::cos(a);
            pi = std::sin(a);
        }
        double fr = f[i].real();
        double fi = f[i].imag();
        if (i == 0 || i + 1 == n) {
            fr *= 0.5;
            fi *= 0.5;
        }
        acc_re += fr * pr - fi * pi;
        acc_im += fr * pi + fi * pr;
        const double nr = pr * rc - pi * rs;
        pi = pr * rs + pi * rc;
        pr = nr;
    }
    return {acc_re * grid.step(), acc_im * grid.step()};
}

void require_same_grid(const FrequencyGrid& a, double omega_a, const TransferFunction& h)
{
    if (!a.same_as(h.grid) || omega_a != h.omega0) {
        throw ContractError("spectrum and transfer function are sampled on different grids");
    }
}

void require_axis(std::span<const double> x_um)
{
    if (x_um.empty()) {
        throw ContractError("delay axis is empty");
    }
    for (double x : x_um) {
        if (!std::isfinite(x)) throw ContractError("delay axis contains non-finite values");
    }
}

Interferogram cross_kernel_scan(const EffectiveSpectrum& lambda, const TransferFunction& h,
                                std::span<const double> x_um, ScanKind kind)
{
    require_same_grid(lambda.grid, lambda.omega0, h);
    require_axis(x_um);
    const std::size_t n = h.grid.size();

    std::vector<Complex> g(n);
    std::vector<double> dc(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = lambda.lambda[i] * h.h[i] * std::conj(h.h[h.grid.mirror(i)]);
        dc[i] = lambda.lambda[i] * std::norm(h.h[i]);
    }
    const double base = h.grid.integrate(dc);
    if (!(base > 0.0)) {
        throw ContractError("interferogram normalization vanishes (zero spectrum or reflectance)");
    }

    Interferogram out;
    out.kind = kind;
    out.omega0 = lambda.omega0;
    out.x_um.assign(x_um.begin(), x_um.end());
    out.signal.resize(x_um.size());
    for (std::size_t j = 0; j < x_um.size(); ++j) {
        const double tau = delay_from_path(x_um[j] * kMicro);
        const Complex cross = fourier_sum(g, h.grid, 2.0 * tau);
        out.signal[j] = std::max(0.0, (base - cross.real()) / base);
    }
    return out;
}

} // namespace

Interferogram cpi_interferogram(const EffectiveSpectrum& lambda, const TransferFunction& h,
                                std::span<const double> x_um)
{
    return cross_kernel_scan(lambda, h, x_um, ScanKind::cpi);
}

Interferogram qoct_interferogram(const EffectiveSpectrum& lambda, const TransferFunction& h,
                                 std::span<const double> x_um)
{
    if (lambda.mode != EffectiveSpectrum::Mode::qoct_given) {
        throw ContractError("Q-OCT interferogram needs an entangled-photon spectrum");
    }
    return cross_kernel_scan(lambda, h, x_um, ScanKind::qoct);
}

Interferogram wli_interferogram(const SourceSpectrum& source, const TransferFunction& h,
                                std::span<const double> x_um)
{
    require_same_grid(source.grid, source.omega0, h);
    require_axis(x_um);
    if (x_um.size() > 1) {
        const double step = std::abs(x_um[1] - x_um[0]) * kMicro;
        const double lambda0 = wavelength_from_omega(source.omega0);
        if (step > lambda0 / 8.0) {
            throw ContractError("WLI delay step exceeds lambda0/8 and undersamples the carrier fringes");
        }
    }
    const std::size_t n = h.grid.size();
    std::vector<Complex> f(n);
    std::vector<double> dc(n);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = source.intensity[i] * h.h[i];
        dc[i] = source.intensity[i] * (1.0 + std::norm(h.h[i]));
    }
    const double base = h.grid.integrate(dc);
    if (!(base > 0.0)) {
        throw ContractError("interferogram normalization vanishes (zero spectrum)");
    }

    Interferogram out;
    out.kind = ScanKind::wli;
    out.omega0 = source.omega0;
    out.x_um.assign(x_um.begin(), x_um.end());
    out.signal.resize(x_um.size());
    for (std::size_t j = 0; j < x_um.size(); ++j) {
        const double tau = delay_from_path(x_um[j] * kMicro);
        const Complex cross = fourier_sum(f, h.grid, tau) * std::polar(1.0, -source.omega0 * tau);
        out.signal[j] = std::max(0.0, (base + 2.0 * cross.real()) / base);
    }
    return out;
}

std::vector<double> analytic_envelope(std::span<const double> signal)
{
    const std::size_t n = signal.size();
    if (n < 4) {
        throw ContractError("envelope extraction needs at least 4 samples");
    }
    const double baseline = detail::median(signal);
    std::vector<Complex> buf(n), spec(n);
    for (std::size_t i = 0; i < n; ++i) {
        buf[i] = signal[i] - baseline;
    }
    detail::FftPlan(n, -1).execute(buf, spec);
    // One-sided spectrum: keep DC (and Nyquist for even n), double positive bins.
    const std::size_t half = (n - 1) / 2;
    for (std::size_t k = 1; k <= half; ++k) spec[k] *= 2.0;
    for (std::size_t k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;
    detail::FftPlan(n, +1).execute(spec, buf);

    std::vector<double> env(n);
    for (std::size_t i = 0; i < n; ++i) {
        env[i] = baseline + std::abs(buf[i]) / static_cast<double>(n);
    }
    return env;
}

} // namespace cpilab
