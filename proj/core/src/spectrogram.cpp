#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "cpilab/engine.hpp"
#include "cpilab/error.hpp"
#include "cpilab/units.hpp"
#include "fft.hpp"
#include "stats.hpp"

namespace cpilab {

namespace {

/// Baseband (carrier ω_c removed) fields of the pulse pair delayed by `shift`.
class PulseFields {
public:
    PulseFields(const ChirpedPulsePair& pair)
        : omega_c_(pair.omega_c()),
          beta_(pair.beta),
          tau_rel_(pair.tau_rel),
          ac_(2.0 * std::numbers::ln2 / (pair.stretched_chirped() * pair.stretched_chirped())),
          aa_(2.0 * std::numbers::ln2 / (pair.stretched_antichirped() * pair.stretched_antichirped()))
    {
    }

    /// Instantaneous frequency ω_c + β(t − shift).
    Complex chirped(double t, double shift) const
    {
        const double u = t - shift;
        return std::polar(std::exp(-ac_ * u * u), omega_c_ * shift - 0.5 * beta_ * u * u);
    }

    /// Instantaneous frequency ω_c − β(t − shift − τ_rel).
    Complex antichirped(double t, double shift) const
    {
        const double s = shift + tau_rel_;
        const double u = t - s;
        return std::polar(std::exp(-aa_ * u * u), omega_c_ * s + 0.5 * beta_ * u * u);
    }

private:
    double omega_c_;
    double beta_;
    double tau_rel_;
    double ac_;
    double aa_;
};

std::size_t next_pow2(std::size_t n)
{
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void require_increasing(std::span<const double> v, const char* what)
{
    if (v.empty()) {
        throw ContractError(std::string(what) + " axis is empty");
    }
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) {
            throw ContractError(std::string(what) + " axis must be strictly increasing");
        }
    }
}

} // namespace

Spectrogram sfg_spectrogram(const ChirpedPulsePair& pair, const LayerStack& stack, std::span<const double> x_um,
                            std::span<const double> lambda_nm, const SpectrogramOptions& options)
{
    pair.validate();
    stack.validate();
    require_increasing(x_um, "delay");
    require_increasing(lambda_nm, "SFG wavelength");
    if (!(options.window_factor > 0.0) || options.min_samples < 2) {
        throw ContractError("spectrogram window factor and sample count must be positive");
    }

    const double omega0 = operating_frequency(pair);
    const double omega_c = pair.omega_c();
    const double window = options.window_factor * std::max(pair.stretched_chirped(), pair.stretched_antichirped());
    std::size_t n = next_pow2(options.min_samples);
    while (window / static_cast<double>(n) > 0.25 * pair.tl_duration) n <<= 1;
    const double dt = window / static_cast<double>(n);
    const double nyquist = kPi / dt;
    if (0.5 * pair.beta * window >= 0.5 * nyquist) {
        throw ContractError("spectrogram time grid undersamples the chirp across the window");
    }

    const auto group = stack_group_delays(stack, omega0);
    const double max_delay = std::max(std::abs(delay_from_path(x_um.front() * kMicro)),
                                      std::abs(delay_from_path(x_um.back() * kMicro))) +
                             group.back() + std::abs(pair.tau_rel);
    if (max_delay > 0.25 * window) {
        throw ContractError("delays exceed a quarter of the spectrogram time window");
    }

    const double d_omega = 2.0 * kPi / window;
    auto bin_omega = [&](std::size_t k) {
        const auto kk = static_cast<long>(k);
        const auto signed_k = k < n / 2 ? kk : kk - static_cast<long>(n);
        return static_cast<double>(signed_k) * d_omega;
    };

    const PulseFields fields(pair);
    std::vector<double> t(n);
    for (std::size_t j = 0; j < n; ++j) {
        t[j] = (static_cast<double>(j) - static_cast<double>(n / 2)) * dt;
    }

    // Sample arm: both pulses filtered by H(ω).
    const detail::FftPlan to_freq(n, +1);
    const detail::FftPlan to_time(n, -1);
    const double band = std::min(12.0 * std::max(pair.bandwidth_chirped(), pair.bandwidth_antichirped()), nyquist);
    std::vector<Complex> response(n, Complex{});
    for (std::size_t k = 0; k < n; ++k) {
        const double om = bin_omega(k);
        if (std::abs(om) > band) continue;
        Complex h = stack_response(stack, omega_c + om);
        if (stack.bulk) {
            h *= std::polar(1.0, bulk_phase(*stack.bulk, omega_c + om, omega0));
        }
        response[k] = h / static_cast<double>(n);
    }
    std::vector<Complex> tmp(n), spec(n), sample_c(n), sample_a(n);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = fields.chirped(t[j], 0.0);
    to_freq.execute(tmp, spec);
    for (std::size_t k = 0; k < n; ++k) spec[k] *= response[k];
    to_time.execute(spec, sample_c);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = fields.antichirped(t[j], 0.0);
    to_freq.execute(tmp, spec);
    for (std::size_t k = 0; k < n; ++k) spec[k] *= response[k];
    to_time.execute(spec, sample_a);

    // Wavelength grid -> fractional FFT bin of the SFG baseband.
    const std::size_t nl = lambda_nm.size();
    std::vector<std::size_t> lo(nl), hi(nl);
    std::vector<double> frac(nl);
    for (std::size_t i = 0; i < nl; ++i) {
        const double om = omega_from_wavelength(lambda_nm[i] * kNano) - 2.0 * omega_c;
        if (std::abs(om) > 0.9 * nyquist) {
            throw ContractError("SFG wavelength grid extends beyond the representable band");
        }
        const double f = om / d_omega;
        const double fl = std::floor(f);
        frac[i] = f - fl;
        const auto base = static_cast<long>(fl);
        const auto ln = static_cast<long>(n);
        lo[i] = static_cast<std::size_t>(((base % ln) + ln) % ln);
        hi[i] = (lo[i] + 1) % n;
    }

    Spectrogram out;
    out.x_um.assign(x_um.begin(), x_um.end());
    out.lambda_nm.assign(lambda_nm.begin(), lambda_nm.end());
    out.omega0 = omega0;
    out.intensity.resize(x_um.size() * nl);
    out.background.resize(x_um.size() * nl);

    std::vector<Complex> p(n), q(n), pf(n), qf(n);
    std::vector<double> power(n), incoherent(n);
    for (std::size_t ix = 0; ix < x_um.size(); ++ix) {
        const double tau = delay_from_path(x_um[ix] * kMicro);
        for (std::size_t j = 0; j < n; ++j) {
            p[j] = sample_c[j] * fields.antichirped(t[j], tau);
            q[j] = sample_a[j] * fields.chirped(t[j], tau);
        }
        to_freq.execute(p, pf);
        to_freq.execute(q, qf);
        for (std::size_t k = 0; k < n; ++k) {
            power[k] = std::norm(pf[k] - qf[k]);
            incoherent[k] = std::norm(pf[k]) + std::norm(qf[k]);
        }
        double* row = out.intensity.data() + ix * nl;
        double* bg = out.background.data() + ix * nl;
        for (std::size_t i = 0; i < nl; ++i) {
            row[i] = (1.0 - frac[i]) * power[lo[i]] + frac[i] * power[hi[i]];
            bg[i] = (1.0 - frac[i]) * incoherent[lo[i]] + frac[i] * incoherent[hi[i]];
        }
    }

    const double peak = *std::max_element(out.intensity.begin(), out.intensity.end());
    if (peak > 0.0) {
        for (double& v : out.intensity) v /= peak;
        for (double& v : out.background) v /= peak;
    }
    return out;
}

Interferogram integrate_filtered(const Spectrogram& spec, double center_omega, double fwhm_nm)
{
    const auto& lam = spec.lambda_nm;
    const std::size_t nl = lam.size();
    if (nl < 2 || spec.x_um.empty() || spec.intensity.size() != nl * spec.x_um.size()) {
        throw ContractError("spectrogram shape is inconsistent");
    }
    if (!(fwhm_nm > 0.0) || !(center_omega > 0.0)) {
        throw ContractError("filter needs a positive centre frequency and FWHM");
    }
    const double step = (lam.back() - lam.front()) / static_cast<double>(nl - 1);
    auto in_grid = [&](double c) { return c - fwhm_nm >= lam.front() && c + fwhm_nm <= lam.back(); };

    const double center_nm = wavelength_from_omega(center_omega) / kNano;
    if (!in_grid(center_nm)) {
        throw ContractError("filter band lies outside the spectrogram wavelength grid");
    }
    const bool has_background = spec.background.size() == spec.intensity.size();
    const double ref_nm = has_background ? wavelength_from_omega(2.0 * spec.omega0) / kNano : center_nm;
    if (has_background && !in_grid(ref_nm)) {
        throw ContractError("operating-point reference band lies outside the spectrogram wavelength grid");
    }

    const double a = 4.0 * std::numbers::ln2 / (fwhm_nm * fwhm_nm);
    std::vector<double> w(nl), w_ref(nl);
    for (std::size_t i = 0; i < nl; ++i) {
        w[i] = std::exp(-a * (lam[i] - center_nm) * (lam[i] - center_nm));
        w_ref[i] = std::exp(-a * (lam[i] - ref_nm) * (lam[i] - ref_nm));
    }

    Interferogram out;
    out.kind = ScanKind::cpi;
    out.omega0 = 0.5 * center_omega;
    out.x_um = spec.x_um;
    out.signal.resize(spec.x_um.size());
    std::vector<double> row(nl);
    for (std::size_t ix = 0; ix < spec.x_um.size(); ++ix) {
        const double* s = spec.intensity.data() + ix * nl;
        for (std::size_t i = 0; i < nl; ++i) row[i] = w[i] * s[i];
        double value = detail::trapezoid(row, step);
        if (has_background) {
            const double* b = spec.background.data() + ix * nl;
            for (std::size_t i = 0; i < nl; ++i) row[i] = w_ref[i] * b[i];
            const double ref = detail::trapezoid(row, step);
            if (!(ref > 0.0)) {
                throw ContractError("no cross-correlation energy at the operating point");
            }
            value /= ref;
        }
        out.signal[ix] = value;
    }
    if (!has_background) {
        const double m = detail::median(out.signal);
        if (!(m > 0.0)) {
            throw ContractError("filtered signal has no baseline to normalize by");
        }
        for (double& v : out.signal) v /= m;
    }
    return out;
}

} // namespace cpilab
