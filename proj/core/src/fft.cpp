#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "cpilab/error.hpp"

namespace cpilab::detail {

namespace {
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}
} // namespace

FftPlan::FftPlan(std::size_t n, int sign) : n_(n), plan_(nullptr)
{
    if (n == 0) {
        throw ContractError("FFT length must be positive");
    }
    std::vector<std::complex<double>> a(n), b(n);
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                             reinterpret_cast<fftw_complex*>(b.data()), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan_ == nullptr) {
        throw ContractError("FFTW failed to create a plan");
    }
}

FftPlan::~FftPlan()
{
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void FftPlan::execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const
{
    if (in.size() != n_ || out.size() != n_) {
        throw ContractError("FFT buffer length mismatch");
    }
    // FFTW's new-array interface takes a non-const input; it is not written for out-of-place plans.
    auto* src = const_cast<std::complex<double>*>(in.data());
    fftw_execute_dft(static_cast<fftw_plan>(plan_), reinterpret_cast<fftw_complex*>(src),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

} // namespace cpilab::detail
