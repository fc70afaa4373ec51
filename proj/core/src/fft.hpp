#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace cpilab::detail {

/// Unnormalized complex DFT of fixed length backed by FFTW.
///
/// `sign = -1` computes Σ x_j e^{-2πi jk/N}, `sign = +1` the conjugate kernel.
/// Planning is serialized; execute() is safe to call concurrently.
class FftPlan {
public:
    FftPlan(std::size_t n, int sign);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t size() const noexcept { return n_; }
    void execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

private:
    std::size_t n_;
    void* plan_;
};

} // namespace cpilab::detail
