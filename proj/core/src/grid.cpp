#include "cpilab/grid.hpp"

#include <cmath>
#include <string>

#include "cpilab/error.hpp"

namespace cpilab {

FrequencyGrid::FrequencyGrid(std::size_t points, double half_width)
{
    if (points < 3 || points % 2 == 0) {
        throw ContractError("frequency grid needs an odd point count >= 3, got " + std::to_string(points));
    }
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw ContractError("frequency grid half width must be positive");
    }
    const auto m = static_cast<long>(points / 2);
    half_width_ = half_width;
    step_ = half_width / static_cast<double>(m);
    offsets_.resize(points);
    for (long k = -m; k <= m; ++k) {
        offsets_[static_cast<std::size_t>(k + m)] = static_cast<double>(k) * step_;
    }
}

bool FrequencyGrid::same_as(const FrequencyGrid& other) const noexcept
{
    return size() == other.size() && step_ == other.step_;
}

double FrequencyGrid::integrate(std::span<const double> f) const
{
    if (f.size() != size()) {
        throw ContractError("integrand length does not match frequency grid");
    }
    double sum = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        sum += f[i];
    }
    return sum * step_;
}

void require_symmetric(std::span<const double> offsets)
{
    const std::size_t n = offsets.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (offsets[i] != -offsets[n - 1 - i]) {
            throw ContractError("frequency grid is not symmetric about zero");
        }
    }
}

} // namespace cpilab
