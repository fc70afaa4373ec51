#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cpilab {

/// Uniform angular-frequency offsets Ω_k = k·step, k = -M..M, about a reference ω0.
///
/// The point count is always odd so that Ω = 0 is a node and Ω_k = -Ω_{-k}
/// holds bitwise. Halving the step keeps every existing node bit-identical.
class FrequencyGrid {
public:
    FrequencyGrid() = default;
    /// `points` must be odd and >= 3; `half_width` > 0 (rad/s).
    FrequencyGrid(std::size_t points, double half_width);

    std::size_t size() const noexcept { return offsets_.size(); }
    std::size_t half_count() const noexcept { return offsets_.size() / 2; }
    double step() const noexcept { return step_; }
    double half_width() const noexcept { return half_width_; }
    double operator[](std::size_t i) const noexcept { return offsets_[i]; }
    std::span<const double> offsets() const noexcept { return offsets_; }

    /// Index of -Ω_i.
    std::size_t mirror(std::size_t i) const noexcept { return size() - 1 - i; }

    /// Same points, same half width (bitwise).
    bool same_as(const FrequencyGrid& other) const noexcept;

    /// Uniform trapezoid rule over the grid.
    double integrate(std::span<const double> f) const;

private:
    double half_width_ = 0.0;
    double step_ = 0.0;
    std::vector<double> offsets_;
};

/// Throws ContractError unless the grid offsets are exactly symmetric about zero.
void require_symmetric(std::span<const double> offsets);

} // namespace cpilab
