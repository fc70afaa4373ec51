#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "cpilab/error.hpp"

namespace cpilab::detail {

inline double median(std::span<const double> v)
{
    if (v.empty()) {
        throw ContractError("median of an empty sample");
    }
    std::vector<double> c(v.begin(), v.end());
    const std::size_t mid = c.size() / 2;
    std::nth_element(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(mid), c.end());
    const double upper = c[mid];
    if (c.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

/// Uniform-step trapezoid.
inline double trapezoid(std::span<const double> f, double step)
{
    if (f.empty()) return 0.0;
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return f.size() == 1 ? 0.0 : s * step;
}

} // namespace cpilab::detail
