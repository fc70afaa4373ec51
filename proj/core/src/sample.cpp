#include "cpilab/sample.hpp"

#include <cmath>
#include <string>

#include "cpilab/error.hpp"

namespace cpilab {

void LayerStack::validate() const
{
    if (interfaces.empty()) {
        throw ContractError("layer stack has no interfaces");
    }
    if (gaps.size() + 1 != interfaces.size()) {
        throw ContractError("layer stack needs " + std::to_string(interfaces.size() - 1) + " gaps, got " +
                            std::to_string(gaps.size()));
    }
    for (const auto& i : interfaces) {
        if (!(std::abs(i.r) <= 1.0)) {
            throw ContractError("interface reflectance magnitude exceeds 1");
        }
    }
    for (const auto& g : gaps) {
        if (!(g.thickness >= 0.0) || !std::isfinite(g.thickness)) {
            throw ContractError("gap thickness must be finite and >= 0");
        }
    }
    if (bulk) {
        if (!(bulk->length >= 0.0) || bulk->passes < 1) {
            throw ContractError("bulk element needs length >= 0 and passes >= 1");
        }
    }
}

Complex stack_response(const LayerStack& stack, double omega)
{
    Complex h = stack.interfaces.front().r;
    double phase = 0.0;
    for (std::size_t j = 1; j < stack.interfaces.size(); ++j) {
        const auto& gap = stack.gaps[j - 1];
        if (gap.thickness != 0.0) {
            phase += 2.0 * wavenumber(gap.material, omega) * gap.thickness;
        }
        h += stack.interfaces[j].r * std::polar(1.0, phase);
    }
    return h;
}

std::vector<double> stack_group_delays(const LayerStack& stack, double omega0)
{
    std::vector<double> delays(stack.interfaces.size(), 0.0);
    double tau = 0.0;
    for (std::size_t j = 1; j < stack.interfaces.size(); ++j) {
        const auto& gap = stack.gaps[j - 1];
        tau += 2.0 * phase_expansion(gap.material, omega0).alpha * gap.thickness;
        delays[j] = tau;
    }
    return delays;
}

double bulk_phase(const BulkElement& bulk, double omega, double omega0)
{
    const double scale = static_cast<double>(bulk.passes) * bulk.length;
    if (scale == 0.0) {
        return 0.0;
    }
    const double k = wavenumber(bulk.material, omega);
    if (bulk.phase == BulkPhase::full) {
        return k * scale;
    }
    const auto p = phase_expansion(bulk.material, omega0);
    return (k - p.k0 - p.alpha * (omega - omega0)) * scale;
}

TransferFunction transfer_function(const LayerStack& stack, const FrequencyGrid& grid, double omega0)
{
    stack.validate();
    TransferFunction tf;
    tf.omega0 = omega0;
    tf.grid = grid;
    tf.h.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        tf.h[i] = stack_response(stack, omega0 + grid[i]);
    }
    if (stack.bulk) {
        tf = with_bulk_dispersion(std::move(tf), stack.bulk->material, stack.bulk->length, stack.bulk->passes,
                                  stack.bulk->phase);
    }
    return tf;
}

TransferFunction with_bulk_dispersion(TransferFunction h, const DispersiveMaterial& material, double length,
                                      int passes, BulkPhase phase)
{
    if (passes < 1 || !(length >= 0.0)) {
        throw ContractError("bulk dispersion needs length >= 0 and passes >= 1");
    }
    if (length == 0.0) {
        return h;
    }
    const BulkElement bulk{material, length, passes, phase};
    for (std::size_t i = 0; i < h.h.size(); ++i) {
        h.h[i] *= std::polar(1.0, bulk_phase(bulk, h.omega0 + h.grid[i], h.omega0));
    }
    return h;
}

} // namespace cpilab
