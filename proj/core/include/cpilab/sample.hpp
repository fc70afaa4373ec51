#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "cpilab/grid.hpp"
#include "cpilab/materials.hpp"

namespace cpilab {

using Complex = std::complex<double>;

/// A reflecting surface with complex amplitude reflectance r, |r| <= 1.
struct Interface {
    Complex r;
};

/// Layer between two consecutive interfaces.
struct Gap {
    double thickness = 0.0; // m
    DispersiveMaterial material;
};

/// Which part of a bulk element's phase k(ω)·L is kept.
enum class BulkPhase {
    full,       ///< k(ω)·L
    dispersive, ///< k(ω)·L − k(ω0)·L − α·L·(ω − ω0); the reference arm absorbs the delay
};

/// Unbalanced bulk material in the sample arm.
struct BulkElement {
    DispersiveMaterial material;
    double length = 0.0; // m
    int passes = 1;
    BulkPhase phase = BulkPhase::dispersive;
};

/// Ordered reflecting interfaces separated by gaps (front surface first),
/// plus an optional bulk element.
struct LayerStack {
    std::vector<Interface> interfaces;
    std::vector<Gap> gaps; // interfaces.size() - 1 entries
    std::optional<BulkElement> bulk;

    /// Throws ContractError for |r| > 1, negative thickness or a gap-count mismatch.
    void validate() const;
};

/// H(Ω) sampled on a symmetric grid about omega0.
struct TransferFunction {
    double omega0 = 0.0;
    FrequencyGrid grid;
    std::vector<Complex> h;
};

/// Single-bounce reflection H(ω) = Σ_j r_j·exp(i·2·Σ_{m<j} k_m(ω)·d_m), bulk excluded.
Complex stack_response(const LayerStack& stack, double omega);

/// Round-trip group delay of each interface at omega0, s.
std::vector<double> stack_group_delays(const LayerStack& stack, double omega0);

/// Phase added by a bulk element at absolute frequency omega, with omega0 the
/// expansion point used by BulkPhase::dispersive.
double bulk_phase(const BulkElement& bulk, double omega, double omega0);

/// Samples the stack response on the grid and applies the bulk element, if any.
TransferFunction transfer_function(const LayerStack& stack, const FrequencyGrid& grid, double omega0);

/// H'(Ω) = H(Ω)·exp(i·passes·k(ω0+Ω)·length), or the dispersive remainder of that phase.
TransferFunction with_bulk_dispersion(TransferFunction h, const DispersiveMaterial& material, double length,
                                      int passes = 1, BulkPhase phase = BulkPhase::full);

} // namespace cpilab
