#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace cpilab {

/// One Sellmeier term B·λ²/(λ² − C), with C in µm².
struct SellmeierTerm {
    double b = 0.0;
    double c_um2 = 0.0;
};

/// Inclusive vacuum-wavelength range in µm.
struct ValidityRange {
    double min_um = 0.0;
    double max_um = 0.0;

    bool contains(double lambda) const noexcept; // lambda in m
};

/// n and its first three wavelength derivatives (SI: per m, per m², per m³).
struct IndexDerivatives {
    double n = 1.0;
    double dn = 0.0;
    double d2n = 0.0;
    double d3n = 0.0;
};

/// Refractive-index model: a constant index or a Sellmeier sum
/// n²(λ) = 1 + Σ B_i λ²/(λ² − C_i), both restricted to a validity range.
/// Evaluation outside the range throws ValidityError; nothing extrapolates.
class DispersiveMaterial {
public:
    enum class Model { constant, sellmeier };

    static DispersiveMaterial constant(std::string name, double n, ValidityRange validity);
    static DispersiveMaterial sellmeier(std::string name, std::vector<SellmeierTerm> terms,
                                        ValidityRange validity);

    const std::string& name() const noexcept { return name_; }
    Model model() const noexcept { return model_; }
    double constant_index() const noexcept { return n_const_; }
    const std::vector<SellmeierTerm>& terms() const noexcept { return terms_; }
    const ValidityRange& validity() const noexcept { return validity_; }

    /// Closed-form derivatives of n(λ); λ in m.
    IndexDerivatives index_derivatives(double lambda) const;

private:
    DispersiveMaterial() = default;
    void check_range(double lambda) const;

    std::string name_;
    Model model_ = Model::constant;
    double n_const_ = 1.0;
    std::vector<SellmeierTerm> terms_;
    ValidityRange validity_;
};

/// Taylor coefficients of k(ω) = n(ω)·ω/c about ω0.
struct PhaseExpansion {
    double omega0 = 0.0; // rad/s
    double k0 = 0.0;     // rad/m
    double alpha = 0.0;  // s/m, dk/dω
    double beta2 = 0.0;  // s²/m
    double beta3 = 0.0;  // s³/m
};

enum class Parity { full, even, odd };

double refractive_index(const DispersiveMaterial& material, double lambda);
/// n_g = n − λ·dn/dλ.
double group_index(const DispersiveMaterial& material, double lambda);
/// k(ω) in rad/m.
double wavenumber(const DispersiveMaterial& material, double omega);
PhaseExpansion phase_expansion(const DispersiveMaterial& material, double omega0);

/// φ(Ω) = k(ω0 + Ω)·length, or its even/odd part in Ω. The grid must be
/// symmetric about zero.
std::vector<double> spectral_phase(const DispersiveMaterial& material, double length, double omega0,
                                   std::span<const double> omega_grid, Parity parity);

/// Named materials: the built-ins (vacuum, fused_silica, bk7, calcite_o)
/// plus anything added at run time.
class MaterialRegistry {
public:
    static MaterialRegistry with_builtins();

    /// Replaces an existing entry of the same name.
    void add(DispersiveMaterial material);
    bool contains(const std::string& name) const;
    /// Throws ConfigError for unknown names.
    const DispersiveMaterial& at(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, DispersiveMaterial> materials_;
};

} // namespace cpilab
