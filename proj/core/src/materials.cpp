#include "cpilab/materials.hpp"

#include <cmath>
#include <sstream>

#include "cpilab/error.hpp"
#include "cpilab/grid.hpp"
#include "cpilab/units.hpp"

namespace cpilab {

bool ValidityRange::contains(double lambda) const noexcept
{
    const double um = lambda / kMicro;
    return um >= min_um && um <= max_um;
}

DispersiveMaterial DispersiveMaterial::constant(std::string name, double n, ValidityRange validity)
{
    if (!(n >= 1.0) || !std::isfinite(n)) {
        throw ContractError("material '" + name + "': constant index must be finite and >= 1");
    }
    if (!(validity.min_um > 0.0) || !(validity.max_um >= validity.min_um)) {
        throw ContractError("material '" + name + "': invalid validity range");
    }
    DispersiveMaterial m;
    m.name_ = std::move(name);
    m.model_ = Model::constant;
    m.n_const_ = n;
    m.validity_ = validity;
    return m;
}

DispersiveMaterial DispersiveMaterial::sellmeier(std::string name, std::vector<SellmeierTerm> terms,
                                                 ValidityRange validity)
{
    if (terms.empty()) {
        throw ContractError("material '" + name + "': Sellmeier model needs at least one term");
    }
    if (!(validity.min_um > 0.0) || !(validity.max_um >= validity.min_um)) {
        throw ContractError("material '" + name + "': invalid validity range");
    }
    const double lo = validity.min_um * validity.min_um;
    const double hi = validity.max_um * validity.max_um;
    for (const auto& t : terms) {
        if (!std::isfinite(t.b) || !std::isfinite(t.c_um2)) {
            throw ContractError("material '" + name + "': non-finite Sellmeier coefficient");
        }
        // λ² = C must never be reachable from inside the validity range.
        if (t.b != 0.0 && t.c_um2 >= lo && t.c_um2 <= hi) {
            std::ostringstream msg;
            msg << "material '" << name << "': Sellmeier pole at " << std::sqrt(t.c_um2)
                << " um lies inside the validity range";
            throw ContractError(msg.str());
        }
    }
    DispersiveMaterial m;
    m.name_ = std::move(name);
    m.model_ = Model::sellmeier;
    m.terms_ = std::move(terms);
    m.validity_ = validity;
    return m;
}

void DispersiveMaterial::check_range(double lambda) const
{
    if (!std::isfinite(lambda) || !validity_.contains(lambda)) {
        std::ostringstream msg;
        msg << "material '" << name_ << "': wavelength " << lambda / kMicro
            << " um outside validity range [" << validity_.min_um << ", " << validity_.max_um << "] um";
        throw ValidityError(msg.str());
    }
}

IndexDerivatives DispersiveMaterial::index_derivatives(double lambda) const
{
    check_range(lambda);
    if (model_ == Model::constant) {
        return {n_const_, 0.0, 0.0, 0.0};
    }

    // Work in µm with u = λ²: F(u) = n² = 1 + Σ B + Σ B·C/(u − C).
    const double l = lambda / kMicro;
    const double u = l * l;
    double f = 1.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
    for (const auto& t : terms_) {
        const double q = 1.0 / (u - t.c_um2);
        const double bc = t.b * t.c_um2;
        f += t.b + bc * q;
        f1 -= bc * q * q;
        f2 += 2.0 * bc * q * q * q;
        f3 -= 6.0 * bc * q * q * q * q;
    }
    if (!(f > 1.0) || !std::isfinite(f)) {
        throw ContractError("material '" + name_ + "': index model yields n <= 1");
    }

    // N(λ) = F(λ²) and its λ-derivatives.
    const double n1 = 2.0 * l * f1;
    const double n2 = 4.0 * u * f2 + 2.0 * f1;
    const double n3 = 8.0 * u * l * f3 + 12.0 * l * f2;

    // n = √N.
    IndexDerivatives d;
    d.n = std::sqrt(f);
    d.dn = n1 / (2.0 * d.n);
    d.d2n = (n2 - 2.0 * d.dn * d.dn) / (2.0 * d.n);
    d.d3n = (n3 - 6.0 * d.dn * d.d2n) / (2.0 * d.n);

    // per µm^k -> per m^k
    d.dn /= kMicro;
    d.d2n /= kMicro * kMicro;
    d.d3n /= kMicro * kMicro * kMicro;
    return d;
}

double refractive_index(const DispersiveMaterial& material, double lambda)
{
    return material.index_derivatives(lambda).n;
}

double group_index(const DispersiveMaterial& material, double lambda)
{
    const auto d = material.index_derivatives(lambda);
    return d.n - lambda * d.dn;
}

double wavenumber(const DispersiveMaterial& material, double omega)
{
    if (!(omega > 0.0)) {
        throw ContractError("wavenumber needs a positive angular frequency");
    }
    return refractive_index(material, wavelength_from_omega(omega)) * omega / kSpeedOfLight;
}

PhaseExpansion phase_expansion(const DispersiveMaterial& material, double omega0)
{
    if (!(omega0 > 0.0)) {
        throw ContractError("phase expansion needs a positive operating frequency");
    }
    const double lambda = wavelength_from_omega(omega0);
    const auto d = material.index_derivatives(lambda);
    constexpr double c = kSpeedOfLight;

    PhaseExpansion p;
    p.omega0 = omega0;
    p.k0 = d.n * omega0 / c;
    p.alpha = (d.n - lambda * d.dn) / c;
    p.beta2 = lambda * lambda * lambda * d.d2n / (2.0 * kPi * c * c);
    p.beta3 = -std::pow(lambda, 4) * (3.0 * d.d2n + lambda * d.d3n) / (4.0 * kPi * kPi * c * c * c);
    return p;
}

std::vector<double> spectral_phase(const DispersiveMaterial& material, double length, double omega0,
                                   std::span<const double> omega_grid, Parity parity)
{
    require_symmetric(omega_grid);
    const std::size_t n = omega_grid.size();
    std::vector<double> full(n);
    for (std::size_t i = 0; i < n; ++i) {
        full[i] = wavenumber(material, omega0 + omega_grid[i]) * length;
    }
    if (parity == Parity::full) {
        return full;
    }
    std::vector<double> part(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = full[i];
        const double b = full[n - 1 - i];
        part[i] = parity == Parity::even ? 0.5 * (a + b) : 0.5 * (a - b);
    }
    return part;
}

MaterialRegistry MaterialRegistry::with_builtins()
{
    MaterialRegistry r;
    r.add(DispersiveMaterial::constant("vacuum", 1.0, {0.01, 100.0}));
    // Malitson (1965)
    r.add(DispersiveMaterial::sellmeier("fused_silica",
                                        {{0.6961663, 0.0684043 * 0.0684043},
                                         {0.4079426, 0.1162414 * 0.1162414},
                                         {0.8974794, 9.896161 * 9.896161}},
                                        {0.21, 3.71}));
    // Schott N-BK7 catalogue
    r.add(DispersiveMaterial::sellmeier("bk7",
                                        {{1.03961212, 0.00600069867},
                                         {0.231792344, 0.0200179144},
                                         {1.01046945, 103.560653}},
                                        {0.3, 2.5}));
    // Ghosh (1999), ordinary ray; the constant 1.73358749 enters as a C = 0 term.
    r.add(DispersiveMaterial::sellmeier("calcite_o",
                                        {{0.73358749, 0.0},
                                         {0.96464345, 1.94325203e-2},
                                         {1.82831454, 120.0}},
                                        {0.204, 2.172}));
    return r;
}

void MaterialRegistry::add(DispersiveMaterial material)
{
    const std::string key = material.name();
    materials_.insert_or_assign(key, std::move(material));
}

bool MaterialRegistry::contains(const std::string& name) const
{
    return materials_.contains(name);
}

const DispersiveMaterial& MaterialRegistry::at(const std::string& name) const
{
    auto it = materials_.find(name);
    if (it == materials_.end()) {
        throw ConfigError("unknown material '" + name + "'");
    }
    return it->second;
}

std::vector<std::string> MaterialRegistry::names() const
{
    std::vector<std::string> out;
    out.reserve(materials_.size());
    for (const auto& [name, _] : materials_) {
        out.push_back(name);
    }
    return out;
}

} // namespace cpilab
