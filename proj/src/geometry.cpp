#include "cavcool/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cavcool/errors.hpp"

namespace cavcool {

namespace {

constexpr double pi = std::numbers::pi;

// Single formula path shared by base and optimized lattices so that the two
// agree bit-for-bit at step = 0.
std::vector<double> lattice_phases(int n_atoms, int winding, int step, int step_count) {
    const double offset = (pi / 2.0) * static_cast<double>(step) / step_count;
    const double increment =
        (static_cast<double>(step_count - step) / step_count) * pi / (n_atoms + 1) +
        2.0 * pi * winding;
    std::vector<double> phases(static_cast<size_t>(n_atoms));
    for (int i = 1; i <= n_atoms; ++i)
        phases[static_cast<size_t>(i - 1)] = offset + i * increment;
    return phases;
}

ArrayGeometry from_phases(std::vector<double> phases, LatticeProvenance prov) {
    ArrayGeometry g;
    g.provenance = prov;
    g.phase = std::move(phases);
    const size_t n = g.phase.size();
    g.s.resize(n);
    g.c.resize(n);
    g.half_sin.resize(n);
    g.half_cos.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const double th = g.phase[i];
        if (!std::isfinite(th))
            throw InvalidStep("lattice phase is not finite");
        g.s[i] = std::sin(th);
        g.c[i] = std::cos(th);
        // winding is physical spacing only; the dynamics sees phases mod 2*pi
        double m = std::fmod(th, 2.0 * pi);
        if (m < 0.0) m += 2.0 * pi;
        g.half_sin[i] = std::sin(m / 2.0);
        g.half_cos[i] = std::cos(m / 2.0);
    }
    return g;
}

} // namespace

bool ArrayGeometry::is_base_spacing() const {
    return provenance.kind == LatticeProvenance::Kind::Base ||
           (provenance.kind == LatticeProvenance::Kind::Optimized && provenance.step == 0);
}

double ArrayGeometry::d_over_lambda() const {
    using Kind = LatticeProvenance::Kind;
    if (provenance.kind == Kind::Explicit)
        return std::numeric_limits<double>::quiet_NaN();
    const double frac =
        provenance.kind == Kind::Base
            ? 1.0
            : static_cast<double>(provenance.step_count - provenance.step) / provenance.step_count;
    return provenance.winding / 2.0 + frac / (4.0 * (n_atoms() + 1));
}

ArrayGeometry base_lattice(int n_atoms, int winding) {
    if (n_atoms < 1)
        throw DimensionMismatch("base_lattice: n_atoms must be >= 1");
    LatticeProvenance prov;
    prov.kind = LatticeProvenance::Kind::Base;
    prov.winding = winding;
    return from_phases(lattice_phases(n_atoms, winding, 0, 1), prov);
}

ArrayGeometry optimized_lattice(int n_atoms, int winding, int step, int step_count) {
    if (n_atoms < 1)
        throw DimensionMismatch("optimized_lattice: n_atoms must be >= 1");
    if (step_count < 1 || step < 0 || step >= step_count)
        throw InvalidStep("optimized_lattice: require 0 <= step < step_count");
    LatticeProvenance prov;
    prov.kind = LatticeProvenance::Kind::Optimized;
    prov.winding = winding;
    prov.step = step;
    prov.step_count = step_count;
    return from_phases(lattice_phases(n_atoms, winding, step, step_count), prov);
}

ArrayGeometry explicit_lattice(const std::vector<double>& phases) {
    if (phases.empty())
        throw DimensionMismatch("explicit_lattice: need at least one phase");
    LatticeProvenance prov;
    prov.kind = LatticeProvenance::Kind::Explicit;
    return from_phases(phases, prov);
}

} // namespace cavcool
