#pragma once

#include <vector>

namespace cavcool {

struct LatticeProvenance {
    enum class Kind { Base, Optimized, Explicit };
    Kind kind = Kind::Base;
    int winding = 0;     // extra whole wavelengths of pump phase between neighbours
    int step = 0;        // shift index l
    int step_count = 1;  // shift grid size L
};

// Trap positions enter the dynamics only through the pump phase seen by each
// atom.  phase[i] = 2 k_c x_i^0; the half-angle sine/cosine (of k_c x_i^0) are
// kept separately because the spontaneous-emission channels depend on them.
struct ArrayGeometry {
    std::vector<double> phase;     // 2 k_c x_i^0
    std::vector<double> s;         // sin(phase)   - coupling weight
    std::vector<double> c;         // cos(phase)   - trap-frequency weight
    std::vector<double> half_sin;  // sin(k_c x_i^0), phase reduced mod 2*pi
    std::vector<double> half_cos;  // cos(k_c x_i^0), phase reduced mod 2*pi
    LatticeProvenance provenance;

    int n_atoms() const { return static_cast<int>(phase.size()); }
    bool is_base_spacing() const;   // base lattice, or optimized lattice at step 0
    double d_over_lambda() const;   // physical spacing; NaN for explicit phases
};

// Uniform array with phase increment pi/(N+1) (+ full turns for winding).
ArrayGeometry base_lattice(int n_atoms, int winding = 0);

// Shifted/compressed array: phase_i = (l/L)(pi/2) + i*((L-l)/L * pi/(N+1) + 2*pi*winding).
ArrayGeometry optimized_lattice(int n_atoms, int winding, int step, int step_count);

// Arbitrary user-supplied phases 2 k_c x_i^0.
ArrayGeometry explicit_lattice(const std::vector<double>& phases);

} // namespace cavcool
