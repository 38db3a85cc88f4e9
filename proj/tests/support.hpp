#pragma once

// Shared fixture: the reference drive used across the test suite.
// kappa = 1, trap frequency 10 kappa, Lamb-Dicke parameter 0.02, pump
// amplitude 150 kappa, dispersive cooperativity 0.05 (via delta_a = 1e4 kappa)
// and, when scattering is on, resonant cooperativity 10 with dipole
// weight 0.4 along the cavity axis.
#include <cmath>

#include <cavcool/model.hpp>

namespace testsupport {

inline cavcool::SystemParams reference_params(int n_atoms, bool spont) {
    cavcool::SystemParams p;
    p.kappa = 1.0;
    p.nu = 10.0;
    p.eta = 0.02;
    p.eta_p = 150.0;
    p.n_atoms = n_atoms;
    p.delta_a = 1e4;
    p.g = std::sqrt(0.05 * 1e4);          // dispersive cooperativity 0.05
    p.spont_emission = spont;
    p.gamma = spont ? p.g * p.g / 10.0 : 0.0;  // resonant cooperativity 10
    p.c_x = 0.4;
    return p;
}

} // namespace testsupport
