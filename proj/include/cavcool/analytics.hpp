#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavcool/model.hpp"

namespace cavcool {

// Cavity filter response sampled at the red (s_minus) and blue (s_plus)
// sidebands of a motional frequency omega.  Cooling needs s_minus > s_plus.
struct SidebandSpectra {
    double s_minus = 0.0;
    double s_plus = 0.0;
};

SidebandSpectra sideband_spectra(const DerivedModel& model, double omega);

// Closed-form picture of the collective dynamics at base spacing: one bright
// mode damped directly by the cavity plus N-1 dark modes that cool only
// through their weak coupling to it.
struct CollectiveModel {
    double eps_bright = 0.0;           // bright-mode/cavity coupling
    double gamma_bright = 0.0;         // bright-mode cooling rate
    double n_bright_inf = 0.0;         // bright-mode steady occupation
    std::vector<double> omega_dark;    // dark-mode frequencies (j = 1..N-1)
    std::vector<double> beta_dark;     // bright/dark mixing amplitudes
    std::vector<double> gamma_dark;    // dark-mode cooling rates
    double gamma_dark_min = 0.0;
};

CollectiveModel collective_predictions(const DerivedModel& model);

// Cooling rate each atom would have if it were alone in the cavity.
std::vector<double> independent_rates(const DerivedModel& model);

struct CoolingRegime {
    std::string label;        // "independent" or "collective"
    double crossover_n = 0.0; // array size where the regimes meet
    double suppression = 0.0; // rate reduction factor deep in the collective regime
};

CoolingRegime regime_classify(const DerivedModel& model);

// Steady phonon-number predictions per atom.  rate_balance evaluates the
// heating/cooling balance including cavity and free-space scattering;
// resolved_limit is its deep-sideband simplification with the collective
// suppression factor explicit.  Atoms sitting on field nodes never couple,
// so their prediction is infinite and flagged.
struct PhononPrediction {
    std::vector<double> rate_balance;
    std::vector<double> resolved_limit;
    std::vector<bool> decoupled;
};

PhononPrediction phonon_predictions(const DerivedModel& model, const ArrayGeometry& geom);

// Experimental feasibility: translate lab-frame numbers (ordinary Hz) into
// the trap frequency, cavity linewidth, cooperativities, total cooling time
// and the largest array the scheme supports.
struct FeasibilityInputs {
    double omega_recoil_hz = 0.0;    // recoil frequency
    double eta = 0.0;                // Lamb-Dicke parameter
    double gamma_hz = 0.0;           // atomic linewidth
    double g_hz = 0.0;               // single-atom coupling
    double delta_a_hz = 0.0;         // atomic detuning
    double slowest_rate = 0.0;       // slowest tolerated cooling rate, units of kappa
    double kappa_divisor = 10.0;     // sets kappa = nu / divisor ...
    std::optional<double> kappa_hz;  // ... unless the linewidth is pinned here
};

struct FeasibilityNumbers {
    double nu_hz = 0.0;
    double kappa_hz = 0.0;
    double cooling_time_s = 0.0;
    double c_r = 0.0;
    double c_d = 0.0;
    double n_max = 0.0;
};

FeasibilityNumbers feasibility_report(const FeasibilityInputs& in);

} // namespace cavcool
