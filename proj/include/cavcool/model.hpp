#pragma once

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "cavcool/geometry.hpp"

namespace cavcool {

enum class DetuningPolicy {
    Sideband,          // pick the pump-cavity detuning so the shifted detuning is -nu
    ExplicitDetuning,  // use delta_c as given
};

// Physical inputs.  All rates/frequencies are interpreted relative to kappa;
// they may be given in any consistent unit since derived quantities are
// normalised to kappa internally.
struct SystemParams {
    double kappa = 1.0;    // cavity amplitude decay rate (> 0)
    double gamma = 0.0;    // atomic linewidth (>= 0)
    double g = 0.0;        // single-atom cavity coupling (>= 0)
    double delta_a = std::numeric_limits<double>::infinity();  // atomic detuning (sign = trap sign)
    double nu = 0.0;       // bare trap frequency (> 0)
    double eta = 0.0;      // Lamb-Dicke parameter (> 0)
    std::complex<double> eta_p{0.0, 0.0};  // pump amplitude
    int n_atoms = 1;
    DetuningPolicy detuning_policy = DetuningPolicy::Sideband;
    double delta_c = 0.0;  // used only with ExplicitDetuning
    bool spont_emission = false;
    double c_x = 0.4;      // dipole emission pattern weight along the cavity axis
};

// Everything downstream works in units of kappa; all frequencies below are
// already divided by params.kappa.
struct DerivedModel {
    double kappa_phys = 1.0;  // the input kappa, kept for physical-unit reports
    double nu = 0.0;
    double eta = 0.0;
    int n_atoms = 0;
    bool base_spacing = false;

    double u0 = 0.0;          // light shift per photon, g^2/delta_a
    double c_d = 0.0;         // u0/kappa (dispersive cooperativity)
    double c_r = 0.0;         // g^2/(kappa*gamma), +inf when gamma == 0
    double gamma_tilde = 0.0; // gamma g^2/delta_a^2, zeroed when spont. emission is off

    std::vector<double> d_ai;  // extra cavity-field decay channels, per atom
    std::vector<double> d_bi;  // momentum-diffusion rates, per atom
    std::vector<double> k_i;   // half_sin^2 + c_x*half_cos^2
    double kappa_eff = 1.0;    // 1 + sum(d_ai)/2

    std::complex<double> alpha{0.0, 0.0};  // zero-order mean field, real >= 0 by convention
    double pump_rotation = 0.0;            // phase applied to eta_p to make alpha real
    double delta_c = 0.0;        // pump-cavity detuning actually used
    double delta_c_prime = 0.0;  // delta_c shifted by the static light shift

    std::vector<double> nu_i;   // backaction-corrected trap frequencies
    std::vector<double> eta_i;  // eta * sqrt(nu/nu_i)
    std::vector<double> eps_i;  // per-atom sideband coupling 2*u0*eta_i*alpha*s_i

    double sum_cos2_half = 0.0;  // sum of half_cos^2, cached for validity margins
    double min_abs_s = 0.0;      // smallest |s_i| over coupled atoms
};

struct ValidityEntry {
    std::string name;
    double lhs = 0.0;   // the quantity that must stay small
    double rhs = 0.0;   // the scale it is compared against
    double ratio = 0.0; // lhs/rhs
    bool pass = false;
};

struct ValidityReport {
    double threshold = 0.1;  // "much less than" cutoff on each ratio
    ValidityEntry lamb_dicke;        // trap distortion vs trap frequency
    ValidityEntry decay_hierarchy;   // scattering-induced cavity decay vs kappa
    ValidityEntry coop_collective;   // cooperativity vs collective spont.-emission bound
    ValidityEntry coop_suppression;  // scattering vs kappa at large atom number
    ValidityEntry weak_coupling;     // collective coupling vs cavity linewidth
    ValidityEntry eta_shift;         // spread of the per-atom Lamb-Dicke parameters

    std::vector<ValidityEntry> entries() const;
    bool all_pass() const;
};

struct MeanFieldOptions {
    int max_iters = 10000;
    double damping = 0.5;
    double tol = 1e-12;
};

struct MeanFieldSolution {
    std::complex<double> mean_field{0.0, 0.0};  // <A>, in units of the rotated pump frame
    std::vector<double> mean_displacements;     // k_c <x_i>
    int iterations = 0;
};

DerivedModel derive_model(const SystemParams& params, const ArrayGeometry& geom);

ValidityReport check_validity(const DerivedModel& model, const SystemParams& params,
                              double threshold = 0.1);

// Self-consistent mean field and static displacements (damped fixed point).
MeanFieldSolution solve_mean_field(const SystemParams& params, const ArrayGeometry& geom,
                                   const MeanFieldOptions& opts = {});

// Substitution residual of a candidate solution in both fixed-point relations.
double mean_field_residual(const SystemParams& params, const ArrayGeometry& geom,
                           const MeanFieldSolution& sol);

} // namespace cavcool
