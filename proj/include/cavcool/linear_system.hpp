#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cavcool/geometry.hpp"
#include "cavcool/model.hpp"

namespace cavcool {

// Fluctuation dynamics dY/dt = M Y + S around the mean field, in the basis
// (a, b_1..b_N, a^dag, b_1^dag..b_N^dag).  d holds the white-noise correlators
// <S_i(t) S_j(t')> = d_ij delta(t - t'), operator order preserved.
struct LinearSystem {
    int n_atoms = 0;
    Eigen::MatrixXcd m;  // drift
    Eigen::MatrixXcd d;  // diffusion (complex, not symmetric)
    std::vector<std::string> basis_labels;

    int dim() const { return 2 * n_atoms + 2; }
    int idx_a() const { return 0; }
    int idx_b(int i) const { return 1 + i; }
    int idx_adag() const { return n_atoms + 1; }
    int idx_bdag(int i) const { return n_atoms + 2 + i; }
};

LinearSystem build_linear_system(const DerivedModel& model, const ArrayGeometry& geom,
                                 const SystemParams& params);

struct EigenRates {
    Eigen::VectorXcd eigenvalues;   // all 2N+2
    std::vector<double> rates;      // N+1 distinct energy decay rates, ascending
    double min_rate = 0.0;
    double max_rate = 0.0;
    double max_pair_mismatch = 0.0; // worst |mu_j - conj(mu_i)| over matched pairs
};

EigenRates eigen_rates(const LinearSystem& sys, bool balance = false);

struct SteadyCovariance {
    Eigen::MatrixXcd v;          // <Y Y^T> at steady state
    double residual_rel = 0.0;   // max|M V + V M^T + D| / max|D|
    double max_eig_real = 0.0;   // stability margin of the drift matrix
};

SteadyCovariance steady_covariance(const LinearSystem& sys);

struct PhononNumbers {
    std::vector<double> n;
    double mean = 0.0;
};

PhononNumbers phonon_numbers(const SteadyCovariance& cov, const LinearSystem& sys);

struct IntegratePolicy {
    int samples = 512;  // uniform sampling grid for the returned trajectory
    std::optional<Eigen::MatrixXcd> initial;  // defaults to vacuum (all-zero moments)
};

struct MomentTrajectory {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> covariances;
    Eigen::MatrixXcd final;
};

// Time-integrates dV/dt = M V + V M^T + D from V(0) with an exact one-step
// exponential propagator (no stability limit on the step size), independent of
// the algebraic steady-state solver.
MomentTrajectory integrate_moments(const LinearSystem& sys, double t_final,
                                   const IntegratePolicy& policy = {});

// Per-point bundle assembled by sweeps.
struct SteadyReport {
    Eigen::VectorXcd eigenvalues;
    std::vector<double> decay_rates;
    double min_rate = 0.0;
    std::vector<double> phonons;
    double mean_phonon = 0.0;
    std::shared_ptr<const Eigen::MatrixXcd> covariance;
    std::string regime_label;
};

} // namespace cavcool
