#include "cavcool/linear_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "cavcool/errors.hpp"

namespace cavcool {

namespace {

using cd = std::complex<double>;
constexpr cd iu(0.0, 1.0);

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// Osborne balancing (radix 2) -- similarity transform, eigenvalues unchanged.
void balance_in_place(Eigen::MatrixXcd& a) {
    const int n = static_cast<int>(a.rows());
    for (int sweep = 0; sweep < 30; ++sweep) {
        bool converged = true;
        for (int i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            while (c < r / 2.0) { c *= 2.0; r /= 2.0; f *= 2.0; }
            while (c >= r * 2.0) { c /= 2.0; r *= 2.0; f /= 2.0; }
            if (f != 1.0) {
                a.col(i) *= f;
                a.row(i) /= f;
                converged = false;
            }
        }
        if (converged) break;
    }
}

// Solves T W + W T^T = F for upper-triangular T by back-substitution over the
// columns of W (highest column first, each a triangular solve).
Eigen::MatrixXcd solve_triangular_lyapunov(const Eigen::MatrixXcd& t, const Eigen::MatrixXcd& f) {
    const int n = static_cast<int>(t.rows());
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd tk = t;
    for (int k = n - 1; k >= 0; --k) {
        Eigen::VectorXcd rhs = f.col(k);
        for (int l = k + 1; l < n; ++l)
            rhs -= t(k, l) * w.col(l);
        tk.diagonal() = t.diagonal().array() + t(k, k);
        for (int j = 0; j < n; ++j)
            if (std::abs(tk(j, j)) < 1e-300)
                throw SolverSingular("eigenvalue pair sums to zero; no unique steady state");
        w.col(k) = tk.triangularView<Eigen::Upper>().solve(rhs);
    }
    return w;
}

} // namespace

LinearSystem build_linear_system(const DerivedModel& model, const ArrayGeometry& geom,
                                 const SystemParams& params) {
    const int n = model.n_atoms;
    if (geom.n_atoms() != n || params.n_atoms != n)
        throw DimensionMismatch("model, geometry and params disagree on n_atoms");

    LinearSystem sys;
    sys.n_atoms = n;
    const int dim = sys.dim();
    sys.m = Eigen::MatrixXcd::Zero(dim, dim);
    sys.d = Eigen::MatrixXcd::Zero(dim, dim);

    const double al = model.alpha.real();
    const int ia = sys.idx_a();
    const int iad = sys.idx_adag();

    sys.m(ia, ia) = cd(-model.kappa_eff, model.delta_c_prime);
    sys.m(iad, iad) = std::conj(sys.m(ia, ia));

    double sum_da = 0.0;
    for (int i = 0; i < n; ++i) {
        const int ib = sys.idx_b(i);
        const int ibd = sys.idx_bdag(i);
        const cd gi = iu * (model.u0 * model.eta_i[i] * al * geom.s[i]);

        sys.m(ib, ib) = cd(0.0, -model.nu_i[i]);
        sys.m(ibd, ibd) = cd(0.0, model.nu_i[i]);
        sys.m(ia, ib) = gi;
        sys.m(ia, ibd) = gi;
        sys.m(ib, ia) = gi;
        sys.m(ib, iad) = gi;
        sys.m(iad, ib) = -gi;
        sys.m(iad, ibd) = -gi;
        sys.m(ibd, ia) = -gi;
        sys.m(ibd, iad) = -gi;

        // momentum noise is rescaled by the trap-frequency correction when
        // mapped onto the ladder operators
        const double r = model.eta_i[i] / model.eta;
        const double r2db = r * r * model.d_bi[i];
        // joint dipole/recoil fluctuations; the half-angle sine carries the
        // relative phase between the two scattering channels
        const double cross = r * std::sqrt(model.d_ai[i] * model.gamma_tilde) *
                             model.eta * al * geom.half_sin[i];

        sys.d(ia, ib) = cross;
        sys.d(ia, ibd) = -cross;
        sys.d(ib, iad) = -cross;
        sys.d(ibd, iad) = cross;
        sys.d(ib, ib) = -r2db;
        sys.d(ib, ibd) = r2db;
        sys.d(ibd, ib) = r2db;
        sys.d(ibd, ibd) = -r2db;
        sum_da += model.d_ai[i];
    }
    sys.d(ia, iad) = 2.0 + sum_da;  // vacuum input through the mirror + scattering channels

    sys.basis_labels.resize(static_cast<size_t>(dim));
    sys.basis_labels[static_cast<size_t>(ia)] = "a";
    sys.basis_labels[static_cast<size_t>(iad)] = "a+";
    for (int i = 0; i < n; ++i) {
        sys.basis_labels[static_cast<size_t>(sys.idx_b(i))] = "b" + std::to_string(i + 1);
        sys.basis_labels[static_cast<size_t>(sys.idx_bdag(i))] = "b" + std::to_string(i + 1) + "+";
    }
    return sys;
}

EigenRates eigen_rates(const LinearSystem& sys, bool balance) {
    Eigen::MatrixXcd a = sys.m;
    if (balance) balance_in_place(a);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(a, /*computeEigenvectors=*/false);
    if (ces.info() != Eigen::Success)
        throw EigenFailure("eigensolver did not converge" +
                           std::string(balance ? " (balanced)" : "; retry with balancing"));

    EigenRates out;
    out.eigenvalues = ces.eigenvalues();
    const int dim = sys.dim();

    // The spectrum is symmetric under conjugation; fold it onto the upper half
    // plane and keep one representative per pair.
    std::vector<bool> used(static_cast<size_t>(dim), false);
    out.max_pair_mismatch = 0.0;
    for (int i = 0; i < dim; ++i) {
        if (used[static_cast<size_t>(i)]) continue;
        used[static_cast<size_t>(i)] = true;
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < dim; ++j) {
            if (used[static_cast<size_t>(j)]) continue;
            const double dist = std::abs(out.eigenvalues(j) - std::conj(out.eigenvalues(i)));
            if (dist < best_d) { best_d = dist; best = j; }
        }
        cd rep = out.eigenvalues(i);
        if (best >= 0) {
            used[static_cast<size_t>(best)] = true;
            out.max_pair_mismatch = std::max(out.max_pair_mismatch, best_d);
            if (rep.imag() < 0.0) rep = out.eigenvalues(best);
        }
        out.rates.push_back(-2.0 * rep.real());
    }
    std::sort(out.rates.begin(), out.rates.end());
    out.min_rate = out.rates.front();
    out.max_rate = out.rates.back();
    return out;
}

SteadyCovariance steady_covariance(const LinearSystem& sys) {
    const int dim = sys.dim();
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(sys.m, /*computeU=*/true);
    if (schur.info() != Eigen::Success)
        throw EigenFailure("Schur decomposition failed");
    const Eigen::MatrixXcd& t = schur.matrixT();
    const Eigen::MatrixXcd& u = schur.matrixU();

    SteadyCovariance out;
    out.max_eig_real = t.diagonal().real().maxCoeff();
    if (!(out.max_eig_real < -1e-12))
        throw NotHurwitz("drift matrix is marginal or unstable (max Re eig = " +
                         std::to_string(out.max_eig_real) + ")");

    const double dnorm = max_abs(sys.d);
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(dim, dim);
    for (int pass = 0; pass < 3; ++pass) {
        Eigen::MatrixXcd resid = sys.d;
        if (pass > 0) resid += sys.m * v + v * sys.m.transpose();
        out.residual_rel = max_abs(resid) / dnorm;
        if (pass > 0 && out.residual_rel < 1e-10) return out;

        const Eigen::MatrixXcd f = -(u.adjoint() * resid * u.conjugate());
        const Eigen::MatrixXcd w = solve_triangular_lyapunov(t, f);
        v += u * w * u.transpose();
        out.v = v;
    }
    Eigen::MatrixXcd resid = sys.d + sys.m * v + v * sys.m.transpose();
    out.residual_rel = max_abs(resid) / dnorm;
    if (out.residual_rel >= 1e-10)
        throw SolverSingular("steady covariance residual did not reach tolerance");
    return out;
}

PhononNumbers phonon_numbers(const SteadyCovariance& cov, const LinearSystem& sys) {
    PhononNumbers out;
    out.n.resize(static_cast<size_t>(sys.n_atoms));
    double sum = 0.0;
    for (int i = 0; i < sys.n_atoms; ++i) {
        const cd v = cov.v(sys.idx_bdag(i), sys.idx_b(i));
        double ni = v.real();
        if (ni < -1e-10)
            throw NegativeOccupation("occupation of atom " + std::to_string(i + 1) +
                                     " is " + std::to_string(ni));
        if (ni < 0.0) ni = 0.0;
        out.n[static_cast<size_t>(i)] = ni;
        sum += ni;
    }
    out.mean = sum / sys.n_atoms;
    return out;
}

MomentTrajectory integrate_moments(const LinearSystem& sys, double t_final,
                                   const IntegratePolicy& policy) {
    if (!(t_final > 0.0))
        throw StepSizeUnderflow("t_final must be > 0");
    const int dim = sys.dim();
    const int n_steps = std::clamp(policy.samples, 1, 1 << 20);
    const double h = t_final / n_steps;

    // Propagate with the exact discrete map V -> E V E^T + Q, where
    // E = exp(M h) and Q accumulates the noise over one step.  Both are built
    // at a sub-step small enough for an accurate matrix exponential and then
    // doubled up to h, so stiffness costs only log2 factors.
    const double scale = (sys.m.cwiseAbs().rowwise().sum().maxCoeff() +
                          sys.d.cwiseAbs().rowwise().sum().maxCoeff());
    int doublings = 0;
    double h0 = h;
    while (scale * h0 > 0.5 && doublings < 120) {
        h0 /= 2.0;
        ++doublings;
    }
    if (scale * h0 > 0.5)
        throw StepSizeUnderflow("cannot resolve the requested step");

    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(2 * dim, 2 * dim);
    block.topLeftCorner(dim, dim) = -sys.m * h0;
    block.topRightCorner(dim, dim) = sys.d * h0;
    block.bottomRightCorner(dim, dim) = sys.m.transpose() * h0;
    const Eigen::MatrixXcd f = block.exp();
    if (!f.allFinite())
        throw StepSizeUnderflow("matrix exponential overflowed");

    Eigen::MatrixXcd e = f.bottomRightCorner(dim, dim).transpose();  // exp(M h0)
    Eigen::MatrixXcd q = e * f.topRightCorner(dim, dim);
    for (int k = 0; k < doublings; ++k) {
        q = e * q * e.transpose() + q;
        e = (e * e).eval();
    }

    MomentTrajectory out;
    Eigen::MatrixXcd v = policy.initial ? *policy.initial : Eigen::MatrixXcd::Zero(dim, dim);
    if (policy.initial && (v.rows() != dim || v.cols() != dim))
        throw DimensionMismatch("initial covariance has the wrong shape");
    out.times.reserve(static_cast<size_t>(n_steps) + 1);
    out.covariances.reserve(static_cast<size_t>(n_steps) + 1);
    out.times.push_back(0.0);
    out.covariances.push_back(v);
    for (int k = 1; k <= n_steps; ++k) {
        v = (e * v * e.transpose() + q).eval();
        if (!v.allFinite())
            throw StepSizeUnderflow("moment integration produced non-finite values");
        out.times.push_back(k * h);
        out.covariances.push_back(v);
    }
    out.final = v;
    return out;
}

} // namespace cavcool
