#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include <cavcool/errors.hpp>
#include <cavcool/geometry.hpp>
#include <cavcool/linear_system.hpp>
#include <cavcool/model.hpp>

#include "support.hpp"

using namespace cavcool;
using testsupport::reference_params;
using cd = std::complex<double>;

namespace {

// Rebuilds the drift generator from the derived quantities alone, so a
// mis-indexed entry in the production assembly cannot hide.
Eigen::MatrixXcd expected_drift(const DerivedModel& m, const ArrayGeometry& geom) {
    const int n = m.n_atoms;
    const int dim = 2 * n + 2;
    const cd iu(0.0, 1.0);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    const int ia = 0, iad = n + 1;
    a(ia, ia) = cd(-m.kappa_eff, m.delta_c_prime);
    a(iad, iad) = std::conj(a(ia, ia));
    for (int i = 0; i < n; ++i) {
        const int ib = 1 + i, ibd = n + 2 + i;
        const cd gi = iu * (m.u0 * m.eta_i[i] * m.alpha.real() * geom.s[i]);
        a(ib, ib) = cd(0.0, -m.nu_i[i]);
        a(ibd, ibd) = cd(0.0, m.nu_i[i]);
        a(ia, ib) = a(ia, ibd) = a(ib, ia) = a(ib, iad) = gi;
        a(iad, ib) = a(iad, ibd) = a(ibd, ia) = a(ibd, iad) = -gi;
    }
    return a;
}

} // namespace

TEST_CASE("drift matrix layout") {
    const auto p = reference_params(2, true);
    const auto geom = base_lattice(2);
    const auto m = derive_model(p, geom);
    const auto sys = build_linear_system(m, geom, p);

    REQUIRE(sys.dim() == 6);
    REQUIRE(sys.basis_labels.size() == 6);
    CHECK(sys.basis_labels[0] == "a");
    CHECK(sys.basis_labels[1] == "b1");
    CHECK(sys.basis_labels[2] == "b2");
    CHECK(sys.basis_labels[3] == "a+");
    CHECK(sys.basis_labels[4] == "b1+");
    CHECK(sys.basis_labels[5] == "b2+");

    const auto expect = expected_drift(m, geom);
    CHECK((sys.m - expect).cwiseAbs().maxCoeff() < 1e-14);

    // conjugation symmetry: the lower block mirrors the upper block
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            const int ci = (i + 3) % 6, cj = (j + 3) % 6;
            CHECK(std::abs(sys.m(i, j) - std::conj(sys.m(ci, cj))) < 1e-14);
        }
}

TEST_CASE("noise matrix layout") {
    const auto p0 = reference_params(2, false);
    const auto geom = base_lattice(2);
    const auto m0 = derive_model(p0, geom);
    const auto sys0 = build_linear_system(m0, geom, p0);

    // without scattering the only noise source is the cavity vacuum input
    CHECK(sys0.d(0, 3).real() == doctest::Approx(2.0).epsilon(1e-14));
    double off = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (!(i == 0 && j == 3)) off = std::max(off, std::abs(sys0.d(i, j)));
    CHECK(off == 0.0);

    const auto p1 = reference_params(2, true);
    const auto m1 = derive_model(p1, geom);
    const auto sys1 = build_linear_system(m1, geom, p1);
    // the vacuum input picks up the scattering-induced decay channels
    CHECK(sys1.d(0, 3).real() ==
          doctest::Approx(2.0 + m1.d_ai[0] + m1.d_ai[1]).epsilon(1e-14));
    // the momentum diffusion blocks are scaled by the trap-frequency correction
    const double r0 = m1.eta_i[0] / m1.eta;
    CHECK(sys1.d(1, 4).real() == doctest::Approx(r0 * r0 * m1.d_bi[0]).epsilon(1e-12));
    CHECK(sys1.d(1, 1).real() == doctest::Approx(-r0 * r0 * m1.d_bi[0]).epsilon(1e-12));
}

TEST_CASE("eigenmode decay rates") {
    const auto p = reference_params(4, false);
    const auto geom = base_lattice(4);
    const auto m = derive_model(p, geom);
    const auto sys = build_linear_system(m, geom, p);
    const auto er = eigen_rates(sys);

    REQUIRE(er.rates.size() == 5);
    CHECK(std::is_sorted(er.rates.begin(), er.rates.end()));
    CHECK(er.min_rate == doctest::Approx(1.519051877e-4).epsilon(1e-7));
    CHECK(er.max_rate == doctest::Approx(1.998888314).epsilon(1e-8));
    CHECK(er.max_pair_mismatch < 1e-12);

    // balancing is a similarity transform: the spectrum must not move
    const auto erb = eigen_rates(sys, /*balance=*/true);
    for (size_t i = 0; i < er.rates.size(); ++i)
        CHECK(erb.rates[i] == doctest::Approx(er.rates[i]).epsilon(1e-9));
}

TEST_CASE("steady covariance") {
    const auto p = reference_params(4, false);
    const auto geom = base_lattice(4);
    const auto m = derive_model(p, geom);
    const auto sys = build_linear_system(m, geom, p);
    const auto sc = steady_covariance(sys);

    CHECK(sc.residual_rel < 1e-10);
    CHECK(sc.max_eig_real < 0.0);

    const auto ph = phonon_numbers(sc, sys);
    REQUIRE(ph.n.size() == 4);
    // without scattering every trap settles at the sideband floor 1/400
    for (double ni : ph.n) CHECK(ni == doctest::Approx(0.0025).epsilon(0.02));
    CHECK(ph.mean == doctest::Approx(0.0025008).epsilon(1e-4));
}

TEST_CASE("unstable drift is rejected") {
    auto p = reference_params(2, false);
    p.detuning_policy = DetuningPolicy::ExplicitDetuning;
    p.delta_c = 10.0;  // pumping on the heating side amplifies the motion
    const auto geom = base_lattice(2);
    const auto m = derive_model(p, geom);
    const auto sys = build_linear_system(m, geom, p);
    CHECK_THROWS_AS(steady_covariance(sys), NotHurwitz);
}

TEST_CASE("moment integration matches the algebraic steady state") {
    const auto p = reference_params(3, true);
    const auto geom = base_lattice(3);
    const auto m = derive_model(p, geom);
    const auto sys = build_linear_system(m, geom, p);
    const auto sc = steady_covariance(sys);
    const auto er = eigen_rates(sys);

    IntegratePolicy pol;
    pol.samples = 8;
    const auto traj = integrate_moments(sys, 40.0 / er.min_rate, pol);

    REQUIRE(traj.times.size() == 9);  // t = 0 plus the sampling grid
    CHECK(traj.times.front() == 0.0);
    CHECK((traj.final - traj.covariances.back()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((traj.final - sc.v).cwiseAbs().maxCoeff() < 1e-9);

    const auto ph_alg = phonon_numbers(sc, sys);
    const auto ph_int = phonon_numbers(SteadyCovariance{traj.final, 0.0, -1.0}, sys);
    for (int i = 0; i < 3; ++i)
        CHECK(ph_int.n[i] == doctest::Approx(ph_alg.n[i]).epsilon(1e-8));
}

TEST_CASE("vacuum start heats monotonically to the floor") {
    const auto p = reference_params(2, false);
    const auto geom = base_lattice(2);
    const auto m = derive_model(p, geom);
    const auto sys = build_linear_system(m, geom, p);
    const auto er = eigen_rates(sys);

    IntegratePolicy pol;
    pol.samples = 16;
    const auto traj = integrate_moments(sys, 20.0 / er.min_rate, pol);
    double prev = -1.0;
    for (const auto& v : traj.covariances) {
        const double n1 = v(sys.idx_bdag(0), sys.idx_b(0)).real();
        CHECK(n1 >= prev - 1e-12);
        prev = n1;
    }
    CHECK(prev == doctest::Approx(0.0025).epsilon(0.02));
}

TEST_CASE("bad integration requests are rejected") {
    const auto p = reference_params(2, false);
    const auto geom = base_lattice(2);
    const auto m = derive_model(p, geom);
    const auto sys = build_linear_system(m, geom, p);
    CHECK_THROWS_AS(integrate_moments(sys, 0.0), StepSizeUnderflow);
    CHECK_THROWS_AS(integrate_moments(sys, -1.0), StepSizeUnderflow);

    IntegratePolicy pol;
    pol.initial = Eigen::MatrixXcd::Zero(3, 3);
    CHECK_THROWS_AS(integrate_moments(sys, 1.0, pol), DimensionMismatch);
}
