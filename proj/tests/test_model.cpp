#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <cavcool/errors.hpp>
#include <cavcool/geometry.hpp>
#include <cavcool/model.hpp>

#include "support.hpp"

using namespace cavcool;
using testsupport::reference_params;

TEST_CASE("dispersive constants without scattering") {
    const auto p = reference_params(4, false);
    const auto m = derive_model(p, base_lattice(4));
    CHECK(m.u0 == doctest::Approx(0.05).epsilon(1e-13));
    CHECK(m.c_d == doctest::Approx(0.05).epsilon(1e-13));
    CHECK(std::isinf(m.c_r));
    CHECK(m.gamma_tilde == 0.0);
    CHECK(m.kappa_eff == doctest::Approx(1.0).epsilon(1e-15));
    for (double d : m.d_ai) CHECK(d == 0.0);
}

TEST_CASE("mean field amplitude and detunings") {
    const auto p = reference_params(4, false);
    const auto m = derive_model(p, base_lattice(4));
    // amplitude 150/sqrt(1 + 10^2), rotated onto the real axis
    CHECK(m.alpha.real() == doctest::Approx(14.9255578531498).epsilon(1e-12));
    CHECK(std::abs(m.alpha.imag()) < 1e-12);
    CHECK(m.delta_c_prime == doctest::Approx(-10.0).epsilon(1e-14));
    // static light shift pulls the bare detuning up by u0 * sum cos^2 = 0.1
    CHECK(m.delta_c == doctest::Approx(-9.9).epsilon(1e-13));
}

TEST_CASE("trap backaction corrections") {
    const auto p = reference_params(4, false);
    const auto m = derive_model(p, base_lattice(4));
    const std::vector<double> nu_ref = {9.99278833726992, 9.99724600399374,
                                        10.0027532377656, 10.0072064656687};
    const std::vector<double> eps_ref = {0.0175523758088547, 0.02839400822965,
                                         0.0283861906834797, 0.017539726742915};
    for (int i = 0; i < 4; ++i) {
        CHECK(m.nu_i[i] == doctest::Approx(nu_ref[i]).epsilon(1e-12));
        CHECK(m.eps_i[i] == doctest::Approx(eps_ref[i]).epsilon(1e-11));
    }
    CHECK(m.eta_i[0] == doctest::Approx(0.0200072155656817).epsilon(1e-12));
    // deeper traps get slightly smaller effective Lamb-Dicke parameters
    CHECK(m.eta_i[3] < m.eta);
    CHECK(m.eta_i[0] > m.eta);
}

TEST_CASE("scattering channels") {
    const auto p = reference_params(4, true);
    const auto m = derive_model(p, base_lattice(4));
    CHECK(m.c_r == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(m.gamma_tilde == doctest::Approx(2.5e-4).epsilon(1e-13));
    const std::vector<double> da_ref = {0.000226127124296868, 0.000163627124296868,
                                        8.63728757031316e-05, 2.38728757031316e-05};
    const std::vector<double> k_ref = {0.457294901687516, 0.607294901687516,
                                       0.792705098312484, 0.942705098312484};
    const std::vector<double> db_ref = {1.01872122233079e-05, 1.3528779837242e-05,
                                        1.76591845594763e-05, 2.10007521734105e-05};
    for (int i = 0; i < 4; ++i) {
        CHECK(m.d_ai[i] == doctest::Approx(da_ref[i]).epsilon(1e-11));
        CHECK(m.k_i[i] == doctest::Approx(k_ref[i]).epsilon(1e-12));
        CHECK(m.d_bi[i] == doctest::Approx(db_ref[i]).epsilon(1e-10));
    }
    CHECK(m.kappa_eff == doctest::Approx(1.00025).epsilon(1e-13));
    CHECK(m.alpha.real() == doctest::Approx(14.9255209042189).epsilon(1e-12));
}

TEST_CASE("winding leaves the dynamics unchanged") {
    const auto p = reference_params(4, true);
    const auto m0 = derive_model(p, base_lattice(4, 0));
    const auto m1 = derive_model(p, base_lattice(4, 1));
    for (int i = 0; i < 4; ++i) {
        CHECK(m1.nu_i[i] == doctest::Approx(m0.nu_i[i]).epsilon(1e-12));
        CHECK(m1.d_ai[i] == doctest::Approx(m0.d_ai[i]).epsilon(1e-12));
        CHECK(m1.k_i[i] == doctest::Approx(m0.k_i[i]).epsilon(1e-12));
    }
    CHECK(m1.delta_c == doctest::Approx(m0.delta_c).epsilon(1e-13));
}

TEST_CASE("validity report") {
    const auto p = reference_params(4, true);
    const auto m = derive_model(p, base_lattice(4));
    const auto rep = check_validity(m, p);
    CHECK(rep.all_pass());
    CHECK(rep.entries().size() == 6);
    for (const auto& e : rep.entries()) {
        CHECK_FALSE(e.name.empty());
        CHECK(e.ratio >= 0.0);
        CHECK(e.pass);
    }
    // an absurdly strict threshold must flag the same margins
    const auto strict = check_validity(m, p, 1e-9);
    CHECK_FALSE(strict.all_pass());
}

TEST_CASE("mean-field fixed point is self-consistent") {
    const auto p = reference_params(4, false);
    const auto geom = base_lattice(4);
    const auto sol = solve_mean_field(p, geom);
    const auto m = derive_model(p, geom);
    CHECK(std::abs(sol.mean_field) ==
          doctest::Approx(m.alpha.real()).epsilon(0.01));
    REQUIRE(sol.mean_displacements.size() == 4);
    for (double kx : sol.mean_displacements) CHECK(std::abs(kx) < 0.05);
    CHECK(sol.iterations > 0);
    CHECK(mean_field_residual(p, geom, sol) < 1e-9);
}

TEST_CASE("invalid inputs are rejected") {
    auto geom = base_lattice(4);

    auto p = reference_params(4, false);
    p.nu = 0.0;
    CHECK_THROWS_AS(derive_model(p, geom), NonPositiveRate);

    p = reference_params(4, false);
    p.eta = -0.01;
    CHECK_THROWS_AS(derive_model(p, geom), NonPositiveRate);

    p = reference_params(4, false);
    p.c_x = 1.5;
    CHECK_THROWS_AS(derive_model(p, geom), NonPositiveRate);

    p = reference_params(3, false);
    CHECK_THROWS_AS(derive_model(p, geom), DimensionMismatch);

    // a pump strong enough to cancel a trap destabilizes the array
    p = reference_params(4, false);
    p.eta_p = 5000.0;
    CHECK_THROWS_AS(derive_model(p, geom), TrapDestabilized);
}
