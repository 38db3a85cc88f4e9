#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <cavcool/collective_modes.hpp>
#include <cavcool/errors.hpp>
#include <cavcool/geometry.hpp>
#include <cavcool/model.hpp>

#include "support.hpp"

using namespace cavcool;
using testsupport::reference_params;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("transform is orthonormal") {
    for (int n = 2; n <= 12; ++n) {
        const auto tr = build_transform(n);
        REQUIRE(tr.t.rows() == n);
        const double dev =
            (tr.t.transpose() * tr.t - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
        CHECK(dev < 1e-12);
    }
}

TEST_CASE("first row collects the cavity-weighted mode") {
    const int n = 5;
    const auto tr = build_transform(n);
    const double norm = std::sqrt(2.0 / (n + 1.0));
    for (int i = 0; i < n; ++i)
        CHECK(tr.t(0, i) ==
              doctest::Approx(norm * std::sin(pi * (i + 1) / (n + 1.0))).epsilon(1e-13));
}

TEST_CASE("rotated couplings match the closed forms") {
    const auto p = reference_params(4, false);
    const auto geom = base_lattice(4);
    const auto m = derive_model(p, geom);
    const auto tr = build_transform(4);
    const auto audit = transformed_coupling_structure(m, geom, tr);

    CHECK(audit.eps_rotated == doctest::Approx(0.0471987581645665).epsilon(1e-11));
    CHECK(audit.eps_closed_form == doctest::Approx(audit.eps_rotated).epsilon(1e-12));

    const std::vector<double> om_ref = {9.99369706213319, 10.0, 10.0062989676658};
    const std::vector<double> be_ref = {0.0044568503284811, 0.00630095151552369,
                                        0.00445404297175564};
    REQUIRE(audit.omega_rotated.size() == 3);
    for (int j = 0; j < 3; ++j) {
        CHECK(audit.omega_rotated[j] == doctest::Approx(om_ref[j]).epsilon(1e-12));
        CHECK(audit.beta_rotated[j] == doctest::Approx(be_ref[j]).epsilon(1e-9));
        CHECK(audit.beta_closed_form[j] == doctest::Approx(be_ref[j]).epsilon(1e-10));
    }
    CHECK(audit.max_dark_cavity < 1e-12);
    CHECK(audit.max_dark_dark < 1e-10);
}

TEST_CASE("structure holds across array sizes") {
    for (int n = 2; n <= 12; ++n) {
        const auto p = reference_params(n, false);
        const auto geom = base_lattice(n);
        const auto m = derive_model(p, geom);
        const auto tr = build_transform(n);
        const auto audit = transformed_coupling_structure(m, geom, tr);
        CHECK(audit.max_dark_cavity <= 1e-10 * std::abs(audit.eps_closed_form));
        for (size_t j = 0; j + 1 < static_cast<size_t>(n); ++j) {
            const double scale = std::max(std::abs(audit.beta_closed_form[j]), 1e-12 * m.nu);
            CHECK(std::abs(audit.beta_rotated[j] - audit.beta_closed_form[j]) <= 1e-8 * scale);
        }
    }
}

TEST_CASE("a corrupted transform is rejected") {
    const auto p = reference_params(4, false);
    const auto geom = base_lattice(4);
    const auto m = derive_model(p, geom);
    auto tr = build_transform(4);
    tr.t(0, 0) += 1e-4;
    CHECK_THROWS_AS(transformed_coupling_structure(m, geom, tr), StructureViolation);
}

TEST_CASE("mismatched shapes are rejected") {
    const auto p = reference_params(4, false);
    const auto geom = base_lattice(4);
    const auto m = derive_model(p, geom);
    const auto tr = build_transform(3);
    CHECK_THROWS_AS(transformed_coupling_structure(m, geom, tr), DimensionMismatch);
    CHECK_THROWS_AS(build_transform(0), DimensionMismatch);
}

TEST_CASE("shifted lattices have no such structure") {
    const auto p = reference_params(6, false);
    const auto geom = optimized_lattice(6, 0, 4, 10);
    const auto m = derive_model(p, geom);
    const auto tr = build_transform(6);
    CHECK_THROWS_AS(transformed_coupling_structure(m, geom, tr), WrongGeometry);
}
