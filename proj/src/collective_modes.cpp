#include "cavcool/collective_modes.hpp"

#include <cmath>
#include <string>

#include "cavcool/analytics.hpp"
#include "cavcool/errors.hpp"

namespace cavcool {

namespace {
constexpr double pi = 3.14159265358979323846;
}

ModeTransform build_transform(int n_atoms) {
    if (n_atoms < 1)
        throw DimensionMismatch("need at least one atom");
    const int n = n_atoms;
    Eigen::MatrixXd t(n, n);
    const double bright_norm = std::sqrt(2.0 / (n + 1.0));
    for (int j = 1; j <= n; ++j)
        t(0, j - 1) = bright_norm * std::sin(pi * j / (n + 1.0));
    // Dark rows: recombine the remaining sine modes of the (N+1)-point grid
    // with a second sine transform over the N-point grid.
    const double dark_norm = std::sqrt(2.0 / n) * bright_norm;
    for (int i = 1; i < n; ++i)
        for (int j = 1; j <= n; ++j) {
            double acc = 0.0;
            for (int k = 1; k <= n - 1; ++k)
                acc += std::sin(pi * i * k / n) * std::sin(pi * j * (k + 1) / (n + 1.0));
            t(i, j - 1) = dark_norm * acc;
        }
    return {std::move(t)};
}

CouplingAudit transformed_coupling_structure(const DerivedModel& model,
                                             const ArrayGeometry& geom,
                                             const ModeTransform& transform) {
    const int n = model.n_atoms;
    if (geom.n_atoms() != n || transform.n_atoms() != n)
        throw DimensionMismatch("model, geometry and transform disagree on n_atoms");
    if (!model.base_spacing)
        throw WrongGeometry("the mode structure holds only at the base spacing");

    const double al = model.alpha.real();
    Eigen::VectorXd s(n);
    Eigen::VectorXd trap2(n);
    for (int i = 0; i < n; ++i) {
        s(i) = geom.s[i];
        trap2(i) = model.nu_i[i] * model.nu_i[i];
    }

    CouplingAudit audit;
    const Eigen::VectorXd ts = transform.t * s;
    audit.eps_rotated = 2.0 * model.u0 * model.eta * al * ts(0);
    audit.eps_closed_form = model.u0 * al * model.eta * std::sqrt(2.0 * (n + 1.0));

    for (int j = 1; j < n; ++j)
        audit.max_dark_cavity =
            std::max(audit.max_dark_cavity, std::abs(2.0 * model.u0 * model.eta * al * ts(j)));
    if (audit.max_dark_cavity > 1e-10 * std::abs(audit.eps_closed_form))
        throw StructureViolation("a dark mode couples directly to the cavity (strength " +
                                 std::to_string(audit.max_dark_cavity) + ")");

    const Eigen::MatrixXd c = transform.t * trap2.asDiagonal() * transform.t.transpose();
    audit.omega_rotated.resize(static_cast<size_t>(n - 1));
    audit.beta_rotated.resize(static_cast<size_t>(n - 1));
    audit.beta_closed_form.resize(static_cast<size_t>(n - 1));

    const double ea = model.eta * al;
    for (int j = 1; j < n; ++j) {
        const double w2 = c(j, j);
        if (!(w2 > 0.0))
            throw TrapDestabilized("rotated mode " + std::to_string(j) + " is unstable");
        const double wj = std::sqrt(w2);
        audit.omega_rotated[static_cast<size_t>(j - 1)] = wj;
        audit.beta_rotated[static_cast<size_t>(j - 1)] = -c(0, j) / std::sqrt(model.nu * wj);
        audit.beta_closed_form[static_cast<size_t>(j - 1)] =
            2.0 * model.u0 * ea * ea * std::sqrt(2.0 / n) * std::sqrt(model.nu / wj) *
            std::sin(pi * j / n);
        for (int k = j + 1; k < n; ++k)
            audit.max_dark_dark = std::max(audit.max_dark_dark, std::abs(c(j, k)));
    }

    const double beta_floor = 1e-12 * model.nu;
    for (int j = 1; j < n; ++j) {
        const double br = audit.beta_rotated[static_cast<size_t>(j - 1)];
        const double bc = audit.beta_closed_form[static_cast<size_t>(j - 1)];
        const double scale = std::max({std::abs(br), std::abs(bc), beta_floor});
        if (std::abs(br - bc) > 1e-8 * scale)
            throw StructureViolation("bright/dark coupling " + std::to_string(j) +
                                     " is " + std::to_string(br) + ", expected " +
                                     std::to_string(bc));
    }
    return audit;
}

} // namespace cavcool
