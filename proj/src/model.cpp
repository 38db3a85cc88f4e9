#include "cavcool/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "cavcool/errors.hpp"

namespace cavcool {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
using cd = std::complex<double>;

void validate_params(const SystemParams& p, const ArrayGeometry& geom) {
    if (!(p.kappa > 0.0)) throw NonPositiveRate("kappa must be > 0");
    if (!(p.nu > 0.0)) throw NonPositiveRate("nu must be > 0");
    if (!(p.eta > 0.0)) throw NonPositiveRate("eta must be > 0");
    if (p.gamma < 0.0) throw NonPositiveRate("gamma must be >= 0");
    if (p.g < 0.0) throw NonPositiveRate("g must be >= 0");
    if (p.g > 0.0 && p.delta_a == 0.0)
        throw NonPositiveRate("delta_a must be nonzero when g > 0");
    if (p.c_x < 0.0 || p.c_x > 1.0)
        throw NonPositiveRate("c_x must lie in [0, 1]");
    if (p.n_atoms < 1) throw DimensionMismatch("n_atoms must be >= 1");
    if (p.n_atoms != geom.n_atoms())
        throw DimensionMismatch("n_atoms does not match the geometry");
}

// gamma * g^2 / delta_a^2 in kappa units, ignoring the spontaneous-emission
// toggle (validity margins always reflect the physical inputs).
double gamma_tilde_of(const SystemParams& p) {
    if (p.gamma <= 0.0 || p.g <= 0.0 || !std::isfinite(p.delta_a)) return 0.0;
    const double g = p.g / p.kappa;
    const double da = p.delta_a / p.kappa;
    return (p.gamma / p.kappa) * (g / da) * (g / da);
}

double cooperativity_of(const SystemParams& p) {
    if (p.gamma <= 0.0) return inf;
    return (p.g / p.kappa) * (p.g / p.kappa) / (p.gamma / p.kappa);
}

ValidityEntry make_entry(std::string name, double lhs, double rhs, double threshold) {
    ValidityEntry e;
    e.name = std::move(name);
    e.lhs = lhs;
    e.rhs = rhs;
    if (lhs == 0.0)
        e.ratio = 0.0;
    else if (std::isinf(rhs))
        e.ratio = 0.0;
    else if (rhs == 0.0)
        e.ratio = inf;
    else
        e.ratio = lhs / rhs;
    e.pass = e.ratio <= threshold;
    return e;
}

} // namespace

std::vector<ValidityEntry> ValidityReport::entries() const {
    return {lamb_dicke, decay_hierarchy, coop_collective, coop_suppression, weak_coupling, eta_shift};
}

bool ValidityReport::all_pass() const {
    for (const auto& e : entries())
        if (!e.pass) return false;
    return true;
}

DerivedModel derive_model(const SystemParams& params, const ArrayGeometry& geom) {
    validate_params(params, geom);
    const int n = params.n_atoms;

    DerivedModel m;
    m.kappa_phys = params.kappa;
    m.nu = params.nu / params.kappa;
    m.eta = params.eta;
    m.n_atoms = n;
    m.base_spacing = geom.is_base_spacing();

    const double g = params.g / params.kappa;
    const double da = params.delta_a / params.kappa;
    m.u0 = (g > 0.0 && std::isfinite(da)) ? g * g / da : 0.0;
    m.c_d = m.u0;
    m.c_r = cooperativity_of(params);
    m.gamma_tilde = params.spont_emission ? gamma_tilde_of(params) : 0.0;

    m.d_ai.resize(static_cast<size_t>(n));
    m.k_i.resize(static_cast<size_t>(n));
    double sum_da = 0.0;
    m.sum_cos2_half = 0.0;
    for (int i = 0; i < n; ++i) {
        const double hc2 = geom.half_cos[i] * geom.half_cos[i];
        const double hs2 = geom.half_sin[i] * geom.half_sin[i];
        m.sum_cos2_half += hc2;
        m.d_ai[i] = m.gamma_tilde * hc2;
        m.k_i[i] = hs2 + params.c_x * hc2;
        sum_da += m.d_ai[i];
    }
    m.kappa_eff = 1.0 + sum_da / 2.0;
    if (m.kappa_eff - 1.0 >= 0.5)
        throw ApproximationViolated("effective cavity linewidth exceeds 1.5*kappa");

    if (params.detuning_policy == DetuningPolicy::Sideband) {
        m.delta_c_prime = -m.nu;
        m.delta_c = -m.nu + m.u0 * m.sum_cos2_half;
    } else {
        m.delta_c = params.delta_c / params.kappa;
        m.delta_c_prime = m.delta_c - m.u0 * m.sum_cos2_half;
    }

    // Rotate the pump so the mean field is real and positive.
    const cd denom(m.kappa_eff, -m.delta_c_prime);
    const cd alpha_raw = (params.eta_p / params.kappa) / denom;
    m.pump_rotation = -std::arg(alpha_raw);
    m.alpha = cd(std::abs(alpha_raw), 0.0);
    const double al = m.alpha.real();

    m.nu_i.resize(static_cast<size_t>(n));
    m.eta_i.resize(static_cast<size_t>(n));
    m.eps_i.resize(static_cast<size_t>(n));
    m.d_bi.resize(static_cast<size_t>(n));
    const double ea2 = (params.eta * al) * (params.eta * al);
    m.min_abs_s = inf;
    for (int i = 0; i < n; ++i) {
        const double nu2 = m.nu * (m.nu - 4.0 * m.u0 * ea2 * geom.c[i]);
        if (!(nu2 > 0.0))
            throw TrapDestabilized("trap frequency squared is not positive for atom " +
                                   std::to_string(i + 1));
        m.nu_i[i] = std::sqrt(nu2);
        m.eta_i[i] = params.eta * std::sqrt(m.nu / m.nu_i[i]);
        m.eps_i[i] = 2.0 * m.u0 * m.eta_i[i] * al * geom.s[i];
        m.d_bi[i] = m.gamma_tilde * params.eta * params.eta * al * al * m.k_i[i];
        const double as = std::abs(geom.s[i]);
        if (as > 0.0) m.min_abs_s = std::min(m.min_abs_s, as);
    }
    return m;
}

ValidityReport check_validity(const DerivedModel& model, const SystemParams& params,
                              double threshold) {
    ValidityReport r;
    r.threshold = threshold;
    const double al = model.alpha.real();
    const double ea2 = (model.eta * al) * (model.eta * al);
    const double gt = gamma_tilde_of(params);
    const double cr = cooperativity_of(params);
    const double n = model.n_atoms;

    r.lamb_dicke = make_entry("lamb_dicke", 6.0 * std::abs(model.u0) * ea2, model.nu, threshold);
    r.decay_hierarchy =
        make_entry("decay_hierarchy", gt * model.sum_cos2_half / 2.0, 1.0, threshold);

    double coop_lhs = inf;
    if (std::isfinite(model.min_abs_s) && model.min_abs_s > 0.0)
        coop_lhs = model.c_d * model.c_d * n * n / (8.0 * model.min_abs_s * model.min_abs_s);
    if (model.c_d == 0.0) coop_lhs = 0.0;
    r.coop_collective = make_entry("coop_collective", coop_lhs, cr, threshold);

    r.coop_suppression = make_entry("coop_suppression", gt * n * n, 1.0, threshold);

    const double eps = std::abs(model.u0) * al * model.eta * std::sqrt(2.0 * (n + 1.0));
    r.weak_coupling = make_entry("weak_coupling", eps, model.kappa_eff, threshold);

    double max_shift = 0.0;
    for (double ei : model.eta_i)
        max_shift = std::max(max_shift, std::abs(ei / model.eta - 1.0));
    r.eta_shift = make_entry("eta_shift", max_shift, 1.0, threshold);
    return r;
}

namespace {

// One sweep of the fixed-point map.  Displacements respond to the field
// intensity; the field responds to the displacement pattern.
struct MeanFieldMap {
    double nu, u0, eta, kappa_eff, delta_c_prime;
    cd pump;  // rotated eta_p, kappa units
    const ArrayGeometry* geom;

    std::vector<double> displacements(const cd& a) const {
        const double i2 = std::norm(a);
        const int n = geom->n_atoms();
        std::vector<double> x(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double den = nu - 4.0 * u0 * eta * i2 * geom->c[i];
            if (den == 0.0)
                throw NoConvergence("displacement denominator vanished");
            x[i] = 2.0 * u0 * eta * i2 * geom->s[i] / den;
        }
        return x;
    }

    cd field(const std::vector<double>& x) const {
        double shift = 0.0;
        for (int i = 0; i < geom->n_atoms(); ++i)
            shift += geom->s[i] * x[i] + geom->c[i] * x[i] * x[i];
        return pump / cd(kappa_eff, -(delta_c_prime + u0 * shift));
    }
};

} // namespace

MeanFieldSolution solve_mean_field(const SystemParams& params, const ArrayGeometry& geom,
                                   const MeanFieldOptions& opts) {
    const DerivedModel m = derive_model(params, geom);

    MeanFieldMap map;
    map.nu = m.nu;
    map.u0 = m.u0;
    map.eta = params.eta;
    map.kappa_eff = m.kappa_eff;
    map.delta_c_prime = m.delta_c_prime;
    map.pump = (params.eta_p / params.kappa) * std::polar(1.0, m.pump_rotation);
    map.geom = &geom;

    MeanFieldSolution sol;
    sol.mean_field = m.alpha;  // zero-order seed
    sol.mean_displacements.assign(static_cast<size_t>(geom.n_atoms()), 0.0);

    const double lam = opts.damping;
    for (int it = 1; it <= opts.max_iters; ++it) {
        const auto x_new = map.displacements(sol.mean_field);
        std::vector<double> x(sol.mean_displacements.size());
        double dx = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            x[i] = sol.mean_displacements[i] + lam * (x_new[i] - sol.mean_displacements[i]);
            dx = std::max(dx, std::abs(x_new[i] - sol.mean_displacements[i]));
        }
        const cd a_target = map.field(x);
        const cd a = sol.mean_field + lam * (a_target - sol.mean_field);
        const double da = std::abs(a_target - sol.mean_field);

        sol.mean_displacements = std::move(x);
        sol.mean_field = a;
        sol.iterations = it;
        if (da <= opts.tol * std::max(std::abs(a), 1e-300) && dx <= opts.tol)
            return sol;
    }
    throw NoConvergence("mean-field iteration did not converge in " +
                        std::to_string(opts.max_iters) + " steps");
}

double mean_field_residual(const SystemParams& params, const ArrayGeometry& geom,
                           const MeanFieldSolution& sol) {
    const DerivedModel m = derive_model(params, geom);
    MeanFieldMap map;
    map.nu = m.nu;
    map.u0 = m.u0;
    map.eta = params.eta;
    map.kappa_eff = m.kappa_eff;
    map.delta_c_prime = m.delta_c_prime;
    map.pump = (params.eta_p / params.kappa) * std::polar(1.0, m.pump_rotation);
    map.geom = &geom;

    double r = std::abs(map.field(sol.mean_displacements) - sol.mean_field);
    const auto x = map.displacements(sol.mean_field);
    for (size_t i = 0; i < x.size(); ++i)
        r = std::max(r, std::abs(x[i] - sol.mean_displacements[i]));
    return r;
}

} // namespace cavcool
