#include "cavcool/analytics.hpp"

#include <cmath>
#include <limits>

#include "cavcool/errors.hpp"

namespace cavcool {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double pi = 3.14159265358979323846;
}

SidebandSpectra sideband_spectra(const DerivedModel& model, double omega) {
    const auto lorentz = [&](double detuning) {
        const double u = detuning / model.kappa_eff;
        return 1.0 / (1.0 + u * u);
    };
    SidebandSpectra s;
    s.s_minus = lorentz(model.delta_c_prime + omega);
    s.s_plus = lorentz(model.delta_c_prime - omega);
    return s;
}

CollectiveModel collective_predictions(const DerivedModel& model) {
    if (!model.base_spacing)
        throw WrongGeometry("collective-mode predictions hold only at the base spacing");
    const int n = model.n_atoms;
    const double al = model.alpha.real();
    const double ea = model.eta * al;

    CollectiveModel cm;
    cm.eps_bright = model.u0 * al * model.eta * std::sqrt(2.0 * (n + 1.0));
    const SidebandSpectra sp = sideband_spectra(model, model.nu);
    cm.gamma_bright =
        cm.eps_bright * cm.eps_bright / (2.0 * model.kappa_eff) * (sp.s_minus - sp.s_plus);
    cm.n_bright_inf = sp.s_plus / (sp.s_minus - sp.s_plus);

    cm.omega_dark.resize(static_cast<size_t>(n - 1));
    cm.beta_dark.resize(static_cast<size_t>(n - 1));
    cm.gamma_dark.resize(static_cast<size_t>(n - 1));
    cm.gamma_dark_min = inf;
    for (int j = 1; j < n; ++j) {
        const double w2 = model.nu * (model.nu - 4.0 * model.u0 * ea * ea * std::cos(pi * j / n));
        if (!(w2 > 0.0))
            throw TrapDestabilized("collective mode " + std::to_string(j) + " is unstable");
        const double wj = std::sqrt(w2);
        const double beta = 2.0 * model.u0 * ea * ea * std::sqrt(2.0 / n) *
                            std::sqrt(model.nu / wj) * std::sin(pi * j / n);
        const double gj = beta * beta / cm.gamma_bright;
        cm.omega_dark[static_cast<size_t>(j - 1)] = wj;
        cm.beta_dark[static_cast<size_t>(j - 1)] = beta;
        cm.gamma_dark[static_cast<size_t>(j - 1)] = gj;
        cm.gamma_dark_min = std::min(cm.gamma_dark_min, gj);
    }
    return cm;
}

std::vector<double> independent_rates(const DerivedModel& model) {
    std::vector<double> rates(static_cast<size_t>(model.n_atoms));
    for (int i = 0; i < model.n_atoms; ++i) {
        const SidebandSpectra sp = sideband_spectra(model, model.nu_i[i]);
        rates[static_cast<size_t>(i)] =
            model.eps_i[i] * model.eps_i[i] / (2.0 * model.kappa_eff) * (sp.s_minus - sp.s_plus);
    }
    return rates;
}

CoolingRegime regime_classify(const DerivedModel& model) {
    CoolingRegime r;
    const double cdn = std::abs(model.c_d) * model.n_atoms;
    r.crossover_n = model.c_d != 0.0 ? 2.0 / std::abs(model.c_d) : inf;
    r.suppression = (cdn / 2.0) * (cdn / 2.0);
    r.label = cdn < 2.0 ? "independent" : "collective";
    return r;
}

PhononPrediction phonon_predictions(const DerivedModel& model, const ArrayGeometry& geom) {
    const int n = model.n_atoms;
    if (geom.n_atoms() != n)
        throw DimensionMismatch("geometry does not match the model");

    PhononPrediction out;
    out.rate_balance.resize(static_cast<size_t>(n));
    out.resolved_limit.resize(static_cast<size_t>(n));
    out.decoupled.resize(static_cast<size_t>(n));
    const double cdn = std::abs(model.c_d) * n;
    const double suppression = (cdn / 2.0) * (cdn / 2.0);
    const double inv_2cr = std::isinf(model.c_r) ? 0.0 : 1.0 / (2.0 * model.c_r);

    for (int i = 0; i < n; ++i) {
        const double s2 = geom.s[i] * geom.s[i];
        if (s2 == 0.0) {
            out.rate_balance[static_cast<size_t>(i)] = inf;
            out.resolved_limit[static_cast<size_t>(i)] = inf;
            out.decoupled[static_cast<size_t>(i)] = true;
            continue;
        }
        out.decoupled[static_cast<size_t>(i)] = false;
        const double spont_weight = inv_2cr * model.k_i[i] / s2;

        const SidebandSpectra sp = sideband_spectra(model, model.nu_i[i]);
        out.rate_balance[static_cast<size_t>(i)] =
            sp.s_plus / (sp.s_minus - sp.s_plus) * (1.0 + spont_weight / sp.s_plus);

        const double base = model.kappa_eff * model.kappa_eff / (4.0 * model.nu_i[i] * model.nu_i[i]);
        out.resolved_limit[static_cast<size_t>(i)] =
            base + suppression * spont_weight * (1.0 + base);
    }
    return out;
}

FeasibilityNumbers feasibility_report(const FeasibilityInputs& in) {
    if (!(in.omega_recoil_hz > 0.0) || !(in.eta > 0.0) || !(in.gamma_hz > 0.0) ||
        !(in.g_hz > 0.0) || !(in.delta_a_hz > 0.0) || !(in.slowest_rate > 0.0) ||
        !(in.kappa_divisor > 0.0))
        throw NonPositiveRate("feasibility inputs must all be positive");

    FeasibilityNumbers out;
    out.nu_hz = in.omega_recoil_hz / (in.eta * in.eta);
    out.kappa_hz = in.kappa_hz ? *in.kappa_hz : out.nu_hz / in.kappa_divisor;
    out.cooling_time_s = 1.0 / (in.slowest_rate * 2.0 * pi * out.kappa_hz);
    out.c_r = in.g_hz * in.g_hz / (out.kappa_hz * in.gamma_hz);
    out.c_d = in.g_hz * in.g_hz / (in.delta_a_hz * out.kappa_hz);
    out.n_max = std::sqrt(out.kappa_hz * in.delta_a_hz * in.delta_a_hz /
                          (in.gamma_hz * in.g_hz * in.g_hz));
    return out;
}

} // namespace cavcool
