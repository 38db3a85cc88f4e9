#include "cavcool/sweep.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "cavcool/analytics.hpp"
#include "cavcool/errors.hpp"
#include "cavcool/linear_system.hpp"

namespace cavcool {

namespace {
constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();
constexpr double inf = std::numeric_limits<double>::infinity();
}

ResultRow evaluate_point(const RunConfig& config, int n_atoms, int step) {
    ResultRow row;
    row.n_atoms = n_atoms;
    row.step = step;
    row.step_count = config.step_count;
    row.winding = config.winding;

    SystemParams params = config.base;
    params.n_atoms = n_atoms;
    row.kappa = params.kappa;
    row.nu = params.nu;
    row.eta = params.eta;
    row.eta_p_re = params.eta_p.real();
    row.eta_p_im = params.eta_p.imag();
    row.spont = params.spont_emission ? 1 : 0;
    row.c_x = params.c_x;
    row.c_d = (params.g > 0.0 && std::isfinite(params.delta_a))
                  ? params.g * params.g / (params.delta_a * params.kappa)
                  : 0.0;
    row.c_r = params.gamma > 0.0 ? params.g * params.g / (params.kappa * params.gamma) : inf;

    for (double* field : {&row.delta_c, &row.delta_c_prime, &row.alpha, &row.kappa_eff,
                          &row.crossover_n, &row.suppression, &row.min_rate, &row.max_rate,
                          &row.pair_mismatch, &row.mean_n, &row.gamma_bright, &row.gamma_dark1,
                          &row.n_bright_inf, &row.val_lamb_dicke, &row.val_decay_hierarchy,
                          &row.val_coop_collective, &row.val_coop_suppression,
                          &row.val_weak_coupling, &row.val_eta_shift})
        *field = nan_v;

    try {
        const ArrayGeometry geom =
            config.lattice_kind == LatticeProvenance::Kind::Base
                ? base_lattice(n_atoms, config.winding)
                : optimized_lattice(n_atoms, config.winding, step, config.step_count);
        const DerivedModel model = derive_model(params, geom);

        row.delta_c = model.delta_c;
        row.delta_c_prime = model.delta_c_prime;
        row.alpha = model.alpha.real();
        row.kappa_eff = model.kappa_eff;

        const CoolingRegime regime = regime_classify(model);
        row.regime = regime.label;
        row.crossover_n = regime.crossover_n;
        row.suppression = regime.suppression;

        const ValidityReport validity = check_validity(model, params, config.validity_threshold);
        row.val_lamb_dicke = validity.lamb_dicke.ratio;
        row.val_decay_hierarchy = validity.decay_hierarchy.ratio;
        row.val_coop_collective = validity.coop_collective.ratio;
        row.val_coop_suppression = validity.coop_suppression.ratio;
        row.val_weak_coupling = validity.weak_coupling.ratio;
        row.val_eta_shift = validity.eta_shift.ratio;

        const LinearSystem sys = build_linear_system(model, geom, params);
        EigenRates rates;
        try {
            rates = eigen_rates(sys, false);
        } catch (const EigenFailure&) {
            rates = eigen_rates(sys, true);
        }
        row.rates = rates.rates;
        row.min_rate = rates.min_rate;
        row.max_rate = rates.max_rate;
        row.pair_mismatch = rates.max_pair_mismatch;

        const SteadyCovariance cov = steady_covariance(sys);
        const PhononNumbers phonons = phonon_numbers(cov, sys);
        row.n = phonons.n;
        row.mean_n = phonons.mean;

        row.gx = independent_rates(model);
        const PhononPrediction pred = phonon_predictions(model, geom);
        row.n_pred = pred.rate_balance;
        row.n_lim = pred.resolved_limit;

        if (model.base_spacing) {
            const CollectiveModel cm = collective_predictions(model);
            row.gamma_bright = cm.gamma_bright;
            row.n_bright_inf = cm.n_bright_inf;
            if (n_atoms > 1) row.gamma_dark1 = cm.gamma_dark.front();
        }
    } catch (const std::exception& e) {
        row.status = "error";
        row.error = e.what();
    }
    return row;
}

SweepOutcome run_sweep(const RunConfig& config) {
    if (config.n_values.empty() || config.step_values.empty())
        throw ConfigInvalid("sweep has no points");

    std::vector<std::pair<int, int>> points;
    for (int n : config.n_values)
        for (int l : config.step_values)
            points.emplace_back(n, l);

    SweepOutcome out;
    out.rows.resize(points.size());

    unsigned workers = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                          : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(points.size()));

    std::atomic<size_t> next{0};
    const auto drain = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            out.rows[i] = evaluate_point(config, points[i].first, points[i].second);
        }
    };
    if (workers <= 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(drain);
        for (auto& t : pool) t.join();
    }

    for (const auto& r : out.rows)
        if (r.status != "ok") ++out.failures;
    return out;
}

} // namespace cavcool
