#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cavcool/analytics.hpp"

namespace cavcool {

inline constexpr int kResultSchemaVersion = 1;

// One sweep point, flattened for tabular output.  Failed points keep their
// echoed inputs, carry the failure text in `error`, and leave every output
// empty (NaN / empty arrays).
struct ResultRow {
    // sweep point and echoed inputs
    int n_atoms = 0;
    int step = 0;         // lattice shift index l
    int step_count = 1;   // shift grid size L
    int winding = 0;
    double kappa = 1.0;
    double nu = 0.0;
    double eta = 0.0;
    double eta_p_re = 0.0;
    double eta_p_im = 0.0;
    double c_d = 0.0;
    double c_r = 0.0;
    int spont = 0;
    double c_x = 0.0;

    std::string status = "ok";  // "ok" or "error"
    std::string error;

    // derived scalars
    double delta_c = 0.0;
    double delta_c_prime = 0.0;
    double alpha = 0.0;
    double kappa_eff = 0.0;
    std::string regime;
    double crossover_n = 0.0;
    double suppression = 0.0;
    double min_rate = 0.0;
    double max_rate = 0.0;
    double pair_mismatch = 0.0;
    double mean_n = 0.0;
    double gamma_bright = 0.0;   // bright-mode cooling rate (base spacing only)
    double gamma_dark1 = 0.0;    // slowest-family dark-mode rate, first index
    double n_bright_inf = 0.0;
    double val_lamb_dicke = 0.0;
    double val_decay_hierarchy = 0.0;
    double val_coop_collective = 0.0;
    double val_coop_suppression = 0.0;
    double val_weak_coupling = 0.0;
    double val_eta_shift = 0.0;

    // per-mode / per-atom arrays
    std::vector<double> rates;   // N+1 folded decay rates, ascending
    std::vector<double> n;       // steady phonon numbers
    std::vector<double> gx;      // single-atom cooling rates
    std::vector<double> n_pred;  // rate-balance phonon prediction
    std::vector<double> n_lim;   // resolved-sideband-limit phonon prediction
};

void write_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_csv(const std::string& path);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    int points = 0;
};

// Ordinary least squares y = intercept + slope*x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Human-readable sweep summary: errors, regime crossover, shift-optimization
// gains, scaling fits, worst validity margins, feasibility numbers.
void emit_report(const std::vector<ResultRow>& rows, std::ostream& out,
                 const std::optional<FeasibilityNumbers>& feasibility = std::nullopt);

} // namespace cavcool
