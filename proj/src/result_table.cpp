#include "cavcool/result_table.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "cavcool/errors.hpp"

namespace cavcool {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) {
    if (std::isnan(x)) return {};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_short(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quote(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

// Splits CSV text into records, honouring quoted fields.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        switch (ch) {
            case '"': quoted = true; any = true; break;
            case ',':
                record.push_back(std::move(field));
                field.clear();
                any = true;
                break;
            case '\r': break;
            case '\n':
                if (any || !field.empty() || !record.empty()) {
                    record.push_back(std::move(field));
                    field.clear();
                    records.push_back(std::move(record));
                    record.clear();
                    any = false;
                }
                break;
            default: field += ch; any = true; break;
        }
    }
    if (any || !field.empty() || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

const char* const kArrayPrefixes[] = {"rate_", "n_", "gx_", "npred_", "nlim_"};

bool is_array_column(const std::string& name, const std::string& prefix) {
    if (name.size() != prefix.size() + 3) return false;
    if (name.compare(0, prefix.size(), prefix) != 0) return false;
    for (size_t i = prefix.size(); i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
    return true;
}

std::vector<std::string> scalar_header() {
    return {"schema_version", "status", "error", "n_atoms", "step", "step_count", "winding",
            "kappa", "nu", "eta", "eta_p_re", "eta_p_im", "c_d", "c_r", "spont", "c_x",
            "delta_c", "delta_c_prime", "alpha", "kappa_eff", "regime", "crossover_n",
            "suppression", "min_rate", "max_rate", "pair_mismatch", "mean_n", "gamma_bright",
            "gamma_dark1", "n_bright_inf", "val_lamb_dicke", "val_decay_hierarchy",
            "val_coop_collective", "val_coop_suppression", "val_weak_coupling", "val_eta_shift"};
}

} // namespace

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    int width = 1;
    for (const auto& r : rows) width = std::max(width, r.n_atoms);

    std::ofstream out(path);
    if (!out)
        throw OutputUnwritable("cannot open '" + path + "' for writing");

    std::vector<std::string> header = scalar_header();
    char buf[32];
    const auto push_array = [&](const char* prefix, int count) {
        for (int i = 1; i <= count; ++i) {
            std::snprintf(buf, sizeof buf, "%s%03d", prefix, i);
            header.emplace_back(buf);
        }
    };
    push_array("rate_", width + 1);
    push_array("n_", width);
    push_array("gx_", width);
    push_array("npred_", width);
    push_array("nlim_", width);
    for (size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";

    for (const auto& r : rows) {
        std::vector<std::string> cells;
        cells.reserve(header.size());
        cells.push_back(std::to_string(kResultSchemaVersion));
        cells.push_back(quote(r.status));
        cells.push_back(quote(r.error));
        cells.push_back(std::to_string(r.n_atoms));
        cells.push_back(std::to_string(r.step));
        cells.push_back(std::to_string(r.step_count));
        cells.push_back(std::to_string(r.winding));
        for (double v : {r.kappa, r.nu, r.eta, r.eta_p_re, r.eta_p_im, r.c_d, r.c_r})
            cells.push_back(fmt(v));
        cells.push_back(std::to_string(r.spont));
        cells.push_back(fmt(r.c_x));
        for (double v : {r.delta_c, r.delta_c_prime, r.alpha, r.kappa_eff})
            cells.push_back(fmt(v));
        cells.push_back(quote(r.regime));
        for (double v : {r.crossover_n, r.suppression, r.min_rate, r.max_rate, r.pair_mismatch,
                         r.mean_n, r.gamma_bright, r.gamma_dark1, r.n_bright_inf,
                         r.val_lamb_dicke, r.val_decay_hierarchy, r.val_coop_collective,
                         r.val_coop_suppression, r.val_weak_coupling, r.val_eta_shift})
            cells.push_back(fmt(v));
        const auto push_values = [&](const std::vector<double>& v, int count) {
            for (int i = 0; i < count; ++i)
                cells.push_back(i < static_cast<int>(v.size()) ? fmt(v[static_cast<size_t>(i)])
                                                               : std::string());
        };
        push_values(r.rates, width + 1);
        push_values(r.n, width);
        push_values(r.gx, width);
        push_values(r.n_pred, width);
        push_values(r.n_lim, width);

        for (size_t i = 0; i < cells.size(); ++i)
            out << (i ? "," : "") << cells[i];
        out << "\n";
    }
    out.flush();
    if (!out)
        throw OutputUnwritable("write to '" + path + "' failed");
}

std::vector<ResultRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigInvalid("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto records = parse_csv(buf.str());
    if (records.empty())
        throw ConfigInvalid("'" + path + "' is empty");

    const auto& header = records.front();
    std::map<std::string, size_t> col;
    for (size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const auto& name : scalar_header())
        if (!col.count(name))
            throw ConfigInvalid("'" + path + "' lacks column '" + name + "'");

    std::map<std::string, std::vector<size_t>> array_cols;
    for (const char* prefix : kArrayPrefixes) {
        auto& list = array_cols[prefix];
        for (size_t i = 0; i < header.size(); ++i)
            if (is_array_column(header[i], prefix)) list.push_back(i);
        std::sort(list.begin(), list.end(),
                  [&](size_t a, size_t b) { return header[a] < header[b]; });
    }

    std::vector<ResultRow> rows;
    for (size_t rec = 1; rec < records.size(); ++rec) {
        const auto& cells = records[rec];
        const auto cell = [&](const std::string& name) -> const std::string& {
            static const std::string empty;
            const size_t i = col.at(name);
            return i < cells.size() ? cells[i] : empty;
        };
        const auto geti = [&](const std::string& name) {
            const std::string& v = cell(name);
            return v.empty() ? 0 : std::atoi(v.c_str());
        };
        const auto getd = [&](const std::string& name) {
            const std::string& v = cell(name);
            return v.empty() ? nan_v : std::strtod(v.c_str(), nullptr);
        };
        if (geti("schema_version") != kResultSchemaVersion)
            throw ConfigInvalid("'" + path + "' has schema version " + cell("schema_version") +
                                ", expected " + std::to_string(kResultSchemaVersion));

        ResultRow r;
        r.status = cell("status");
        r.error = cell("error");
        r.n_atoms = geti("n_atoms");
        r.step = geti("step");
        r.step_count = geti("step_count");
        r.winding = geti("winding");
        r.kappa = getd("kappa");
        r.nu = getd("nu");
        r.eta = getd("eta");
        r.eta_p_re = getd("eta_p_re");
        r.eta_p_im = getd("eta_p_im");
        r.c_d = getd("c_d");
        r.c_r = getd("c_r");
        r.spont = geti("spont");
        r.c_x = getd("c_x");
        r.delta_c = getd("delta_c");
        r.delta_c_prime = getd("delta_c_prime");
        r.alpha = getd("alpha");
        r.kappa_eff = getd("kappa_eff");
        r.regime = cell("regime");
        r.crossover_n = getd("crossover_n");
        r.suppression = getd("suppression");
        r.min_rate = getd("min_rate");
        r.max_rate = getd("max_rate");
        r.pair_mismatch = getd("pair_mismatch");
        r.mean_n = getd("mean_n");
        r.gamma_bright = getd("gamma_bright");
        r.gamma_dark1 = getd("gamma_dark1");
        r.n_bright_inf = getd("n_bright_inf");
        r.val_lamb_dicke = getd("val_lamb_dicke");
        r.val_decay_hierarchy = getd("val_decay_hierarchy");
        r.val_coop_collective = getd("val_coop_collective");
        r.val_coop_suppression = getd("val_coop_suppression");
        r.val_weak_coupling = getd("val_weak_coupling");
        r.val_eta_shift = getd("val_eta_shift");

        const auto read_array = [&](const char* prefix, std::vector<double>& dst) {
            for (size_t i : array_cols[prefix]) {
                if (i >= cells.size() || cells[i].empty()) break;
                dst.push_back(std::strtod(cells[i].c_str(), nullptr));
            }
        };
        read_array("rate_", r.rates);
        read_array("n_", r.n);
        read_array("gx_", r.gx);
        read_array("npred_", r.n_pred);
        read_array("nlim_", r.n_lim);
        rows.push_back(std::move(r));
    }
    return rows;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw DimensionMismatch("fit_line needs equally long x and y");
    LineFit f;
    f.points = static_cast<int>(x.size());
    if (f.points < 2)
        throw DimensionMismatch("fit_line needs at least two points");
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < f.points; ++i) { mx += x[i]; my += y[i]; }
    mx /= f.points;
    my /= f.points;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < f.points; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw DimensionMismatch("fit_line needs at least two distinct x values");
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (f.points > 2) {
        double ss = 0.0;
        for (int i = 0; i < f.points; ++i) {
            const double r = y[i] - (f.intercept + f.slope * x[i]);
            ss += r * r;
        }
        f.slope_stderr = std::sqrt(ss / (f.points - 2) / sxx);
    }
    return f;
}

namespace {

double hottest(const ResultRow& r) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : r.n) m = std::max(m, v);
    return m;
}

} // namespace

void emit_report(const std::vector<ResultRow>& rows, std::ostream& out,
                 const std::optional<FeasibilityNumbers>& feasibility) {
    std::vector<const ResultRow*> ok;
    std::vector<const ResultRow*> failed;
    std::set<int> n_seen, steps_seen;
    for (const auto& r : rows) {
        (r.status == "ok" ? ok : failed).push_back(&r);
        n_seen.insert(r.n_atoms);
        steps_seen.insert(r.step);
    }

    out << "points: " << rows.size() << " (" << ok.size() << " ok, " << failed.size()
        << " failed)";
    if (!n_seen.empty())
        out << ", N = " << *n_seen.begin() << ".." << *n_seen.rbegin();
    if (steps_seen.size() > 1)
        out << ", shift steps = " << *steps_seen.begin() << ".." << *steps_seen.rbegin();
    out << "\n";
    size_t shown = 0;
    for (const auto* r : failed) {
        if (shown++ == 3) { out << "  ... " << failed.size() - 3 << " more failures\n"; break; }
        out << "  failed N=" << r->n_atoms << " l=" << r->step << ": " << r->error << "\n";
    }
    if (ok.empty()) return;

    // Regime crossover.
    const double crossover = ok.front()->crossover_n;
    if (n_seen.size() > 1 && std::isfinite(crossover)) {
        if (*n_seen.begin() < crossover && crossover <= *n_seen.rbegin())
            out << "regime: collective suppression sets in at N ~ " << fmt_short(crossover)
                << " (c_d*N = 2); sweep spans both sides\n";
        else
            out << "regime: " << ok.front()->regime << " throughout (crossover at N ~ "
                << fmt_short(crossover) << ")\n";
    } else {
        out << "regime: " << ok.front()->regime << " at N = " << ok.front()->n_atoms
            << " (suppression factor " << fmt_short(ok.front()->suppression) << ")\n";
    }

    // Shift optimization gains, per N, against the unshifted lattice.
    if (steps_seen.size() > 1) {
        for (int n : n_seen) {
            const ResultRow* base = nullptr;
            const ResultRow* best = nullptr;
            for (const auto* r : ok) {
                if (r->n_atoms != n) continue;
                if (r->step == 0) base = r;
                if (!best || r->min_rate > best->min_rate) best = r;
            }
            if (!base || !best) continue;
            out << "shift optimization N=" << n << ": best min rate " << fmt_short(best->min_rate)
                << " at l=" << best->step << "/" << best->step_count << " ("
                << fmt_short(best->min_rate / base->min_rate) << "x the l=0 rate)\n";
        }
    }

    // Large-N scaling fits per shift step.
    for (int step : steps_seen) {
        std::vector<double> ln_n, ln_rate, ln_hot;
        for (const auto* r : ok) {
            if (r->step != step || r->n_atoms < 60) continue;
            if (!(r->min_rate > 0.0)) continue;
            ln_n.push_back(std::log(static_cast<double>(r->n_atoms)));
            ln_rate.push_back(std::log(r->min_rate));
            const double h = hottest(*r);
            ln_hot.push_back(h > 0.0 ? std::log(h) : nan_v);
        }
        if (ln_n.size() < 3) continue;
        const LineFit rate_fit = fit_line(ln_n, ln_rate);
        out << "scaling l=" << step << " (N >= 60): min-rate exponent " << fmt_short(rate_fit.slope)
            << " +/- " << fmt_short(1.96 * rate_fit.slope_stderr);
        if (std::none_of(ln_hot.begin(), ln_hot.end(), [](double v) { return std::isnan(v); })) {
            const LineFit hot_fit = fit_line(ln_n, ln_hot);
            out << ", hottest-atom exponent " << fmt_short(hot_fit.slope) << " +/- "
                << fmt_short(1.96 * hot_fit.slope_stderr);
        }
        out << " (95%)\n";
    }

    // Worst validity margins over the sweep.
    struct Margin { const char* name; double ResultRow::*field; };
    const Margin margins[] = {
        {"lamb_dicke", &ResultRow::val_lamb_dicke},
        {"decay_hierarchy", &ResultRow::val_decay_hierarchy},
        {"coop_collective", &ResultRow::val_coop_collective},
        {"coop_suppression", &ResultRow::val_coop_suppression},
        {"weak_coupling", &ResultRow::val_weak_coupling},
        {"eta_shift", &ResultRow::val_eta_shift},
    };
    out << "validity (worst ratio over sweep):";
    for (const auto& m : margins) {
        double worst = -1.0;
        int at = 0;
        for (const auto* r : ok)
            if (r->*(m.field) > worst) { worst = r->*(m.field); at = r->n_atoms; }
        out << " " << m.name << " " << fmt_short(worst) << " (N=" << at << ")";
    }
    out << "\n";

    if (feasibility) {
        out << "feasibility: nu = " << fmt_short(feasibility->nu_hz / 1e6)
            << " MHz, kappa = " << fmt_short(feasibility->kappa_hz / 1e3)
            << " kHz, cooling time = " << fmt_short(feasibility->cooling_time_s * 1e3)
            << " ms, c_r = " << fmt_short(feasibility->c_r) << ", c_d = "
            << fmt_short(feasibility->c_d) << ", N_max = " << fmt_short(feasibility->n_max)
            << "\n";
    }
}

} // namespace cavcool
