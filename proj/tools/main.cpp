#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavcool/analytics.hpp"
#include "cavcool/config.hpp"
#include "cavcool/errors.hpp"
#include "cavcool/result_table.hpp"
#include "cavcool/sweep.hpp"

namespace {

int cmd_run(const std::string& config_arg, const std::optional<std::string>& out_path,
            const std::optional<int>& workers, const std::vector<std::string>& overrides) {
    cavcool::RunConfig cfg =
        cavcool::load_run_config(cavcool::resolve_config_path(config_arg), overrides);
    if (out_path) cfg.output_path = *out_path;
    if (workers) cfg.workers = *workers;

    const cavcool::SweepOutcome outcome = cavcool::run_sweep(cfg);
    cavcool::write_csv(outcome.rows, cfg.output_path);

    std::optional<cavcool::FeasibilityNumbers> feas;
    if (cfg.feasibility) feas = cavcool::feasibility_report(*cfg.feasibility);
    cavcool::emit_report(outcome.rows, std::cout, feas);
    std::cout << "wrote " << cfg.output_path << "\n";
    return outcome.failures > 0 ? 3 : 0;
}

int cmd_report(const std::string& csv_path) {
    cavcool::emit_report(cavcool::read_csv(csv_path), std::cout);
    return 0;
}

int cmd_presets() {
    for (const auto& name : cavcool::list_presets()) std::cout << name << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cavity-cooling simulator for trapped atomic arrays"};
    app.require_subcommand(1);
    app.footer("exit codes: 0 success, 2 config error, 3 numerical failure in some sweep points");

    std::string config_arg;
    std::optional<std::string> out_path;
    std::optional<int> workers;
    std::vector<std::string> overrides;
    auto* run = app.add_subcommand("run", "run a sweep from a config file or preset name");
    run->add_option("config", config_arg, "config file path or preset name")->required();
    run->add_option("--out", out_path, "override the CSV output path");
    run->add_option("--workers", workers, "worker threads (0 = hardware)");
    run->add_option("--override", overrides, "config override, section.key=value (repeatable)");

    std::string csv_path;
    auto* report = app.add_subcommand("report", "summarize a result CSV");
    report->add_option("csv", csv_path, "result CSV produced by run")->required();

    auto* presets = app.add_subcommand("presets", "list bundled preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_arg, out_path, workers, overrides);
        if (report->parsed()) return cmd_report(csv_path);
        if (presets->parsed()) return cmd_presets();
    } catch (const cavcool::ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
