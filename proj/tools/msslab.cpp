#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "msslab/config.hpp"
#include "msslab/error.hpp"
#include "msslab/harness.hpp"
#include "msslab/parallel.hpp"

int main(int argc, char** argv) {
    using namespace msslab;

    CLI::App app{"Short-interval mean squares of GL(n) Hecke eigenvalues"};
    app.set_version_flag("--version", version_string());

    std::string command;
    std::string config_path;
    unsigned threads = 0;
    bool force = false;
    app.add_option("command", command, "gen-form | build-table | rankin | theorem1 | theorem2 | omega-check | report")
        ->required()
        ->check(CLI::IsMember(commands()));
    app.add_option("--config", config_path, "configuration file")->required();
    app.add_option("--threads", threads, "worker threads (default: hardware concurrency)");
    app.add_flag("--force", force, "run despite violated asymptotic inequalities or non-converged quadrature");

    // Overrides: flag name -> config key.
    const std::vector<std::pair<std::string, std::string>> overrides = {
        {"--X", "experiment.X"},         {"--L", "experiment.L"},
        {"--delta", "experiment.Delta"}, {"--theta", "experiment.theta"},
        {"--samples", "experiment.samples"}, {"--seed", "experiment.seed"},
        {"--form", "form.source"},       {"--vartheta", "form.vartheta"},
        {"--n", "form.n"},               {"--M", "form.M"},
        {"--label", "form.label"},       {"--form-seed", "form.seed"},
        {"--ap-file", "form.ap_file"},   {"--eps", "experiment.eps"},
        {"--P-max", "experiment.P_max"}, {"--k-max", "experiment.k_max"},
        {"--series-cutoff", "experiment.series_cutoff"},
        {"--out", "output.dir"},         {"--cache-dir", "output.cache_dir"},
    };
    std::vector<std::optional<std::string>> values(overrides.size());
    for (std::size_t i = 0; i < overrides.size(); ++i) {
        app.add_option_function<std::string>(
            overrides[i].first, [&values, i](const std::string& v) { values[i] = v; }, "overrides " + overrides[i].second);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
        for (std::size_t i = 0; i < overrides.size(); ++i)
            if (values[i]) set_config_value(cfg, overrides[i].second, *values[i]);
        validate(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    }
    cfg.command = command;

    set_thread_count(threads);
    RunOptions opt;
    opt.force = force;
    opt.threads = thread_count();
    opt.log = &std::cerr;
    auto outcome = run(command, cfg, opt);
    for (const auto& f : outcome.files) std::cout << f.string() << "\n";
    std::cout << outcome.manifest.string() << "\n";
    return outcome.exit_code;
}
