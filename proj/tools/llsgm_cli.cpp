#include "llsgm/assembly.hpp"
#include "llsgm/config.hpp"
#include "llsgm/error.hpp"
#include "llsgm/experiments.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

using namespace llsgm;

namespace {

// Exit codes by failure class; 1 is reserved for anything unexpected.
int exit_code(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::invalid_argument: return 2;
        case ErrorCategory::configuration: return 3;
        case ErrorCategory::singular_system: return 4;
        case ErrorCategory::singular_firing_rate: return 5;
        case ErrorCategory::ill_conditioned_basis: return 6;
        case ErrorCategory::nonpositive_diffusion: return 7;
        case ErrorCategory::cfl_violation: return 8;
        case ErrorCategory::convergence_failure: return 9;
        case ErrorCategory::io: return 10;
    }
    return 1;
}

constexpr int determinism_mismatch = 11;

void report_error(std::string_view category, const std::string& message) {
    const nlohmann::json line = {{"error", {{"category", category}, {"message", message}}}};
    std::cerr << line.dump() << "\n";
}

struct RunOptions {
    std::string config;
    std::string preset;
    std::string out;
    int workers = 0;
    bool check_determinism = false;
};

ExperimentConfig resolve(const RunOptions& opt, std::optional<ExperimentKind> expected) {
    if (opt.config.empty() == opt.preset.empty()) {
        fail(ErrorCategory::invalid_argument, "give exactly one of --config or --preset");
    }
    ExperimentConfig c = opt.config.empty() ? preset_config(opt.preset) : load_config(opt.config);
    if (expected && c.kind != *expected) {
        fail(ErrorCategory::configuration, "config describes experiment '" + std::string(to_string(c.kind)) +
                                               "', not '" + std::string(to_string(*expected)) + "'");
    }
    if (!opt.out.empty()) c.output_directory = opt.out;
    return c;
}

int run(const RunOptions& opt, std::optional<ExperimentKind> expected) {
    const ExperimentConfig c = resolve(opt, expected);
    const int workers = opt.workers > 0 ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
    const ExperimentReport report = run_experiment(c, workers);
    if (opt.check_determinism) {
        const ExperimentReport again = run_experiment(c, workers);
        int compared = 0;
        for (std::size_t i = 0; i < report.files.size(); ++i) {
            if (!report.files[i].deterministic) continue;
            ++compared;
            if (report.files[i].content != again.files[i].content) {
                report_error("determinism", report.files[i].name + " differs between two runs");
                return determinism_mismatch;
            }
        }
        std::printf("determinism: %d files identical across two runs\n", compared);
    }
    write_report(report, c.output_directory);
    std::printf("%s (%s) -> %s\n", c.name.c_str(), std::string(to_string(c.kind)).c_str(),
                c.output_directory.c_str());
    for (const auto& line : report.summary) std::printf("  %s\n", line.c_str());
    return 0;
}

void add_run_options(CLI::App* sub, RunOptions& opt) {
    sub->add_option("--config", opt.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--preset", opt.preset, "built-in config by name (see `presets`)");
    sub->add_option("--out", opt.out, "output directory, overriding the config");
    sub->add_option("--workers", opt.workers, "concurrent cells (default: hardware threads)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--check-determinism", opt.check_determinism,
                  "run twice and require identical output (timing files excluded)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Laguerre-Legendre spectral Galerkin solver for integrate-and-fire population densities"};
    app.require_subcommand(1);

    RunOptions opt;
    std::optional<ExperimentKind> expected;
    std::function<int()> action;

    auto* generic = app.add_subcommand("run", "run the experiment named in the config");
    add_run_options(generic, opt);
    generic->callback([&] { action = [&] { return run(opt, std::nullopt); }; });

    for (ExperimentKind kind : {ExperimentKind::convergence_time, ExperimentKind::convergence_space,
                                ExperimentKind::stability_grid, ExperimentKind::efficiency, ExperimentKind::blowup,
                                ExperimentKind::twopop_regimes, ExperimentKind::compare_fdm}) {
        auto* sub = app.add_subcommand(std::string(to_string(kind)), "run a config whose experiment is " + std::string(to_string(kind)));
        add_run_options(sub, opt);
        sub->callback([&, kind] { action = [&, kind] { return run(opt, kind); }; });
    }

    int M = 8;
    double beta = 1.0;
    std::string matrix_dir = "matrices";
    auto* dump = app.add_subcommand("dump-matrices", "write H, A, B, C, D, G, F and the mass functional as CSV");
    dump->add_option("-M", M, "expansion number")->check(CLI::PositiveNumber);
    dump->add_option("--beta", beta, "decay parameter of the interface function");
    dump->add_option("--out", matrix_dir, "output directory");
    dump->callback([&] {
        action = [&] {
            const BasisSet basis(M, Domain{1.0, 2.0, beta});
            const GalerkinMatrices m = assemble(basis);
            std::filesystem::create_directories(matrix_dir);
            const std::pair<const char*, Eigen::MatrixXd> mats[] = {
                {"H", m.H}, {"A", m.A}, {"B", m.B}, {"C", m.C}, {"D", m.D}, {"G", m.G}, {"F", m.F}, {"mass", m.mass}};
            for (const auto& [name, mat] : mats) {
                const auto path = std::filesystem::path(matrix_dir) / (std::string(name) + ".csv");
                std::ofstream out(path);
                write_matrix_csv(out, mat);
                if (!out) fail(ErrorCategory::io, "cannot write " + path.string());
            }
            std::printf("M = %d, dimension %d -> %s\n", M, basis.dim(), matrix_dir.c_str());
            return 0;
        };
    });

    std::string preset_dir;
    auto* presets = app.add_subcommand("presets", "list built-in configs, or write them as JSON files");
    presets->add_option("--write", preset_dir, "directory to write <name>.json files into");
    presets->callback([&] {
        action = [&] {
            for (const auto& name : preset_names()) {
                if (preset_dir.empty()) {
                    std::printf("%s\n", name.c_str());
                    continue;
                }
                std::filesystem::create_directories(preset_dir);
                const auto path = std::filesystem::path(preset_dir) / (name + ".json");
                std::ofstream out(path);
                out << dump_config(preset_config(name));
                if (!out) fail(ErrorCategory::io, "cannot write " + path.string());
                std::printf("%s\n", path.string().c_str());
            }
            return 0;
        };
    });

    try {
        app.parse(argc, argv);
        return action();
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        report_error(to_string(e.category()), e.what());
        return exit_code(e.category());
    } catch (const std::exception& e) {
        report_error("internal", e.what());
        return 1;
    }
}
