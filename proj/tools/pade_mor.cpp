#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pademor/experiment/presets.hpp"
#include "pademor/experiment/runner.hpp"

#ifndef PADEMOR_PRESET_DIR
#define PADEMOR_PRESET_DIR "presets"
#endif

namespace ex = pademor::experiment;
namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, failure = 1, bad_config = 2, solver_failure = 3 };

int execute(const ex::ExperimentConfig& cfg, const std::optional<std::string>& out) {
    const fs::path dir = out ? fs::path(*out) : fs::path(cfg.output);
    const auto summary = ex::run(cfg, dir);
    std::cout << "wrote " << dir.string() << "/manifest.json";
    for (const auto& f : summary.files) std::cout << ' ' << f;
    std::cout << '\n';
    return ok;
}

template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const ex::ConfigError& e) {
        std::cerr << "pade-mor: invalid configuration: " << e.what() << '\n';
        return bad_config;
    } catch (const pademor::SolverError& e) {
        std::cerr << "pade-mor: solver failure: " << e.what() << " (residual " << e.residual() << ", shift "
                  << e.shift() << ")\n";
        return solver_failure;
    } catch (const std::exception& e) {
        std::cerr << "pade-mor: error: " << e.what() << '\n';
        return failure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Least-squares Pade model order reduction of Helmholtz frequency responses"};
    app.set_version_flag("--version", PADEMOR_VERSION);
    app.require_subcommand(1);

    std::string config_path, preset_name, preset_dir = PADEMOR_PRESET_DIR;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> grid;

    auto* run = app.add_subcommand("run", "run an experiment from a JSON config (or a manifest.json)");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--out", out, "output directory (overrides the config)");

    auto* preset = app.add_subcommand("preset", "run a checked-in preset");
    preset->add_option("name", preset_name, "transmission|scattering|high_frequency|stochastic or section4..section7")
        ->required();
    preset->add_option("--out", out, "output directory");
    preset->add_option("--seed", seed, "random seed");
    preset->add_option("--grid", grid, "grid cells per side");
    preset->add_option("--preset-dir", preset_dir, "directory holding the preset files");

    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", config_path, "config file")->required();

    auto* list = app.add_subcommand("list-presets", "print preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : bad_config;
    }

    if (*list) {
        for (const auto& [name, file] : ex::preset_table()) std::cout << name << " -> " << file << ".json\n";
        return ok;
    }
    if (*validate)
        return guarded([&] {
            const auto cfg = ex::load_config_document(ex::read_json_file(config_path));
            std::cout << "valid: " << ex::to_string(cfg.problem) << " config_hash " << ex::config_hash(cfg) << '\n';
            return ok;
        });
    if (*run)
        return guarded([&] { return execute(ex::load_config_document(ex::read_json_file(config_path)), out); });
    return guarded([&] {
        auto doc = ex::read_json_file(ex::preset_path(preset_name, preset_dir));
        if (seed) doc["seed"] = *seed;
        if (grid) doc["grid"] = *grid;
        auto cfg = ex::parse_config(doc);
        if (!out) out = (fs::path("out") / preset_name).string();
        return execute(cfg, out);
    });
}
