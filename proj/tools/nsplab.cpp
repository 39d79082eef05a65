#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "nsp/acceptance.hpp"
#include "nsp/config.hpp"
#include "nsp/jobs.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, checks_failed = 1, validation = 2, numerical = 3, io = 4 };

struct Options {
    std::string config;
    std::string out;
    std::string run_dir;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::optional<std::uint64_t> seed;
    std::optional<double> greens;
    std::vector<int> criteria;
};

nsp::JobConfig load(const Options& o, nsp::JobKind kind) {
    nsp::RawConfig raw = nsp::read_ini_file(o.config);
    if (o.seed) raw["perturbation.seed"] = std::to_string(*o.seed);
    return nsp::build_config(raw, kind);
}

int report(const nsp::RunManifest& m, const std::string& out) {
    for (const auto& [name, pass] : m.checks) fmt::print("{:<32} {}\n", name, pass ? "PASS" : "FAIL");
    fmt::print("{} job wrote {} files to {} (config {})\n", m.job, m.files.size(), out, m.config_hash.substr(0, 12));
    return m.all_checks_pass() ? ok : checks_failed;
}

int run_check(const Options& o) {
    std::vector<int> ids = o.criteria;
    if (ids.empty())
        for (int k = 1; k <= nsp::criterion_count; ++k) ids.push_back(k);
    bool all = true;
    nlohmann::json results = nlohmann::json::array();
    for (int id : ids) {
        const nsp::CriterionResult r = nsp::run_criterion(id);
        all = all && r.passed;
        fmt::print("criterion {} {:<28} {} ({:.1f} s)\n", r.id, r.title, r.passed ? "PASS" : "FAIL", r.seconds);
        std::cout << r.detail << '\n' << std::flush;
        results.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"seconds", r.seconds},
                           {"detail", r.detail}});
    }
    if (!o.out.empty()) {
        nsp::ArtifactWriter w(o.out);
        w.write_json("acceptance.json", {{"all_passed", all}, {"criteria", results}});
    }
    return all ? ok : checks_failed;
}

}  // namespace

int main(int argc, char** argv) {
    auto logger = spdlog::stderr_color_mt("nsplab");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("NSP_LOG")) spdlog::cfg::helpers::load_levels(level);

    CLI::App app{"Navier-Stokes-Poisson rarefaction-wave lab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(nsp::tool_version()));
    Options o;

    auto* profile = app.add_subcommand("profile", "Tabulate the rarefaction profile at one time");
    auto* simulate = app.add_subcommand("simulate", "Run a perturbed-profile simulation");
    auto* energy = app.add_subcommand("energy", "Recompute energy diagnostics from a simulate run's dumps");
    auto* linear = app.add_subcommand("linear", "Fourier modes of the linearized one-fluid system");
    auto* sweep = app.add_subcommand("sweep", "Run one simulation per value of a swept parameter");
    auto* check = app.add_subcommand("check", "Run the acceptance suite");

    for (auto* sub : {profile, simulate, linear, sweep})
        sub->add_option("--config", o.config, "INI configuration file")->required()->check(CLI::ExistingFile);
    for (auto* sub : {profile, simulate, energy, linear, sweep})
        sub->add_option("--out", o.out, "Output directory")->required();
    for (auto* sub : {simulate, sweep}) sub->add_option("--seed", o.seed, "Override perturbation.seed");
    sweep->add_option("--workers", o.workers, "Concurrent runs (default: available cores)")
        ->check(CLI::PositiveNumber);
    energy->add_option("--run", o.run_dir, "Directory of a completed simulate run")
        ->required()
        ->check(CLI::ExistingDirectory);
    linear->add_option("--greens", o.greens, "Also write Green's matrix entries at this time");
    check->add_option("--criteria", o.criteria, "Criterion numbers to run (default: all)")
        ->check(CLI::Range(1, nsp::criterion_count));
    check->add_option("--out", o.out, "Write acceptance.json into this directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*profile) return report(nsp::run_profile_job(load(o, nsp::JobKind::profile), o.out), o.out);
        if (*simulate) return report(nsp::run_simulate_job(load(o, nsp::JobKind::simulate), o.out), o.out);
        if (*energy) return report(nsp::run_energy_job(o.run_dir, o.out), o.out);
        if (*linear) return report(nsp::run_linear_job(load(o, nsp::JobKind::linear), o.out, o.greens), o.out);
        if (*sweep) return report(nsp::run_sweep_job(load(o, nsp::JobKind::sweep), o.out, o.workers), o.out);
        return run_check(o);
    } catch (const nsp::ValidationError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return validation;
    } catch (const nsp::NumericalError& e) {
        fmt::print(stderr, "numerical failure: {}\n", e.what());
        return numerical;
    } catch (const nsp::IoError& e) {
        fmt::print(stderr, "i/o error: {}\n", e.what());
        return io;
    } catch (const fs::filesystem_error& e) {
        fmt::print(stderr, "i/o error: {}\n", e.what());
        return io;
    }
}
