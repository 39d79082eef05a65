#include "nsp/jobs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "nsp/diagnostics.hpp"
#include "nsp/linear.hpp"
#include "nsp/rarewave.hpp"

namespace nsp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RunManifest start_manifest(const JobConfig& job, const char* name) {
    RunManifest m;
    m.job = name;
    m.config_hash = job.hash();
    m.tool_version = tool_version();
    m.started = utc_timestamp();
    m.settings = job.settings;
    return m;
}

void finish_manifest(RunManifest& m, ArtifactWriter& w) {
    m.finished = utc_timestamp();
    m.files = w.files();
    m.files.push_back("manifest.json");
    w.write_json("manifest.json", m.to_json());
}

const char* model_name(Model m) { return m == Model::one_fluid ? "one_fluid" : "two_fluid"; }

json grid_json(const Grid1D& g) { return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"nodes", g.n_cells}, {"dx", g.dx}}; }

double state_time(const AnyState& s) {
    return std::visit([](const auto& st) { return st.time; }, s);
}

Snapshot snapshot_of(const AnyState& s, const SimConfig& cfg, long step) {
    if (const auto* one = std::get_if<FluidState>(&s)) return snapshot_onefluid(*one, cfg.one, step);
    return snapshot_twofluid(std::get<TwoFluidState>(s), cfg.two, step);
}

bool snapshot_finite(const Snapshot& s) {
    for (double v : {s.E_zero, s.E_first, s.lyapunov, s.D_visc, s.D_density, s.D_potential, s.D_wave, s.D_flat,
                     s.sup_n, s.sup_u, s.sup_phi, s.quasineutral_gap, s.elliptic_gap, s.species_gap, s.quad_form,
                     s.mass})
        if (!std::isfinite(v)) return false;
    return true;
}

json snapshot_json(const Snapshot& s) {
    return {{"t", s.t},         {"step", s.step},   {"lyapunov", s.lyapunov}, {"E_zero", s.E_zero},
            {"E_first", s.E_first}, {"sup_n", s.sup_n}, {"sup_u", s.sup_u},   {"sup_phi", s.sup_phi},
            {"species_gap", s.species_gap}, {"quasineutral_gap", s.quasineutral_gap}};
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot read {}", path.string()));
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IoError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

}  // namespace

RunManifest run_profile_job(const JobConfig& job, const fs::path& out) {
    RunManifest m = start_manifest(job, "profile");
    ArtifactWriter w(out);
    const SimConfig& sim = job.sim;
    const ProfileJob& pj = job.profile;
    const bool one = sim.model == Model::one_fluid;
    const BurgersWave wave = one ? BurgersWave::from(sim.one) : BurgersWave::from(sim.two);

    double x_min = 0.0, x_max = 0.0;
    if (pj.x_min) {
        x_min = *pj.x_min;
        x_max = *pj.x_max;
    } else {
        const FanExtent fan = fan_extent(wave, pj.t + 1.0, 10.0);
        const double pad = 0.1 * (fan.right - fan.left);
        x_min = fan.left - pad;
        x_max = fan.right + pad;
    }
    const Grid1D grid = Grid1D::with_spacing(x_min, x_max, pj.dx);
    const RarefactionProfile pr = one ? profile_onefluid(sim.one, pj.t, grid) : profile_twofluid(sim.two, pj.t, grid);
    spdlog::info("profile: t={} on [{}, {}] with {} nodes", pj.t, grid.x_min, grid.x_max, grid.n_cells);
    w.write_text("config.ini", job.canonical_text());
    w.write_csv("profile.csv", profile_table(pr));

    bool monotone = true;
    for (std::size_t k = 0; k < grid.n_cells; ++k) {
        if (!(pr.dnr[k] >= 0.0) || !(pr.dur[k] >= 0.0)) monotone = false;
        if (k + 1 < grid.n_cells && pr.nr[k + 1] < pr.nr[k]) monotone = false;
    }
    const double c = one ? sim.one.c() : sim.two.c();
    const double n_minus = one ? sim.one.n_minus : sim.two.n_minus;
    const double u_minus = one ? sim.one.u_minus : sim.two.u_minus;
    const double invariant = u_minus - c * std::log(n_minus);
    double drift = 0.0;
    for (std::size_t k = 0; k < grid.n_cells; ++k)
        drift = std::max(drift, std::abs(pr.ur[k] - c * std::log(pr.nr[k]) - invariant));
    m.checks["profile_monotone"] = monotone && pr.nr.back() > pr.nr.front();
    m.checks["riemann_invariant"] = drift <= 1e-12 * std::max(1.0, std::abs(invariant));
    m.extra = {{"model", model_name(sim.model)},
               {"t", pj.t},
               {"grid", grid_json(grid)},
               {"sound_speed", c},
               {"u_plus", one ? sim.one.u_plus() : sim.two.u_plus()},
               {"riemann_invariant_drift", drift}};
    finish_manifest(m, w);
    return m;
}

RunManifest run_simulate_job(const JobConfig& job, const fs::path& out) {
    RunManifest m = start_manifest(job, "simulate");
    ArtifactWriter w(out);
    const SimConfig& sim = job.sim;
    const std::string hash = m.config_hash;
    const Grid1D grid = simulation_grid(sim);
    w.write_text("config.ini", job.canonical_text());

    auto write_dump = [&](const AnyState& s, long step, const std::string& stem) {
        w.write_csv("dumps/" + stem + ".csv", state_table(s));
        w.write_json("dumps/" + stem + ".json", {{"time", state_time(s)},
                                                  {"step", step},
                                                  {"config_hash", hash},
                                                  {"model", model_name(sim.model)},
                                                  {"grid", grid_json(grid)}});
    };
    long dump_index = 0;
    RunHooks hooks;
    hooks.on_dump = [&](const AnyState& s, long step) {
        write_dump(s, step, fmt::format("state_{:04d}", dump_index++));
    };
    hooks.on_snapshot = [&](const Snapshot& s) {
        spdlog::debug("t={:.4g} L={:.6e} sup_n={:.4e} sup_u={:.4e}", s.t, s.lyapunov, s.sup_n, s.sup_u);
    };

    m.extra = {{"model", model_name(sim.model)},
               {"grid", grid_json(grid)},
               {"u_plus", sim.model == Model::one_fluid ? sim.one.u_plus() : sim.two.u_plus()},
               {"lyapunov_weight",
                sim.model == Model::one_fluid ? lyapunov_weight(sim.one) : lyapunov_weight(sim.two)}};
    spdlog::info("simulate: {} on [{}, {}], {} nodes, t_final={}", model_name(sim.model), grid.x_min, grid.x_max,
                 grid.n_cells, sim.t_final);
    Trajectory traj;
    try {
        traj = run_simulation(sim, hooks);
    } catch (const SimulationFailure& f) {
        write_dump(f.state, -1, "failure_state");
        m.checks["run_completed"] = false;
        m.extra["failure"] = {{"time", f.time}, {"message", f.what()}};
        finish_manifest(m, w);
        throw;
    }
    w.write_csv("diagnostics.csv", snapshot_table(traj.snapshots));

    m.checks["run_completed"] = true;
    m.checks["diagnostics_finite"] = std::all_of(traj.snapshots.begin(), traj.snapshots.end(), snapshot_finite);
    if (sim.model == Model::two_fluid)
        m.checks["quad_form_nonnegative"] = std::all_of(traj.snapshots.begin(), traj.snapshots.end(),
                                                        [](const Snapshot& s) { return s.quad_form >= 0.0; });
    m.extra["steps"] = traj.steps;
    m.extra["cumulative_outflow"] = traj.cumulative_outflow;
    if (!traj.snapshots.empty()) m.extra["final"] = snapshot_json(traj.snapshots.back());
    spdlog::info("simulate: finished after {} steps", traj.steps);
    finish_manifest(m, w);
    return m;
}

RunManifest run_energy_job(const fs::path& run_dir, const fs::path& out) {
    const JobConfig job = load_config(run_dir / "config.ini", JobKind::energy);
    RunManifest m = start_manifest(job, "energy");
    const SimConfig& sim = job.sim;
    const Grid1D grid = simulation_grid(sim);

    std::vector<fs::path> sidecars;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(run_dir / "dumps", ec)) {
        const fs::path p = entry.path();
        if (p.extension() == ".json" && p.stem().string().rfind("state_", 0) == 0) sidecars.push_back(p);
    }
    if (ec) throw IoError(fmt::format("cannot list {}: {}", (run_dir / "dumps").string(), ec.message()));
    if (sidecars.empty()) throw IoError(fmt::format("no state dumps under {}", run_dir.string()));
    std::sort(sidecars.begin(), sidecars.end());

    std::vector<Snapshot> snaps;
    for (const fs::path& side_path : sidecars) {
        const json side = read_json(side_path);
        if (side.value("config_hash", "") != m.config_hash)
            throw ValidationError(fmt::format("{} was written by a different configuration", side_path.string()));
        const json& g = side.at("grid");
        if (g.at("nodes").get<std::size_t>() != grid.n_cells || g.at("x_min").get<double>() != grid.x_min ||
            g.at("x_max").get<double>() != grid.x_max)
            throw ValidationError(fmt::format("{} does not match the configured grid", side_path.string()));
        fs::path csv = side_path;
        csv.replace_extension(".csv");
        const AnyState s = state_from_table(read_csv(csv), sim.model, grid, side.at("time").get<double>());
        snaps.push_back(snapshot_of(s, sim, side.at("step").get<long>()));
    }

    ArtifactWriter w(out);
    const CsvTable table = energy_table(snaps);
    w.write_csv("energy.csv", table);
    m.checks["dumps_match_config"] = true;
    m.checks["diagnostics_finite"] = std::all_of(snaps.begin(), snaps.end(), snapshot_finite);

    // The recomputed diagnostics must reproduce the in-run values exactly.
    const fs::path diag_path = run_dir / "diagnostics.csv";
    if (fs::exists(diag_path)) {
        const CsvTable diag = read_csv(diag_path);
        const auto& dt = diag.column("t");
        bool same = true;
        std::size_t matched = 0;
        for (std::size_t r = 0; r < table.rows(); ++r) {
            const auto it = std::find(dt.begin(), dt.end(), table.columns[0][r]);
            if (it == dt.end()) continue;
            const std::size_t row = static_cast<std::size_t>(it - dt.begin());
            ++matched;
            for (std::size_t k = 1; k < table.header.size(); ++k)
                if (diag.column(table.header[k])[row] != table.columns[k][r]) same = false;
        }
        m.checks["consistent_with_run"] = same && matched > 0;
    }
    m.extra = {{"model", model_name(sim.model)}, {"run_dir", run_dir.string()}, {"dumps", sidecars.size()}};
    finish_manifest(m, w);
    return m;
}

RunManifest run_linear_job(const JobConfig& job, const fs::path& out, std::optional<double> greens_time) {
    RunManifest m = start_manifest(job, "linear");
    const LinearJob& lj = job.linear;
    if (greens_time && !(*greens_time >= 0.0))
        throw ValidationError(fmt::format("--greens time must be >= 0, got {}", *greens_time));
    ArtifactWriter w(out);

    std::vector<double> xis(static_cast<std::size_t>(lj.count));
    for (int k = 0; k < lj.count; ++k) {
        const double f = lj.count == 1 ? 0.0 : static_cast<double>(k) / (lj.count - 1);
        xis[static_cast<std::size_t>(k)] =
            lj.log_spacing ? lj.xi_min * std::pow(lj.xi_max / lj.xi_min, f) : lj.xi_min + f * (lj.xi_max - lj.xi_min);
    }

    CsvTable modes{{"xi", "re_lp", "im_lp", "re_lm", "im_lm", "decay_rate"}, {}};
    modes.columns.assign(6, {});
    CsvTable greens{{"xi", "t", "re_g11", "im_g11", "re_g12", "im_g12", "re_g21", "im_g21", "re_g22", "im_g22"}, {}};
    greens.columns.assign(10, {});
    bool stable = true, decaying = true;
    for (double xi : xis) {
        const linear::SpectralMode mode = linear::spectral_mode(xi, lj.eps, lj.A, lj.coefficient);
        const double rate = linear::fit_mode_decay(mode, lj.kappa).rate;
        const double row[] = {xi, mode.lambda_plus.real(), mode.lambda_plus.imag(), mode.lambda_minus.real(),
                              mode.lambda_minus.imag(), rate};
        for (std::size_t k = 0; k < 6; ++k) modes.columns[k].push_back(row[k]);
        if (mode.lambda_plus.real() > 0.0 || mode.lambda_minus.real() > 0.0) stable = false;
        if (xi != 0.0 && !(rate > 0.0)) decaying = false;
        if (greens_time) {
            const linear::Mat2 G = linear::greens_matrix(mode, *greens_time);
            const double g[] = {xi,           *greens_time,  G[0][0].real(), G[0][0].imag(), G[0][1].real(),
                                G[0][1].imag(), G[1][0].real(), G[1][0].imag(), G[1][1].real(), G[1][1].imag()};
            for (std::size_t k = 0; k < 10; ++k) greens.columns[k].push_back(g[k]);
        }
    }
    w.write_text("config.ini", job.canonical_text());
    w.write_csv("modes.csv", modes);
    if (greens_time) w.write_csv("greens.csv", greens);
    m.checks["spectral_stability"] = stable;
    m.checks["decay_positive"] = decaying;
    m.extra = {{"coefficient", linear::to_string(lj.coefficient)}, {"kappa", lj.kappa}};
    if (greens_time) m.extra["greens_time"] = *greens_time;
    finish_manifest(m, w);
    return m;
}

RunManifest run_sweep_job(const JobConfig& job, const fs::path& out, unsigned workers) {
    RunManifest m = start_manifest(job, "sweep");
    ArtifactWriter w(out);
    RawConfig base = job.raw;
    for (auto it = base.begin(); it != base.end();)
        it = it->first.rfind("sweep.", 0) == 0 ? base.erase(it) : std::next(it);

    const std::string& key = job.sweep.parameter;
    const std::string short_key = key.substr(key.find('.') + 1);
    struct Item {
        std::string dir;
        double value = 0.0;
        std::string status = "pending";
        std::string message;
        RunManifest manifest;
    };
    std::vector<Item> items;
    for (std::size_t i = 0; i < job.sweep.values.size(); ++i) {
        Item it;
        it.value = job.sweep.values[i];
        it.dir = fmt::format("{:02d}_{}_{}", i, short_key, it.value);
        items.push_back(std::move(it));
    }

    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(workers == 0 ? 1u : workers, static_cast<unsigned>(items.size())));
    spdlog::info("sweep: {} runs over {} with {} workers", items.size(), key, n_workers);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) {
            Item& it = items[i];
            try {
                RawConfig raw = base;
                raw[key] = fmt::format("{}", it.value);
                const JobConfig cfg = build_config(raw, JobKind::simulate);
                it.manifest = run_simulate_job(cfg, out / it.dir);
                it.status = "ok";
            } catch (const ValidationError& e) {
                it.status = "validation_error";
                it.message = e.what();
            } catch (const NumericalError& e) {
                it.status = "numerical_error";
                it.message = e.what();
            } catch (const IoError& e) {
                it.status = "io_error";
                it.message = e.what();
            }
            if (!it.message.empty()) spdlog::warn("sweep: {} failed: {}", it.dir, it.message);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n_workers; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    json runs = json::array();
    std::vector<std::string> nested;
    for (const Item& it : items) {
        json r = {{"dir", it.dir}, {"value", it.value}, {"status", it.status}};
        if (!it.message.empty()) r["message"] = it.message;
        if (it.status == "ok") {
            r["config_hash"] = it.manifest.config_hash;
            r["all_checks_pass"] = it.manifest.all_checks_pass();
            if (it.manifest.extra.contains("final")) r["final"] = it.manifest.extra["final"];
            for (const auto& f : it.manifest.files) nested.push_back(it.dir + "/" + f);
        }
        m.checks["run:" + it.dir] = it.status == "ok" && it.manifest.all_checks_pass();
        runs.push_back(std::move(r));
    }
    w.write_text("config.ini", job.canonical_text());
    w.write_json("summary.json", {{"parameter", key}, {"values", job.sweep.values}, {"runs", runs}});
    m.extra = {{"parameter", key}, {"workers", n_workers}};
    m.finished = utc_timestamp();
    m.files = w.files();
    m.files.insert(m.files.end(), nested.begin(), nested.end());
    m.files.push_back("manifest.json");
    w.write_json("manifest.json", m.to_json());
    return m;
}

}  // namespace nsp
