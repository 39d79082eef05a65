#include "nsp/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "nsp/core.hpp"

#ifndef NSP_VERSION
#define NSP_VERSION "0.0.0"
#endif

namespace nsp {

namespace fs = std::filesystem;

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
        if (header[k] == name) return columns[k];
    throw IoError(fmt::format("csv: no column '{}'", name));
}

std::string format_csv(const CsvTable& table) {
    if (table.header.size() != table.columns.size()) throw ValidationError("csv: header and column count differ");
    const std::size_t rows = table.rows();
    for (const auto& c : table.columns)
        if (c.size() != rows) throw ValidationError("csv: ragged columns");
    std::string out;
    for (std::size_t k = 0; k < table.header.size(); ++k) {
        if (k) out += ',';
        out += table.header[k];
    }
    out += '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < table.columns.size(); ++k) {
            if (k) out += ',';
            out += fmt::format("{:.17g}", table.columns[k][r]);
        }
        out += '\n';
    }
    return out;
}

CsvTable parse_csv(const std::string& text) {
    std::stringstream in(text);
    std::string line;
    CsvTable t;
    if (!std::getline(in, line) || line.empty()) throw IoError("csv: missing header");
    {
        std::stringstream hs(line);
        std::string name;
        while (std::getline(hs, name, ',')) t.header.push_back(name);
    }
    t.columns.resize(t.header.size());
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::size_t col = 0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p <= end && col < t.header.size()) {
            const char* comma = std::find(p, end, ',');
            double v = 0.0;
            const auto [q, ec] = std::from_chars(p, comma, v);
            if (ec != std::errc() || q != comma) throw IoError(fmt::format("csv: bad number on line {}", row));
            t.columns[col++].push_back(v);
            p = comma + 1;
        }
        if (col != t.header.size() || p <= end) throw IoError(fmt::format("csv: wrong field count on line {}", row));
    }
    return t;
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot read {}", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

CsvTable profile_table(const RarefactionProfile& pr) {
    return {{"x", "nr", "ur", "phir", "dnr", "dur"},
            {pr.nr.grid().nodes(), pr.nr.data(), pr.ur.data(), pr.phir.data(), pr.dnr.data(), pr.dur.data()}};
}

CsvTable state_table(const AnyState& state) {
    if (const auto* s = std::get_if<FluidState>(&state))
        return {{"x", "n", "u", "phi"}, {s->n.grid().nodes(), s->n.data(), s->u.data(), s->phi.data()}};
    const auto& s = std::get<TwoFluidState>(state);
    return {{"x", "n_i", "u_i", "n_e", "u_e", "phi"},
            {s.n_i.grid().nodes(), s.n_i.data(), s.u_i.data(), s.n_e.data(), s.u_e.data(), s.phi.data()}};
}

CsvTable snapshot_table(const std::vector<Snapshot>& snaps) {
    CsvTable t;
    t.header = {"t",      "step",  "E_zero",      "E_first",         "lyapunov",     "D_visc",
                "D_density", "D_potential", "D_wave", "D_flat", "sup_n", "sup_u", "sup_phi",
                "quasineutral_gap", "elliptic_gap", "species_gap", "quad_form", "mass"};
    t.columns.assign(t.header.size(), {});
    for (const Snapshot& s : snaps) {
        const double row[] = {s.t,      static_cast<double>(s.step), s.E_zero, s.E_first, s.lyapunov, s.D_visc,
                              s.D_density, s.D_potential, s.D_wave, s.D_flat, s.sup_n, s.sup_u, s.sup_phi,
                              s.quasineutral_gap, s.elliptic_gap, s.species_gap, s.quad_form, s.mass};
        for (std::size_t k = 0; k < t.header.size(); ++k) t.columns[k].push_back(row[k]);
    }
    return t;
}

CsvTable energy_table(const std::vector<Snapshot>& snaps) {
    CsvTable t;
    t.header = {"t", "E_zero", "E_first", "D_wave", "D_flat", "sup_n", "sup_u", "sup_phi"};
    t.columns.assign(t.header.size(), {});
    for (const Snapshot& s : snaps) {
        const double row[] = {s.t, s.E_zero, s.E_first, s.D_wave, s.D_flat, s.sup_n, s.sup_u, s.sup_phi};
        for (std::size_t k = 0; k < t.header.size(); ++k) t.columns[k].push_back(row[k]);
    }
    return t;
}

AnyState state_from_table(const CsvTable& t, Model model, const Grid1D& grid, double time) {
    if (t.rows() != grid.n_cells)
        throw IoError(fmt::format("state dump has {} rows, grid has {} nodes", t.rows(), grid.n_cells));
    auto field = [&](const char* name) { return Field(grid, t.column(name)); };
    if (model == Model::one_fluid) return FluidState{time, field("n"), field("u"), field("phi")};
    return TwoFluidState{time, field("n_i"), field("u_i"), field("n_e"), field("u_e"), field("phi")};
}

ArtifactWriter::ArtifactWriter(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw IoError(fmt::format("cannot create output directory {}: {}", root_.string(), ec.message()));
}

void ArtifactWriter::write_text(const std::string& relative, const std::string& content) {
    const fs::path path = root_ / relative;
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
    out << content;
    out.close();
    if (!out) throw IoError(fmt::format("write failed for {}", path.string()));
    if (std::find(files_.begin(), files_.end(), relative) == files_.end()) files_.push_back(relative);
}

void ArtifactWriter::write_csv(const std::string& relative, const CsvTable& table) {
    write_text(relative, format_csv(table));
}

void ArtifactWriter::write_json(const std::string& relative, const nlohmann::json& value) {
    write_text(relative, value.dump(2) + "\n");
}

bool RunManifest::all_checks_pass() const {
    for (const auto& [name, ok] : checks)
        if (!ok) return false;
    return true;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["job"] = job;
    j["config_hash"] = config_hash;
    j["tool_version"] = tool_version;
    j["started"] = started;
    j["finished"] = finished;
    j["files"] = files;
    j["checks"] = checks;
    j["all_checks_pass"] = all_checks_pass();
    j["settings"] = settings;
    if (!extra.empty()) j["metadata"] = extra;
    return j;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

const char* tool_version() { return NSP_VERSION; }

}  // namespace nsp
