#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsp/nsp_sim.hpp"
#include "nsp/rarewave.hpp"

namespace nsp {

// Column-major numeric table with a header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    const std::vector<double>& column(const std::string& name) const;
};

// Values are written with 17 significant digits so they read back bit-exact.
std::string format_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

CsvTable profile_table(const RarefactionProfile& profile);
CsvTable state_table(const AnyState& state);
CsvTable snapshot_table(const std::vector<Snapshot>& snapshots);
// Reduced table: t,E_zero,E_first,D_wave,D_flat,sup_n,sup_u,sup_phi.
CsvTable energy_table(const std::vector<Snapshot>& snapshots);

// Rebuilds a state from a dump table on the given grid.
AnyState state_from_table(const CsvTable& table, Model model, const Grid1D& grid, double time);

// Owns one output directory and records every file written into it.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }
    void write_text(const std::string& relative, const std::string& content);
    void write_csv(const std::string& relative, const CsvTable& table);
    void write_json(const std::string& relative, const nlohmann::json& value);
    const std::vector<std::string>& files() const { return files_; }

private:
    std::filesystem::path root_;
    std::vector<std::string> files_;
};

struct RunManifest {
    std::string job;
    std::string config_hash;
    std::string tool_version;
    std::string started;
    std::string finished;
    std::vector<std::string> files;
    std::map<std::string, bool> checks;
    std::map<std::string, std::string> settings;
    nlohmann::json extra = nlohmann::json::object();

    bool all_checks_pass() const;
    nlohmann::json to_json() const;
};

// UTC wall time in ISO 8601 form.
std::string utc_timestamp();
const char* tool_version();

}  // namespace nsp
