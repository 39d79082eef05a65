#pragma once

#include <filesystem>
#include <optional>

#include "nsp/config.hpp"
#include "nsp/io.hpp"

namespace nsp {

// Each job owns its output directory, writes manifest.json last and returns
// the manifest. Failures propagate as ValidationError / NumericalError /
// IoError after whatever partial artifacts could be written.
RunManifest run_profile_job(const JobConfig& job, const std::filesystem::path& out);
RunManifest run_simulate_job(const JobConfig& job, const std::filesystem::path& out);
// Recomputes the diagnostics of a finished simulate run from its state dumps.
RunManifest run_energy_job(const std::filesystem::path& run_dir, const std::filesystem::path& out);
RunManifest run_linear_job(const JobConfig& job, const std::filesystem::path& out,
                           std::optional<double> greens_time = std::nullopt);
// One simulate job per sweep value, `workers` at a time, each in its own
// subdirectory, plus summary.json.
RunManifest run_sweep_job(const JobConfig& job, const std::filesystem::path& out, unsigned workers);

}  // namespace nsp
