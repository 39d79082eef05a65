#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsp/linear.hpp"
#include "nsp/nsp_sim.hpp"

namespace nsp {

enum class JobKind { profile, simulate, energy, linear, sweep };
JobKind parse_job_kind(const std::string& name);
const char* to_string(JobKind kind);

// Flat view of an INI document: "section.key" -> raw text.
using RawConfig = std::map<std::string, std::string>;

RawConfig parse_ini(const std::string& text);
RawConfig read_ini_file(const std::filesystem::path& path);

struct ProfileJob {
    double t = 10.0;
    std::optional<double> x_min;
    std::optional<double> x_max;
    double dx = 0.1;
};

struct LinearJob {
    double A = 1.0;
    double eps = 1.0;
    double xi_min = 0.01;
    double xi_max = 100.0;
    int count = 41;
    bool log_spacing = true;
    linear::Coefficient coefficient = linear::Coefficient::consistent;
    double kappa = linear::default_kappa;
};

struct SweepJob {
    std::string parameter;  // "section.key" of a numeric setting
    std::vector<double> values;
};

struct JobConfig {
    JobKind kind = JobKind::simulate;
    SimConfig sim;
    ProfileJob profile;
    LinearJob linear;
    SweepJob sweep;
    RawConfig raw;  // as supplied, after overrides
    // Every effective setting with defaults filled in, in canonical text form.
    RawConfig settings;

    // SHA-256 of the canonical settings; equal for equal effective configs.
    std::string hash() const;
    // Canonical INI text of `settings`.
    std::string canonical_text() const;
};

// Validates and materialises a job. Unknown sections or keys, missing
// required keys and malformed values are reported together.
JobConfig build_config(const RawConfig& raw, JobKind kind);
JobConfig parse_config(const std::string& text, JobKind kind);
JobConfig load_config(const std::filesystem::path& path, JobKind kind);

std::string sha256_hex(const std::string& data);

}  // namespace nsp
