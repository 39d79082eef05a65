#include "nsp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>
#include <fmt/ranges.h>
#include <openssl/evp.h>

#include "nsp/core.hpp"

namespace nsp {

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"model", {"type"}},
        {"params", {"A", "n_minus", "n_plus", "u_minus", "u_plus", "eps", "m_i", "m_e", "T_i", "T_e", "mu_i", "mu_e"}},
        {"grid", {"L", "dx", "x_min", "x_max"}},
        {"time", {"t_final", "cfl", "theta"}},
        {"perturbation", {"shape", "target", "amplitude", "center", "width", "bumps", "seed"}},
        {"outputs", {"interval", "dump_interval"}},
        {"profile", {"t", "x_min", "x_max", "dx"}},
        {"linear", {"A", "eps", "xi_min", "xi_max", "count", "spacing", "coefficient", "kappa"}},
        {"sweep", {"parameter", "values"}},
    };
    return keys;
}

std::set<std::string> sections_for(JobKind kind) {
    switch (kind) {
        case JobKind::profile:
            return {"model", "params", "profile"};
        case JobKind::linear:
            return {"linear"};
        case JobKind::sweep:
            return {"model", "params", "grid", "time", "perturbation", "outputs", "sweep"};
        case JobKind::simulate:
        case JobKind::energy:
            break;
    }
    return {"model", "params", "grid", "time", "perturbation", "outputs"};
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string format_number(double v) { return fmt::format("{}", v); }

// Reads typed values out of a RawConfig, recording every effective setting
// and collecting problems instead of stopping at the first one.
class Reader {
public:
    explicit Reader(const RawConfig& raw) : raw_(raw) {}

    double number(const std::string& key, std::optional<double> fallback) {
        const auto text = lookup(key);
        if (!text) {
            if (!fallback) {
                missing_.push_back(key);
                return std::nan("");
            }
            settings_[key] = format_number(*fallback);
            return *fallback;
        }
        const auto v = parse_number(key, *text);
        if (v) settings_[key] = format_number(*v);
        return v.value_or(std::nan(""));
    }

    std::optional<double> optional_number(const std::string& key) {
        const auto text = lookup(key);
        if (!text) return std::nullopt;
        const auto v = parse_number(key, *text);
        if (v) settings_[key] = format_number(*v);
        return v;
    }

    long integer(const std::string& key, long fallback) {
        const auto text = lookup(key);
        if (!text) {
            settings_[key] = std::to_string(fallback);
            return fallback;
        }
        long v = 0;
        const auto [p, ec] = std::from_chars(text->data(), text->data() + text->size(), v);
        if (ec != std::errc() || p != text->data() + text->size()) {
            errors_.push_back(fmt::format("{}: expected an integer, got '{}'", key, *text));
            return fallback;
        }
        settings_[key] = std::to_string(v);
        return v;
    }

    std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback) {
        const auto text = lookup(key);
        if (!text) {
            settings_[key] = std::to_string(fallback);
            return fallback;
        }
        std::uint64_t v = 0;
        const auto [p, ec] = std::from_chars(text->data(), text->data() + text->size(), v);
        if (ec != std::errc() || p != text->data() + text->size()) {
            errors_.push_back(fmt::format("{}: expected an unsigned integer, got '{}'", key, *text));
            return fallback;
        }
        settings_[key] = std::to_string(v);
        return v;
    }

    std::string choice(const std::string& key, const std::string& fallback, const std::vector<std::string>& allowed) {
        const std::string v = lookup(key).value_or(fallback);
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
            errors_.push_back(fmt::format("{}: expected one of {}, got '{}'", key, fmt::join(allowed, "|"), v));
            return fallback;
        }
        settings_[key] = v;
        return v;
    }

    std::vector<double> number_list(const std::string& key) {
        const auto text = lookup(key);
        if (!text) {
            missing_.push_back(key);
            return {};
        }
        std::vector<double> out;
        std::stringstream ss(*text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto v = parse_number(key, trim(item));
            if (!v) return {};
            out.push_back(*v);
        }
        if (out.empty()) errors_.push_back(fmt::format("{}: empty list", key));
        std::vector<std::string> parts;
        for (double v : out) parts.push_back(format_number(v));
        settings_[key] = fmt::format("{}", fmt::join(parts, ", "));
        return out;
    }

    std::string text(const std::string& key) {
        const auto v = lookup(key);
        if (!v) {
            missing_.push_back(key);
            return {};
        }
        settings_[key] = *v;
        return *v;
    }

    void error(std::string msg) { errors_.push_back(std::move(msg)); }
    bool has(const std::string& key) const { return raw_.count(key) != 0; }
    void mark_used(const std::string& key) { used_.insert(key); }

    // Everything supplied but never read is an unknown key for this job.
    void check_unused(JobKind kind) {
        const auto allowed = sections_for(kind);
        for (const auto& [key, value] : raw_) {
            if (used_.count(key)) continue;
            const auto dot = key.find('.');
            const std::string section = key.substr(0, dot);
            const auto known = known_keys().find(section);
            if (known == known_keys().end())
                errors_.push_back(fmt::format("unknown section [{}]", section));
            else if (!known->second.count(key.substr(dot + 1)))
                errors_.push_back(fmt::format("unknown key '{}' in [{}]", key.substr(dot + 1), section));
            else if (!allowed.count(section))
                errors_.push_back(fmt::format("section [{}] is not used by {} jobs", section, to_string(kind)));
            else
                errors_.push_back(fmt::format("key '{}' does not apply to this model", key));
        }
    }

    void raise_if_failed() const {
        if (missing_.empty() && errors_.empty()) return;
        std::string msg = "config:";
        if (!missing_.empty()) msg += fmt::format(" missing required keys: {}.", fmt::join(missing_, ", "));
        for (const auto& e : errors_) msg += " " + e + ".";
        throw ValidationError(msg);
    }

    RawConfig settings() const { return settings_; }

private:
    std::optional<std::string> lookup(const std::string& key) {
        used_.insert(key);
        const auto it = raw_.find(key);
        if (it == raw_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<double> parse_number(const std::string& key, const std::string& text) {
        double v = 0.0;
        const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || p != text.data() + text.size() || !std::isfinite(v)) {
            errors_.push_back(fmt::format("{}: expected a number, got '{}'", key, text));
            return std::nullopt;
        }
        return v;
    }

    const RawConfig& raw_;
    std::set<std::string> used_;
    std::vector<std::string> missing_;
    std::vector<std::string> errors_;
    RawConfig settings_;
};

void read_params(Reader& r, SimConfig& sim) {
    const std::string type = r.choice("model.type", "one_fluid", {"one_fluid", "two_fluid"});
    sim.model = type == "two_fluid" ? Model::two_fluid : Model::one_fluid;
    if (sim.model == Model::one_fluid) {
        PhysParamsOne& p = sim.one;
        p.A = r.number("params.A", std::nullopt);
        p.n_minus = r.number("params.n_minus", std::nullopt);
        p.n_plus = r.number("params.n_plus", std::nullopt);
        p.u_minus = r.number("params.u_minus", std::nullopt);
        p.eps_smooth = r.number("params.eps", std::nullopt);
    } else {
        PhysParamsTwo& p = sim.two;
        p.m_i = r.number("params.m_i", std::nullopt);
        p.m_e = r.number("params.m_e", std::nullopt);
        p.T_i = r.number("params.T_i", std::nullopt);
        p.T_e = r.number("params.T_e", std::nullopt);
        p.mu_i = r.number("params.mu_i", 1.0);
        p.mu_e = r.number("params.mu_e", 1.0);
        p.n_minus = r.number("params.n_minus", std::nullopt);
        p.n_plus = r.number("params.n_plus", std::nullopt);
        p.u_minus = r.number("params.u_minus", std::nullopt);
        p.eps_smooth = r.number("params.eps", std::nullopt);
    }
    // u₊ is fixed by the far-field densities; a supplied value is only checked.
    if (r.has("params.u_plus")) r.mark_used("params.u_plus");
}

void check_u_plus(const RawConfig& raw, Reader& r, const SimConfig& sim) {
    const auto it = raw.find("params.u_plus");
    if (it == raw.end()) return;
    const double expected = sim.model == Model::one_fluid ? sim.one.u_plus() : sim.two.u_plus();
    if (!std::isfinite(expected)) return;  // the inputs are already reported
    double given = 0.0;
    const auto [p, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), given);
    if (ec != std::errc() || p != it->second.data() + it->second.size()) {
        r.error(fmt::format("params.u_plus: expected a number, got '{}'", it->second));
        return;
    }
    if (std::abs(given - expected) > 1e-9 * (1.0 + std::abs(expected)))
        r.error(fmt::format("params.u_plus = {} is inconsistent with the 2-rarefaction curve; expected {:.15g}", given,
                            expected));
}

void validate_params(Reader& r, const SimConfig& sim) {
    try {
        if (sim.model == Model::one_fluid)
            sim.one.validate();
        else
            sim.two.validate();
    } catch (const ValidationError& e) {
        r.error(e.what());
    }
}

void read_simulation(Reader& r, SimConfig& sim) {
    sim.grid.margin = r.number("grid.L", std::nullopt);
    sim.grid.dx = r.number("grid.dx", sim.grid.dx);
    sim.grid.x_min = r.optional_number("grid.x_min");
    sim.grid.x_max = r.optional_number("grid.x_max");
    if (sim.grid.x_min.has_value() != sim.grid.x_max.has_value())
        r.error("grid.x_min and grid.x_max must be given together");

    sim.t_final = r.number("time.t_final", std::nullopt);
    sim.cfl_number = r.number("time.cfl", sim.cfl_number);
    sim.viscous_theta = r.number("time.theta", sim.viscous_theta);

    PerturbationSpec& ps = sim.perturbation;
    const std::string shape = r.choice("perturbation.shape", "gaussian", {"gaussian", "bump", "random"});
    ps.shape = shape == "bump"     ? PerturbationSpec::Shape::bump
               : shape == "random" ? PerturbationSpec::Shape::random
                                   : PerturbationSpec::Shape::gaussian;
    const std::string target = r.choice("perturbation.target", "density", {"density", "velocity", "both"});
    ps.target = target == "velocity" ? PerturbationSpec::Target::velocity
                : target == "both"   ? PerturbationSpec::Target::both
                                     : PerturbationSpec::Target::density;
    ps.amplitude = r.number("perturbation.amplitude", ps.amplitude);
    ps.center = r.number("perturbation.center", ps.center);
    ps.width = r.number("perturbation.width", ps.width);
    ps.bumps = static_cast<int>(r.integer("perturbation.bumps", ps.bumps));
    ps.seed = r.unsigned64("perturbation.seed", ps.seed);

    sim.output_interval = r.number("outputs.interval", sim.output_interval);
    const double t_final = std::isfinite(sim.t_final) ? sim.t_final : 0.0;
    sim.dump_interval = r.number("outputs.dump_interval", t_final);
}

void read_profile(Reader& r, ProfileJob& job) {
    job.t = r.number("profile.t", std::nullopt);
    job.x_min = r.optional_number("profile.x_min");
    job.x_max = r.optional_number("profile.x_max");
    job.dx = r.number("profile.dx", job.dx);
    if (job.x_min.has_value() != job.x_max.has_value()) r.error("profile.x_min and profile.x_max must be given together");
    if (!(job.t >= 0.0) && std::isfinite(job.t)) r.error("profile.t must be >= 0");
    if (!(job.dx > 0.0)) r.error("profile.dx must be positive");
    if (job.x_min && job.x_max && !(*job.x_min < *job.x_max)) r.error("profile.x_min must be below profile.x_max");
}

void read_linear(Reader& r, LinearJob& job) {
    job.A = r.number("linear.A", job.A);
    job.eps = r.number("linear.eps", job.eps);
    job.xi_min = r.number("linear.xi_min", job.xi_min);
    job.xi_max = r.number("linear.xi_max", job.xi_max);
    job.count = static_cast<int>(r.integer("linear.count", job.count));
    job.log_spacing = r.choice("linear.spacing", "log", {"log", "linear"}) == "log";
    job.coefficient = r.choice("linear.coefficient", "consistent", {"consistent", "literal"}) == "literal"
                          ? linear::Coefficient::literal
                          : linear::Coefficient::consistent;
    job.kappa = r.number("linear.kappa", job.kappa);
    if (!(job.A > 0.0)) r.error("linear.A must be positive");
    if (!(job.eps > 0.0)) r.error("linear.eps must be positive");
    if (job.count < 1) r.error("linear.count must be >= 1");
    if (!(job.xi_min <= job.xi_max)) r.error("linear.xi_min must not exceed linear.xi_max");
    if (job.log_spacing && !(job.xi_min > 0.0)) r.error("linear.xi_min must be positive for log spacing");
    if (!(job.kappa >= 0.0 && job.kappa <= 0.1)) r.error("linear.kappa must lie in [0, 0.1]");
}

const std::set<std::string>& sweepable() {
    static const std::set<std::string> keys = {
        "params.A",           "params.n_minus",       "params.n_plus",         "params.u_minus", "params.eps",
        "params.m_i",         "params.m_e",           "params.T_i",            "params.T_e",     "params.mu_i",
        "params.mu_e",        "grid.L",               "grid.dx",               "time.t_final",   "time.cfl",
        "time.theta",         "perturbation.amplitude", "perturbation.center", "perturbation.width",
        "perturbation.seed",  "outputs.interval",     "outputs.dump_interval"};
    return keys;
}

}  // namespace

JobKind parse_job_kind(const std::string& name) {
    if (name == "profile") return JobKind::profile;
    if (name == "simulate") return JobKind::simulate;
    if (name == "energy") return JobKind::energy;
    if (name == "linear") return JobKind::linear;
    if (name == "sweep") return JobKind::sweep;
    throw ValidationError(fmt::format("unknown job kind '{}'", name));
}

const char* to_string(JobKind kind) {
    switch (kind) {
        case JobKind::profile:
            return "profile";
        case JobKind::simulate:
            return "simulate";
        case JobKind::energy:
            return "energy";
        case JobKind::linear:
            return "linear";
        case JobKind::sweep:
            return "sweep";
    }
    return "unknown";
}

RawConfig parse_ini(const std::string& text) {
    // Boost's INI reader only knows ';' comments; accept '#' as well.
    std::stringstream in(text), cleaned;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (!t.empty() && t.front() == '#') continue;
        cleaned << line << '\n';
    }
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(cleaned, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ValidationError(fmt::format("config: {}", e.message()));
    }
    RawConfig raw;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ValidationError(fmt::format("config: key '{}' is outside any section", section));
        for (const auto& [key, value] : body) raw[section + "." + key] = trim(value.data());
    }
    return raw;
}

RawConfig read_ini_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot read config file {}", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_ini(ss.str());
}

JobConfig build_config(const RawConfig& raw, JobKind kind) {
    Reader r(raw);
    JobConfig job;
    job.kind = kind;
    job.raw = raw;

    switch (kind) {
        case JobKind::linear:
            read_linear(r, job.linear);
            break;
        case JobKind::profile:
            read_params(r, job.sim);
            read_profile(r, job.profile);
            break;
        case JobKind::simulate:
        case JobKind::energy:
        case JobKind::sweep:
            read_params(r, job.sim);
            read_simulation(r, job.sim);
            if (kind == JobKind::sweep) {
                job.sweep.parameter = r.text("sweep.parameter");
                job.sweep.values = r.number_list("sweep.values");
                if (!job.sweep.parameter.empty() && !sweepable().count(job.sweep.parameter))
                    r.error(fmt::format("sweep.parameter '{}' is not a numeric simulation setting",
                                        job.sweep.parameter));
            }
            break;
    }
    r.check_unused(kind);
    r.raise_if_failed();

    if (kind != JobKind::linear) {
        check_u_plus(raw, r, job.sim);
        validate_params(r, job.sim);
        r.raise_if_failed();
    }
    if (kind == JobKind::simulate || kind == JobKind::energy) {
        validate_config(job.sim);
        validate_domain(job.sim, simulation_grid(job.sim));
    }
    job.settings = r.settings();
    return job;
}

JobConfig parse_config(const std::string& text, JobKind kind) { return build_config(parse_ini(text), kind); }

JobConfig load_config(const std::filesystem::path& path, JobKind kind) {
    return build_config(read_ini_file(path), kind);
}

std::string JobConfig::canonical_text() const {
    std::string out;
    std::string current;
    for (const auto& [key, value] : settings) {
        const auto dot = key.find('.');
        const std::string section = key.substr(0, dot);
        if (section != current) {
            if (!current.empty()) out += '\n';
            out += fmt::format("[{}]\n", section);
            current = section;
        }
        out += fmt::format("{} = {}\n", key.substr(dot + 1), value);
    }
    return out;
}

std::string JobConfig::hash() const { return sha256_hex(canonical_text()); }

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw IoError("SHA-256 digest failed");
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

}  // namespace nsp
