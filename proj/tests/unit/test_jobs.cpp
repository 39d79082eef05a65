#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "nsp/config.hpp"
#include "nsp/io.hpp"
#include "nsp/jobs.hpp"

using namespace nsp;
namespace fs = std::filesystem;

namespace {

const char* short_sim = R"(
[params]
A = 1
n_minus = 1
n_plus = 2
u_minus = 0
eps = 0.2
[grid]
L = 15
dx = 0.25
[time]
t_final = 3
[perturbation]
shape = random
seed = 9
width = 2
[outputs]
interval = 0.5
dump_interval = 1
)";

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("nsp_test_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::set<std::string> files_under(const fs::path& root) {
    std::set<std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out.insert(fs::relative(e.path(), root).generic_string());
    return out;
}

}  // namespace

TEST_CASE("CSV round trip is bit exact") {
    CsvTable t{{"a", "b"}, {{0.1, 1.0 / 3.0, -2.5e-300}, {1e308, 6.02214076e23, -0.0}}};
    const CsvTable back = parse_csv(format_csv(t));
    CHECK(back.header == t.header);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t r = 0; r < 3; ++r) CHECK(back.columns[k][r] == t.columns[k][r]);
    CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), IoError);
    CHECK_THROWS_AS(parse_csv("a,b\n1,x\n"), IoError);
}

TEST_CASE("simulate reruns are byte identical and the manifest lists every file") {
    TempDir tmp;
    const JobConfig job = parse_config(short_sim, JobKind::simulate);
    const RunManifest m1 = run_simulate_job(job, tmp.path / "a");
    const RunManifest m2 = run_simulate_job(job, tmp.path / "b");
    CHECK(m1.all_checks_pass());
    const std::set<std::string> listed(m1.files.begin(), m1.files.end());
    CHECK(listed == files_under(tmp.path / "a"));
    CHECK(listed.count("dumps/state_0003.csv") == 1);
    for (const std::string& f : m1.files)
        if (f.size() > 4 && f.substr(f.size() - 4) == ".csv") CHECK_MESSAGE(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f), f);
    CHECK(m1.config_hash == m2.config_hash);
}

TEST_CASE("energy job reproduces the in-run diagnostics") {
    TempDir tmp;
    run_simulate_job(parse_config(short_sim, JobKind::simulate), tmp.path / "run");
    const RunManifest e = run_energy_job(tmp.path / "run", tmp.path / "energy");
    CHECK(e.checks.at("consistent_with_run"));
    CHECK(e.all_checks_pass());
    const CsvTable t = read_csv(tmp.path / "energy" / "energy.csv");
    CHECK(t.rows() == 4);
    CHECK(t.column("t").back() == 3.0);
}

TEST_CASE("energy job refuses dumps from another configuration") {
    TempDir tmp;
    run_simulate_job(parse_config(short_sim, JobKind::simulate), tmp.path / "run");
    std::string other = slurp(tmp.path / "run" / "config.ini");
    other.replace(other.find("seed = 9"), 8, "seed = 10");
    std::ofstream(tmp.path / "run" / "config.ini", std::ios::trunc) << other;
    CHECK_THROWS_AS(run_energy_job(tmp.path / "run", tmp.path / "energy"), ValidationError);
}

TEST_CASE("profile job writes a monotone density column") {
    TempDir tmp;
    const JobConfig job =
        parse_config("[params]\nA=1\nn_minus=1\nn_plus=2\nu_minus=0\neps=0.1\n[profile]\nt=10\n", JobKind::profile);
    const RunManifest m = run_profile_job(job, tmp.path);
    CHECK(m.all_checks_pass());
    const auto& nr = read_csv(tmp.path / "profile.csv").column("nr");
    for (std::size_t i = 1; i < nr.size(); ++i) CHECK(nr[i] >= nr[i - 1]);
}

TEST_CASE("linear job emits modes and Green's entries") {
    TempDir tmp;
    const JobConfig job = parse_config("[linear]\ncount = 5\ncoefficient = literal\n", JobKind::linear);
    const RunManifest m = run_linear_job(job, tmp.path, 1.0);
    CHECK(m.all_checks_pass());
    CHECK(m.extra.at("coefficient") == "literal");
    const CsvTable modes = read_csv(tmp.path / "modes.csv");
    CHECK(modes.header == std::vector<std::string>{"xi", "re_lp", "im_lp", "re_lm", "im_lm", "decay_rate"});
    CHECK(modes.rows() == 5);
    CHECK(read_csv(tmp.path / "greens.csv").rows() == 5);
}

TEST_CASE("sweep runs each value in its own directory") {
    TempDir tmp;
    const std::string text = std::string(short_sim) + "[sweep]\nparameter = params.eps\nvalues = 0.1, 0.2, 0.4\n";
    const RunManifest m = run_sweep_job(parse_config(text, JobKind::sweep), tmp.path, 2);
    CHECK(m.all_checks_pass());
    for (const char* d : {"00_eps_0.1", "01_eps_0.2", "02_eps_0.4"}) CHECK(fs::exists(tmp.path / d / "manifest.json"));
    const auto summary = nlohmann::json::parse(slurp(tmp.path / "summary.json"));
    CHECK(summary.at("runs").size() == 3);
    const std::set<std::string> listed(m.files.begin(), m.files.end());
    CHECK(listed == files_under(tmp.path));
}
