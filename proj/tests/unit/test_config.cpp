#include <doctest.h>

#include <cmath>
#include <string>

#include "nsp/config.hpp"

using namespace nsp;

namespace {

const char* minimal = R"(
[model]
type = one_fluid
[params]
A = 1
n_minus = 1
n_plus = 2
u_minus = 0
eps = 0.1
[grid]
L = 100
[time]
t_final = 50
)";

std::string error_of(const std::string& text, JobKind kind) {
    try {
        parse_config(text, kind);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("minimal one-fluid config derives u_plus") {
    const JobConfig j = parse_config(minimal, JobKind::simulate);
    CHECK(j.sim.model == Model::one_fluid);
    // c = sqrt(A + 1) = sqrt 2, u+ = c ln 2.
    CHECK(j.sim.one.u_plus() == doctest::Approx(0.980258).epsilon(1e-6));
    CHECK(j.sim.one.u_plus() == doctest::Approx(std::sqrt(2.0) * std::log(2.0)).epsilon(1e-15));
    CHECK(j.settings.at("time.cfl") == "0.4");
    CHECK(j.settings.at("outputs.dump_interval") == "50");
    CHECK(j.settings.count("params.u_plus") == 0);
}

TEST_CASE("a supplied u_plus is checked against the rarefaction curve") {
    std::string good = minimal;
    good.replace(good.find("eps = 0.1"), 9, "eps = 0.1\nu_plus = 0.98025814346854");
    CHECK_NOTHROW(parse_config(good, JobKind::simulate));
    std::string bad = minimal;
    bad.replace(bad.find("eps = 0.1"), 9, "eps = 0.1\nu_plus = 1.2");
    const std::string msg = error_of(bad, JobKind::simulate);
    CHECK(contains(msg, "params.u_plus"));
    CHECK(contains(msg, "0.980258143468547"));
}

TEST_CASE("empty text lists every missing key") {
    const std::string msg = error_of("", JobKind::simulate);
    for (const char* key : {"params.A", "params.n_minus", "params.n_plus", "params.u_minus", "params.eps", "grid.L",
                            "time.t_final"})
        CHECK_MESSAGE(contains(msg, key), key);
}

TEST_CASE("unknown keys, sections and bad types are errors") {
    std::string typo = minimal;
    typo += "[perturbation]\namplitdue = 0.1\n";
    CHECK(contains(error_of(typo, JobKind::simulate), "unknown key 'amplitdue'"));
    CHECK(contains(error_of(std::string(minimal) + "[extras]\nx = 1\n", JobKind::simulate), "unknown section"));
    std::string wrong_type = minimal;
    wrong_type.replace(wrong_type.find("L = 100"), 7, "L = wide");
    CHECK(contains(error_of(wrong_type, JobKind::simulate), "grid.L: expected a number"));
    CHECK(contains(error_of(std::string(minimal) + "[linear]\nA = 1\n", JobKind::simulate), "not used by simulate"));
}

TEST_CASE("two-fluid keys are not accepted for one-fluid models") {
    std::string text = minimal;
    text.replace(text.find("eps = 0.1"), 9, "eps = 0.1\nm_i = 2");
    CHECK(contains(error_of(text, JobKind::simulate), "does not apply to this model"));
}

TEST_CASE("hash depends only on effective settings") {
    std::string reordered = R"(
[time]
t_final = 50
[grid]
L = 100.0
dx = 0.05
[params]
eps = 0.1
u_minus = 0
n_plus = 2
n_minus = 1
A = 1
)";
    const JobConfig a = parse_config(minimal, JobKind::simulate);
    const JobConfig b = parse_config(reordered, JobKind::simulate);
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 64);
    std::string changed = minimal;
    changed.replace(changed.find("t_final = 50"), 12, "t_final = 51");
    CHECK(parse_config(changed, JobKind::simulate).hash() != a.hash());
    // The canonical text reparses to the same configuration.
    CHECK(parse_config(a.canonical_text(), JobKind::simulate).hash() == a.hash());
}

TEST_CASE("sha256 of a known string") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("profile, linear and sweep jobs") {
    const JobConfig p = parse_config("[params]\nA=1\nn_minus=1\nn_plus=2\nu_minus=0\neps=0.1\n[profile]\nt=10\n",
                                     JobKind::profile);
    CHECK(p.profile.t == 10.0);
    const JobConfig l = parse_config("[linear]\ncoefficient = literal\n", JobKind::linear);
    CHECK(l.linear.coefficient == linear::Coefficient::literal);
    CHECK(l.linear.kappa == 0.05);
    CHECK(contains(error_of("[linear]\nkappa = 0.5\n", JobKind::linear), "kappa"));
    const JobConfig s = parse_config(std::string(minimal) + "[sweep]\nparameter = params.eps\nvalues = 0.05, 0.1, 0.2\n",
                                     JobKind::sweep);
    CHECK(s.sweep.values == std::vector<double>{0.05, 0.1, 0.2});
    CHECK(contains(error_of(std::string(minimal) + "[sweep]\nparameter = model.type\nvalues = 1\n", JobKind::sweep),
                   "not a numeric simulation setting"));
}

TEST_CASE("keys outside a section are rejected") {
    CHECK_THROWS_AS(parse_ini("A = 1\n"), ValidationError);
    CHECK(parse_ini("# comment\n[a]\nb = 2 \n").at("a.b") == "2");
}
