#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nsp/diagnostics.hpp"
#include "nsp/linear.hpp"
#include "nsp/nsp_sim.hpp"
#include "nsp/poisson.hpp"
#include "nsp/rarewave.hpp"

namespace py = pybind11;
using namespace nsp;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }
py::array_t<double> to_array(const Field& f) { return to_array(f.data()); }

Field to_field(const Grid1D& g, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 1 || static_cast<std::size_t>(a.shape(0)) != g.n_cells)
        throw ValidationError("array length must match the grid node count");
    return Field(g, std::vector<double>(a.data(), a.data() + a.shape(0)));
}

py::dict profile_dict(const RarefactionProfile& pr) {
    py::dict d;
    d["t"] = pr.time;
    d["x"] = to_array(pr.nr.grid().nodes());
    d["nr"] = to_array(pr.nr);
    d["ur"] = to_array(pr.ur);
    d["phir"] = to_array(pr.phir);
    d["dnr"] = to_array(pr.dnr);
    d["dur"] = to_array(pr.dur);
    return d;
}

py::dict snapshot_dict(const Snapshot& s) {
    py::dict d;
    d["t"] = s.t;
    d["step"] = s.step;
    d["E_zero"] = s.E_zero;
    d["E_first"] = s.E_first;
    d["lyapunov"] = s.lyapunov;
    d["D_wave"] = s.D_wave;
    d["D_flat"] = s.D_flat;
    d["sup_n"] = s.sup_n;
    d["sup_u"] = s.sup_u;
    d["sup_phi"] = s.sup_phi;
    d["quasineutral_gap"] = s.quasineutral_gap;
    d["species_gap"] = s.species_gap;
    d["quad_form"] = s.quad_form;
    d["mass"] = s.mass;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rarefaction-wave profiles, Poisson-Boltzmann solver, simulations and Fourier modes";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<Grid1D>(m, "Grid1D")
        .def(py::init<double, double, std::size_t>(), py::arg("x_min"), py::arg("x_max"), py::arg("nodes"))
        .def_static("with_spacing", &Grid1D::with_spacing, py::arg("x_min"), py::arg("x_max"), py::arg("dx"))
        .def_readonly("x_min", &Grid1D::x_min)
        .def_readonly("x_max", &Grid1D::x_max)
        .def_readonly("nodes", &Grid1D::n_cells)
        .def_readonly("dx", &Grid1D::dx)
        .def("x", [](const Grid1D& g) { return to_array(g.nodes()); })
        .def("__len__", &Grid1D::size)
        .def("__repr__", [](const Grid1D& g) {
            return "<Grid1D [" + std::to_string(g.x_min) + ", " + std::to_string(g.x_max) + "] nodes=" +
                   std::to_string(g.n_cells) + ">";
        });

    py::class_<PhysParamsOne>(m, "OneFluidParams")
        .def(py::init([](double A, double n_minus, double n_plus, double u_minus, double eps) {
                 PhysParamsOne p{A, n_minus, n_plus, u_minus, eps};
                 p.validate();
                 return p;
             }),
             py::arg("A") = 1.0, py::arg("n_minus") = 1.0, py::arg("n_plus") = 2.0, py::arg("u_minus") = 0.0,
             py::arg("eps") = 0.1)
        .def_readonly("A", &PhysParamsOne::A)
        .def_readonly("n_minus", &PhysParamsOne::n_minus)
        .def_readonly("n_plus", &PhysParamsOne::n_plus)
        .def_readonly("u_minus", &PhysParamsOne::u_minus)
        .def_readonly("eps", &PhysParamsOne::eps_smooth)
        .def_property_readonly("c", &PhysParamsOne::c)
        .def_property_readonly("u_plus", &PhysParamsOne::u_plus)
        .def_property_readonly("strength", &PhysParamsOne::strength);

    py::class_<PhysParamsTwo>(m, "TwoFluidParams")
        .def(py::init([](double m_i, double m_e, double T_i, double T_e, double n_minus, double n_plus,
                         double u_minus, double eps, double mu_i, double mu_e) {
                 PhysParamsTwo p{m_i, m_e, T_i, T_e, mu_i, mu_e, n_minus, n_plus, u_minus, eps};
                 p.validate();
                 return p;
             }),
             py::arg("m_i") = 2.0, py::arg("m_e") = 1.0, py::arg("T_i") = 1.0, py::arg("T_e") = 1.0,
             py::arg("n_minus") = 1.0, py::arg("n_plus") = 2.0, py::arg("u_minus") = 0.0, py::arg("eps") = 0.1,
             py::arg("mu_i") = 1.0, py::arg("mu_e") = 1.0)
        .def_property_readonly("c", &PhysParamsTwo::c)
        .def_property_readonly("u_plus", &PhysParamsTwo::u_plus)
        .def_property_readonly("phi_coeff", &PhysParamsTwo::phi_coeff);

    py::class_<BurgersWave>(m, "BurgersWave")
        .def(py::init([](double w_minus, double w_plus, double eps) {
                 BurgersWave w{w_minus, w_plus, eps};
                 w.validate();
                 return w;
             }),
             py::arg("w_minus"), py::arg("w_plus"), py::arg("eps"))
        .def_static("from_params", py::overload_cast<const PhysParamsOne&>(&BurgersWave::from))
        .def_readonly("w_minus", &BurgersWave::w_minus)
        .def_readonly("w_plus", &BurgersWave::w_plus)
        .def_readonly("eps", &BurgersWave::eps_smooth);

    m.def("burgers_value", &burgers_value, py::arg("wave"), py::arg("t"), py::arg("x"));
    m.def("riemann_fan", &riemann_fan, py::arg("wave"), py::arg("t"), py::arg("x"));
    m.def(
        "profile",
        [](const PhysParamsOne& p, double t, const Grid1D& g) { return profile_dict(profile_onefluid(p, t, g)); },
        py::arg("params"), py::arg("t"), py::arg("grid"), "One-fluid rarefaction profile at time t.");
    m.def(
        "profile_twofluid",
        [](const PhysParamsTwo& p, double t, const Grid1D& g) { return profile_dict(profile_twofluid(p, t, g)); },
        py::arg("params"), py::arg("t"), py::arg("grid"));
    m.def(
        "decay_slope",
        [](const BurgersWave& w, double p, const std::vector<double>& times) {
            return verify_decay_rates(w, p, times).slope;
        },
        py::arg("wave"), py::arg("p"), py::arg("times"), "Fitted log-log slope of the profile gradient norm.");

    m.def("psi_potential", &psi_potential, py::arg("n"), py::arg("nr"), py::arg("A"));
    m.def(
        "solve_poisson_boltzmann",
        [](const Grid1D& g, py::array_t<double, py::array::c_style | py::array::forcecast> n, double left,
           double right) {
            const EllipticSolveReport r = solve_poisson_boltzmann(to_field(g, n), left, right);
            py::dict d;
            d["phi"] = to_array(r.phi);
            d["iterations"] = r.iterations;
            d["residual"] = r.final_residual;
            d["converged"] = r.converged;
            d["history"] = r.residual_history;
            return d;
        },
        py::arg("grid"), py::arg("n"), py::arg("phi_left"), py::arg("phi_right"));

    m.def(
        "simulate",
        [](const py::object& params, double t_final, double margin, double dx, double amplitude,
           double output_interval) {
            SimConfig cfg;
            if (py::isinstance<PhysParamsTwo>(params)) {
                cfg.model = Model::two_fluid;
                cfg.two = params.cast<PhysParamsTwo>();
            } else {
                cfg.one = params.cast<PhysParamsOne>();
            }
            cfg.t_final = t_final;
            cfg.grid.margin = margin;
            cfg.grid.dx = dx;
            cfg.perturbation.amplitude = amplitude;
            cfg.output_interval = output_interval;
            Trajectory tr;
            {
                py::gil_scoped_release release;
                tr = run_simulation(cfg);
            }
            py::list out;
            for (const Snapshot& s : tr.snapshots) out.append(snapshot_dict(s));
            return out;
        },
        py::arg("params"), py::arg("t_final"), py::arg("margin") = 60.0, py::arg("dx") = 0.05,
        py::arg("amplitude") = 0.05, py::arg("output_interval") = 1.0,
        "Runs a perturbed-profile simulation and returns the diagnostics at each output time.");

    m.def(
        "spectral_mode",
        [](double xi, double eps, double A, bool literal) {
            const linear::SpectralMode s =
                linear::spectral_mode(xi, eps, A, literal ? linear::Coefficient::literal : linear::Coefficient::consistent);
            py::dict d;
            d["sigma"] = s.sigma;
            d["lambda_plus"] = s.lambda_plus;
            d["lambda_minus"] = s.lambda_minus;
            d["degenerate"] = s.degenerate;
            return d;
        },
        py::arg("xi"), py::arg("eps") = 1.0, py::arg("A") = 1.0, py::arg("literal") = false);
    m.def(
        "greens_matrix",
        [](double xi, double t, double eps, double A) {
            const linear::Mat2 G = linear::greens_matrix(linear::spectral_mode(xi, eps, A), t);
            return std::vector<std::vector<std::complex<double>>>{{G[0][0], G[0][1]}, {G[1][0], G[1][1]}};
        },
        py::arg("xi"), py::arg("t"), py::arg("eps") = 1.0, py::arg("A") = 1.0);
    m.def(
        "mode_decay_rate",
        [](double xi, double eps, double A) { return linear::fit_mode_decay(linear::spectral_mode(xi, eps, A)).rate; },
        py::arg("xi"), py::arg("eps") = 1.0, py::arg("A") = 1.0);

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
