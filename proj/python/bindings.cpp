// Python bindings for the core operations: polynomial arithmetic, divergence
// curve tracing, certified contact points, counting bounds, the path energy
// machinery, and the ODE oracle.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hilbert16/bounds.hpp"
#include "hilbert16/ode_oracle.hpp"
#include "hilbert16/variational.hpp"

namespace py = pybind11;
using namespace hilbert16;

namespace {

std::vector<std::pair<double, double>> polyline_pairs(const std::vector<Vec2>& pts) {
    std::vector<std::pair<double, double>> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.emplace_back(p.x, p.y);
    return out;
}

}  // namespace

PYBIND11_MODULE(_hilbert16, m) {
    m.doc() = "limit-cycle bounds and variational search for planar polynomial systems";

    py::register_exception<Error>(m, "Hilbert16Error");

    py::class_<BivariatePoly>(m, "BivariatePoly")
        .def(py::init<>())
        .def_static("parse", &parse_poly, py::arg("text"))
        .def("eval", py::overload_cast<double, double>(&BivariatePoly::eval, py::const_),
             py::arg("x"), py::arg("y"))
        .def("derivative",
             [](const BivariatePoly& p, const std::string& var) {
                 if (var != "x" && var != "y")
                     throw Error(errc::usage, "variable must be 'x' or 'y'");
                 return p.derivative(var == "x" ? Var::X : Var::Y);
             },
             py::arg("var"))
        .def_property_readonly("degree",
                               [](const BivariatePoly& p) -> py::object {
                                   const auto d = p.degree();
                                   if (!d) return py::none();
                                   return py::int_(*d);
                               })
        .def_property_readonly("terms",
                               [](const BivariatePoly& p) {
                                   std::map<std::pair<int, int>, double> out;
                                   for (const auto& [k, c] : p.terms()) out[k] = c;
                                   return out;
                               })
        .def("__str__", &BivariatePoly::to_string)
        .def("__repr__",
             [](const BivariatePoly& p) { return "BivariatePoly('" + p.to_string() + "')"; });

    py::class_<PlanarSystem>(m, "PlanarSystem")
        .def(py::init([](const std::string& p, const std::string& q) {
                 return PlanarSystem(parse_poly(p), parse_poly(q));
             }),
             py::arg("P"), py::arg("Q"))
        .def_readonly("P", &PlanarSystem::P)
        .def_readonly("Q", &PlanarSystem::Q)
        .def_readonly("degree", &PlanarSystem::degree);

    m.def("divergence", &divergence, py::arg("system"));
    m.def("contact_system", &contact_system, py::arg("system"));
    m.def(
        "perturb",
        [](const PlanarSystem& sys, double delta, std::uint64_t seed) {
            return perturb(sys, delta, seed);
        },
        py::arg("system"), py::arg("delta"), py::arg("seed"));

    py::class_<Vec2>(m, "Vec2").def(py::init<double, double>()).def_readonly("x", &Vec2::x).def_readonly(
        "y", &Vec2::y);

    py::class_<Box2>(m, "Box2")
        .def(py::init<double, double, double, double>(), py::arg("x_lo"), py::arg("x_hi"),
             py::arg("y_lo"), py::arg("y_hi"))
        .def_static("square", &Box2::square, py::arg("lo"), py::arg("hi"))
        .def_readonly("x_lo", &Box2::x_lo)
        .def_readonly("x_hi", &Box2::x_hi)
        .def_readonly("y_lo", &Box2::y_lo)
        .def_readonly("y_hi", &Box2::y_hi);

    py::class_<CurveComponent>(m, "CurveComponent")
        .def_property_readonly("kind",
                               [](const CurveComponent& c) {
                                   return c.kind == ComponentKind::Oval ? "oval" : "line";
                               })
        .def_readonly("touches_boundary", &CurveComponent::touches_boundary)
        .def_property_readonly(
            "polyline", [](const CurveComponent& c) { return polyline_pairs(c.polyline); });

    py::class_<DivCurveReport>(m, "DivCurveReport")
        .def_readonly("components", &DivCurveReport::components)
        .def_readonly("M", &DivCurveReport::M)
        .def_readonly("generic", &DivCurveReport::generic)
        .def_readonly("grid", &DivCurveReport::grid)
        .def_readonly("warnings", &DivCurveReport::warnings)
        .def_property_readonly("singular_points", [](const DivCurveReport& r) {
            return polyline_pairs(r.singular_points);
        });

    m.def("div_curve_report", &div_curve_report, py::arg("system"), py::arg("window"),
          py::arg("grid") = 512);
    m.def("trace_zero_set", &trace_zero_set, py::arg("poly"), py::arg("window"),
          py::arg("grid") = 512);
    m.def(
        "singular_points",
        [](const BivariatePoly& p, const Box2& w, double tol) {
            return polyline_pairs(singular_points(p, w, tol));
        },
        py::arg("poly"), py::arg("window"), py::arg("tol") = 1e-8);

    py::class_<Root2>(m, "Root2")
        .def_property_readonly(
            "point", [](const Root2& r) { return std::make_pair(r.point.x, r.point.y); })
        .def_readonly("radius", &Root2::radius)
        .def_readonly("simple", &Root2::simple)
        .def_readonly("jacobian_det", &Root2::jacobian_det);

    py::class_<ContactReport>(m, "ContactReport")
        .def_readonly("points", &ContactReport::points)
        .def_readonly("N", &ContactReport::N)
        .def_property_readonly("certified",
                               [](const ContactReport& r) { return r.undecided.empty(); });

    m.def(
        "solve_system_2d",
        [](const BivariatePoly& p, const BivariatePoly& q, const Box2& w, double tol) {
            const Solve2dResult res = solve_system_2d(p, q, w, tol);
            return std::make_pair(res.roots, res.undecided.empty());
        },
        py::arg("p"), py::arg("q"), py::arg("window"), py::arg("tol") = 1e-10,
        "returns (roots, certified)");
    m.def(
        "contact_points",
        [](const PlanarSystem& sys, const Box2& w, double tol) {
            return contact_points(sys, w, tol);
        },
        py::arg("system"), py::arg("window"), py::arg("tol") = 1e-10);

    m.def("harnack_max_components", &harnack_max_components, py::arg("k"));
    m.def("bezout_bound", &bezout_bound, py::arg("d1"), py::arg("d2"));
    m.def("master_bound", &master_bound, py::arg("n"), py::arg("M"), py::arg("N"));
    m.def("quartic_bound", &quartic_bound, py::arg("n"));
    m.def("lienard_bound", &lienard_bound, py::arg("p"), py::arg("q"));

    py::class_<BehaviorCensus>(m, "BehaviorCensus").def_readonly("total", &BehaviorCensus::total);
    m.def("behavior_census", &behavior_census, py::arg("report"), py::arg("contacts"));

    py::class_<DiscretizedPath>(m, "DiscretizedPath")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("x"), py::arg("y"))
        .def_static("circle", &DiscretizedPath::circle, py::arg("K"), py::arg("radius"),
                    py::arg("center") = Vec2{0.0, 0.0})
        .def_readonly("x", &DiscretizedPath::x)
        .def_readonly("y", &DiscretizedPath::y)
        .def_property_readonly("K", &DiscretizedPath::K);

    m.def("energy_E0", &energy_E0, py::arg("path"), py::arg("system"));
    m.def("h2_norm_sq", &h2_norm_sq, py::arg("path"));
    m.def("gradient_E0", &gradient_E0, py::arg("path"), py::arg("system"));
    m.def(
        "winding_number",
        [](const DiscretizedPath& p) {
            const WindingInfo w = winding_number(p);
            return std::make_pair(w.regular, w.regular ? w.value : 0);
        },
        py::arg("path"), "returns (regular, winding)");
    m.def("reverse_time", &reverse_time, py::arg("path"));
    m.def("resample", &resample, py::arg("path"), py::arg("K"));
    m.def(
        "descend",
        [](const DiscretizedPath& start, const PlanarSystem& sys, double eps, int max_iters,
           double grad_tol, bool h2_precondition) {
            EnergyConfig cfg;
            cfg.epsilon = eps;
            if (eps > 0.0) cfg.v_eps = make_v_eps(eps, start.K(), 0.01);
            DescendOptions opts;
            opts.max_iters = max_iters;
            opts.grad_tol = grad_tol;
            opts.h2_precondition = h2_precondition;
            const DescendResult res = descend(start, sys, cfg, opts);
            py::dict out;
            out["path"] = res.path;
            out["energy"] = res.energy;
            out["grad_norm"] = res.grad_norm;
            out["iterations"] = res.trace.empty() ? 0 : res.trace.back().iter;
            out["converged"] = res.reason == StopReason::Converged;
            return out;
        },
        py::arg("start"), py::arg("system"), py::arg("eps") = 0.0, py::arg("max_iters") = 50000,
        py::arg("grad_tol") = 1e-8, py::arg("h2_precondition") = false);

    py::class_<Orbit>(m, "Orbit")
        .def_property_readonly("points", [](const Orbit& o) { return polyline_pairs(o.points); })
        .def_readonly("times", &Orbit::times)
        .def_property_readonly("period", [](const Orbit& o) -> py::object {
            if (!o.period) return py::none();
            return py::float_(*o.period);
        });

    m.def(
        "integrate",
        [](const PlanarSystem& sys, std::pair<double, double> x0, double t_end, double h) {
            return integrate(sys, Vec2{x0.first, x0.second}, t_end, h);
        },
        py::arg("system"), py::arg("x0"), py::arg("t_end"), py::arg("h") = 1e-3);
    m.def(
        "find_limit_cycle",
        [](const PlanarSystem& sys, std::pair<double, double> point,
           std::pair<double, double> normal, std::pair<double, double> x0, double tol, int K) {
            CycleOptions opts;
            opts.K_out = K;
            return find_limit_cycle(
                sys, Section{{point.first, point.second}, {normal.first, normal.second}},
                Vec2{x0.first, x0.second}, tol, opts);
        },
        py::arg("system"), py::arg("section_point"), py::arg("section_normal"), py::arg("x0"),
        py::arg("tol") = 1e-9, py::arg("K") = 256);
    m.def("cycle_energy_check", &cycle_energy_check, py::arg("system"), py::arg("orbit"),
          py::arg("K") = 256);
    m.def("orbit_to_path", &orbit_to_path, py::arg("orbit"), py::arg("K") = 256);
}
