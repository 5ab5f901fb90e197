#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kron/dynamics.hpp"
#include "kron/errors.hpp"
#include "kron/io.hpp"
#include "kron/parse.hpp"
#include "kron/verify.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

py::object to_py(const json& j) {
    py::module_ pyjson = py::module_::import("json");
    return pyjson.attr("loads")(j.dump());
}

json from_py(const py::object& obj) {
    py::module_ pyjson = py::module_::import("json");
    std::string text = py::cast<std::string>(pyjson.attr("dumps")(obj));
    return json::parse(text);
}

struct PySystem {
    kron::SystemModel model;

    explicit PySystem(const py::object& doc) : model(kron::system_from_json(from_py(doc))) {}

    py::object to_json() const { return to_py(kron::system_to_json(model)); }

    std::vector<std::string> chart() const {
        std::vector<std::string> names;
        for (const auto& v : model.chart) names.push_back(v.name);
        return names;
    }

    std::vector<std::string> field() const {
        std::vector<std::string> out;
        for (const auto& f : model.vector_field) out.push_back(kron::print_expr(f));
        return out;
    }

    py::dict family() const {
        py::dict d;
        d["d"] = model.family.d;
        if (model.family.d_star) d["d_star"] = *model.family.d_star;
        d["u_pinned"] = model.family.u_pinned;
        d["p_pinned"] = model.family.p_pinned;
        d["q_pinned"] = model.family.q_pinned;
        return d;
    }

    py::dict classify() const {
        if (!kind_is_hamiltonian(model.kind)) {
            throw kron::Error(kron::ErrorCode::BadDocument,
                              "classification applies to Hamiltonian kinds");
        }
        kron::TorusClass tc = kron::classify_torus(*model.structure);
        py::dict d;
        d["class"] = kron::torus_kind_name(tc.kind);
        d["intersection_dim"] = tc.intersection_dim;
        d["complement_dim"] = kron::torus_tangent_complement(*model.structure).cols();
        d["phi_phi_block_of_W_zero"] = model.structure->form_is_exact();
        if (model.kind == kron::SystemKind::HamNoncompact) {
            d["form_is_exact"] = model.structure->form_is_exact();
        }
        d["det_J"] = kron::rat_to_string(model.structure->J.determinant());
        return d;
    }

    std::vector<double> frequency(const std::vector<std::string>& u0,
                                  const std::vector<std::string>& p0,
                                  const std::vector<std::string>& q0) const {
        auto rats = [](const std::vector<std::string>& xs) {
            std::vector<kron::Rat> out;
            for (const auto& x : xs) out.push_back(kron::parse_rat(x));
            return out;
        };
        kron::TorusSpec t = kron::family_member(model, rats(u0), rats(p0), rats(q0));
        return kron::torus_frequency(model, t);
    }

    py::dict reversibility() const {
        kron::ReversibilityReport r = kron::reversibility_check(model);
        py::dict d;
        d["reversible"] = r.reversible;
        d["type"] = py::make_tuple(r.involution_type.first, r.involution_type.second);
        d["fixed_components"] = r.fixed_components;
        return d;
    }
};

py::dict run_integrate(const PySystem& system, const std::vector<double>& start,
                       const std::string& method, double dt, double horizon, int store_every) {
    kron::IntegratorConfig cfg;
    cfg.method = kron::method_from_name(method);
    cfg.dt = dt;
    cfg.horizon = horizon;
    cfg.store_every = store_every;
    kron::Trajectory traj = kron::integrate(system.model, start, cfg);

    const std::size_t rows = traj.times.size(), cols = system.model.dim();
    py::array_t<double> times(static_cast<py::ssize_t>(rows));
    py::array_t<double> states({static_cast<py::ssize_t>(rows), static_cast<py::ssize_t>(cols)});
    auto t = times.mutable_unchecked<1>();
    auto x = states.mutable_unchecked<2>();
    for (std::size_t i = 0; i < rows; ++i) {
        t(static_cast<py::ssize_t>(i)) = traj.times[i];
        for (std::size_t j = 0; j < cols; ++j) {
            x(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = traj.states[i][j];
        }
    }
    py::dict out;
    out["t"] = times;
    out["states"] = states;
    out["coordinates"] = traj.coordinates;
    out["stop"] = traj.stop == kron::StopReason::BlowUp ? "blowup" : "completed";
    out["stop_time"] = traj.stop_time;
    return out;
}

py::dict run_frequencies(const PySystem& system, const std::vector<double>& start, double dt,
                         double horizon) {
    kron::IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.horizon = horizon;
    kron::Trajectory traj = kron::integrate(system.model, start, cfg);
    std::vector<std::size_t> idx;
    for (int a = 0; a < system.model.count_phi(); ++a) {
        idx.push_back(system.model.phi_offset() + a);
    }
    kron::FrequencyEstimate est = kron::estimate_frequencies(traj, idx);
    py::dict out;
    out["omega"] = est.omega;
    out["rms_residual"] = est.rms_residual;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact construction and verification of systems with invariant-torus families";

    py::register_exception<kron::Error>(m, "KronError");

    py::class_<kron::PolyExpr>(m, "Expr")
        .def(py::init([](const std::string& text, const py::object& vars) {
                 std::vector<kron::Var> ctx;
                 for (const auto& item : py::cast<py::dict>(vars)) {
                     std::string kind = py::cast<std::string>(item.second);
                     ctx.push_back({py::cast<std::string>(item.first),
                                    kind == "angle" ? kron::VarKind::Angle
                                                    : kron::VarKind::Line});
                 }
                 return kron::parse_expr(text, ctx);
             }),
             py::arg("text"), py::arg("vars") = py::dict())
        .def("__str__", &kron::print_expr)
        .def("__repr__", [](const kron::PolyExpr& e) { return "Expr(" + kron::print_expr(e) + ")"; })
        .def("__add__",
             [](const kron::PolyExpr& a, const kron::PolyExpr& b) { return a + b; })
        .def("__sub__",
             [](const kron::PolyExpr& a, const kron::PolyExpr& b) { return a - b; })
        .def("__mul__",
             [](const kron::PolyExpr& a, const kron::PolyExpr& b) { return a * b; })
        .def("__neg__", [](const kron::PolyExpr& e) { return -e; })
        .def("__eq__",
             [](const kron::PolyExpr& a, const kron::PolyExpr& b) { return a == b; })
        .def("derivative", &kron::PolyExpr::derivative)
        .def("is_zero", &kron::PolyExpr::is_zero)
        .def("evaluate", [](const kron::PolyExpr& e, const std::map<std::string, double>& pt) {
            return e.evaluate(pt);
        });

    py::class_<PySystem>(m, "System")
        .def(py::init<const py::object&>(), py::arg("document"))
        .def_property_readonly("kind",
                               [](const PySystem& s) { return kron::system_kind_name(s.model.kind); })
        .def_property_readonly("dim", [](const PySystem& s) { return s.model.dim(); })
        .def("to_json", &PySystem::to_json)
        .def("chart", &PySystem::chart)
        .def("vector_field", &PySystem::field)
        .def("family", &PySystem::family)
        .def("classify", &PySystem::classify)
        .def("frequency", &PySystem::frequency, py::arg("u0"),
             py::arg("p0") = std::vector<std::string>{}, py::arg("q0") = std::vector<std::string>{})
        .def("reversibility", &PySystem::reversibility)
        .def("hamiltonian", [](const PySystem& s) -> py::object {
            if (!s.model.hamiltonian) return py::none();
            return py::cast(*s.model.hamiltonian);
        })
        .def("poisson_bracket", [](const PySystem& s, const kron::PolyExpr& f,
                                   const kron::PolyExpr& g) {
            if (!kind_is_hamiltonian(s.model.kind)) {
                throw kron::Error(kron::ErrorCode::BadDocument,
                                  "brackets need a Hamiltonian kind");
            }
            return kron::poisson_bracket(f, g, *s.model.structure, s.model.chart);
        });

    m.def(
        "plan_ham",
        [](int N, int n, const std::string& cls, int d, const std::vector<double>& omega,
           bool compact) {
            kron::PlanResult plan = kron::plan_parameters(N, n, kron::torus_kind_from_name(cls), d);
            kron::SystemModel sys =
                kron::make_system(kron::planned_ham_params(plan, compact, omega));
            return to_py(kron::system_to_json(sys));
        },
        py::arg("N"), py::arg("n"), py::arg("target_class"), py::arg("d"),
        py::arg("omega") = std::vector<double>{}, py::arg("compact") = false);

    m.def(
        "plan_rev",
        [](int n, int m_, int l, int d_star, int d, const std::vector<double>& omega,
           bool compact) {
            kron::RevPlanResult plan = kron::plan_rev_parameters(n, m_, l, d_star, d);
            kron::SystemModel sys =
                kron::make_system(kron::planned_rev_params(plan, compact, omega));
            return to_py(kron::system_to_json(sys));
        },
        py::arg("n"), py::arg("m"), py::arg("l"), py::arg("d_star"), py::arg("d"),
        py::arg("omega") = std::vector<double>{}, py::arg("compact") = false);

    m.def("integrate", &run_integrate, py::arg("system"), py::arg("start"),
          py::arg("method") = "rk4", py::arg("dt") = 1e-3, py::arg("horizon") = 10.0,
          py::arg("store_every") = 1);

    m.def("frequencies", &run_frequencies, py::arg("system"), py::arg("start"),
          py::arg("dt") = 1e-3, py::arg("horizon") = 20.0);

    m.def(
        "exceptional_period",
        [](int l, double chi, double xi1) {
            kron::PeriodMeasurement pm = kron::measure_exceptional_period(l, chi, xi1);
            py::dict out;
            out["varpi_measured"] = pm.varpi_measured;
            out["varpi_closed_form"] = pm.varpi_closed_form;
            out["relative_error"] = pm.relative_error;
            out["periods"] = pm.periods;
            return out;
        },
        py::arg("l"), py::arg("chi"), py::arg("xi1"));

    m.def(
        "recurrence_time",
        [](const std::vector<double>& omega, double T, double eps) {
            kron::RecurrenceQuery q;
            q.omega = omega;
            q.T = T;
            q.eps = eps;
            kron::RecurrenceResult r = kron::find_recurrence_time(q);
            py::dict out;
            out["Theta"] = r.Theta;
            out["multiple"] = r.multiple;
            out["dist"] = r.dist;
            return out;
        },
        py::arg("omega"), py::arg("T"), py::arg("eps"));

    m.def(
        "diophantine",
        [](const std::vector<double>& omega, double tau, int j_max,
           const std::optional<std::vector<std::string>>& exact) {
            std::optional<std::vector<kron::Rat>> rats;
            if (exact) {
                std::vector<kron::Rat> rs;
                for (const auto& x : *exact) rs.push_back(kron::parse_rat(x));
                rats = std::move(rs);
            }
            return to_py(kron::diophantine_to_json(kron::diophantine_scan(omega, tau, j_max, rats)));
        },
        py::arg("omega"), py::arg("tau") = 1.0, py::arg("j_max") = 100,
        py::arg("exact") = py::none());

    m.def(
        "verify_ham",
        [](int N, int n, const std::string& cls, int d, const std::vector<double>& omega,
           bool compact, int samples, unsigned seed) {
            kron::HamRegime regime;
            regime.N = N;
            regime.n = n;
            regime.target_class = kron::torus_kind_from_name(cls);
            regime.d = d;
            regime.omega = omega;
            regime.compact = compact;
            kron::ScanConfig scan;
            scan.samples = samples;
            scan.seed = seed;
            json out = json::array();
            for (const auto& r : kron::verify_regime_suite(regime, scan)) {
                out.push_back(kron::claim_to_json(r));
            }
            return to_py(out);
        },
        py::arg("N"), py::arg("n"), py::arg("target_class"), py::arg("d"),
        py::arg("omega") = std::vector<double>{}, py::arg("compact") = false,
        py::arg("samples") = 200, py::arg("seed") = 1);

    m.def(
        "verify_rev",
        [](int n, int m_, int l, int d_star, int d, const std::vector<double>& omega,
           bool compact, int samples, unsigned seed) {
            kron::RevRegime regime;
            regime.n = n;
            regime.m = m_;
            regime.l = l;
            regime.d_star = d_star;
            regime.d = d;
            regime.omega = omega;
            regime.compact = compact;
            kron::ScanConfig scan;
            scan.samples = samples;
            scan.seed = seed;
            json out = json::array();
            for (const auto& r : kron::verify_regime_suite(regime, scan)) {
                out.push_back(kron::claim_to_json(r));
            }
            return to_py(out);
        },
        py::arg("n"), py::arg("m"), py::arg("l"), py::arg("d_star"), py::arg("d"),
        py::arg("omega") = std::vector<double>{}, py::arg("compact") = false,
        py::arg("samples") = 200, py::arg("seed") = 1);

    m.def(
        "uniqueness_scan",
        [](const PySystem& system, int samples, unsigned seed) {
            kron::ScanConfig scan;
            scan.samples = samples;
            scan.seed = seed;
            return to_py(kron::claim_to_json(kron::uniqueness_scan(system.model, scan)));
        },
        py::arg("system"), py::arg("samples") = 200, py::arg("seed") = 1);

    m.attr("__version__") = "0.1.0";
}
