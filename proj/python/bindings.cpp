#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "whkernel/constant_omega.hpp"
#include "whkernel/dist_json.hpp"
#include "whkernel/linear_omega.hpp"
#include "whkernel/numerics.hpp"
#include "whkernel/simulate.hpp"

namespace py = pybind11;
using namespace wh;

namespace {

ServiceDistribution dist_from_pydict(const py::dict& d) {
    const nlohmann::json j = nlohmann::json::parse(py::str(py::module_::import("json").attr("dumps")(d)).cast<std::string>());
    return dist_from_json(j);
}

sim::ClearingSpec clearing_from_args(const std::string& kind, double value) {
    if (kind == "constant") return {sim::ClearingSpec::Kind::constant, value};
    if (kind == "linear") return {sim::ClearingSpec::Kind::linear, value};
    throw ConfigError("omega kind must be 'constant' or 'linear'");
}

}  // namespace

PYBIND11_MODULE(whkernel, m) {
    m.doc() = "steady-state workload/inventory densities and bankruptcy probabilities";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<ServiceDistribution>(m, "ServiceDistribution")
        .def(py::init(&dist_from_pydict), py::arg("spec"))
        .def_static("exponential",
                    [](double mu) { return ServiceDistribution(Exponential{mu}); })
        .def_static("erlang",
                    [](int k, double mu) { return ServiceDistribution(Erlang{k, mu}); })
        .def_static("hyperexp",
                    [](std::vector<double> p, std::vector<double> mu) {
                        return ServiceDistribution(HyperExponential{std::move(p), std::move(mu)});
                    })
        .def("lst", [](const ServiceDistribution& d, std::complex<double> s) { return d.lst(s); })
        .def("mean", &ServiceDistribution::mean)
        .def("survival", &ServiceDistribution::survival)
        .def("rational_form",
             [](const ServiceDistribution& d) {
                 auto [n, den] = d.rational_form();
                 return py::make_tuple(n.coeff, den.coeff);
             })
        .def("__repr__", &ServiceDistribution::describe);

    py::class_<constant_omega::QueueSolution>(m, "QueueSolution")
        .def_readonly("lambda_", &constant_omega::QueueSolution::lambda)
        .def_readonly("omega", &constant_omega::QueueSolution::omega)
        .def_readonly("rho", &constant_omega::QueueSolution::rho)
        .def_readonly("delta", &constant_omega::QueueSolution::delta)
        .def_readonly("A", &constant_omega::QueueSolution::a_const)
        .def("phi_minus0", &constant_omega::QueueSolution::phi_minus0)
        .def("phi_plus0", &constant_omega::QueueSolution::phi_plus0)
        .def("phi_minus",
             [](const constant_omega::QueueSolution& s, std::complex<double> z) {
                 return s.phi_minus(z);
             })
        .def("phi_plus",
             [](const constant_omega::QueueSolution& s, std::complex<double> z) {
                 return s.phi_plus(z);
             })
        .def("v_minus", &constant_omega::QueueSolution::v_minus)
        .def("v_plus", &constant_omega::QueueSolution::v_plus);

    m.def("solve_queue", &constant_omega::solve_queue, py::arg("lambda_"), py::arg("omega"),
          py::arg("dist"));

    py::class_<constant_omega::InsuranceSolution>(m, "InsuranceSolution")
        .def_readonly("lambda_", &constant_omega::InsuranceSolution::lambda)
        .def_readonly("c", &constant_omega::InsuranceSolution::c)
        .def_readonly("omega", &constant_omega::InsuranceSolution::omega)
        .def_readonly("rho", &constant_omega::InsuranceSolution::rho)
        .def_readonly("delta", &constant_omega::InsuranceSolution::delta)
        .def_readonly("Z", &constant_omega::InsuranceSolution::z_const)
        .def("u_minus", &constant_omega::InsuranceSolution::u_minus)
        .def("u_tilde_minus", &constant_omega::InsuranceSolution::u_tilde_minus)
        .def("u_plus", &constant_omega::InsuranceSolution::u_plus)
        .def("u_plus0", &constant_omega::InsuranceSolution::u_plus0)
        .def("psi_minus0", &constant_omega::InsuranceSolution::psi_minus0);

    m.def("solve_insurance", &constant_omega::solve_insurance, py::arg("lambda_"), py::arg("c"),
          py::arg("omega"), py::arg("claims"));
    m.def("ai_survival_hat", &constant_omega::ai_survival_hat);
    m.def("classical_ruin_exponential", &constant_omega::classical_ruin_exponential);

    py::class_<linear_omega::LinearExpModel>(m, "LinearExpModel")
        .def_readonly("lambda_", &linear_omega::LinearExpModel::lambda)
        .def_readonly("mu", &linear_omega::LinearExpModel::mu)
        .def_readonly("a", &linear_omega::LinearExpModel::a)
        .def_readonly("sigma", &linear_omega::LinearExpModel::sigma)
        .def_readonly("K", &linear_omega::LinearExpModel::K)
        .def_readonly("integer_sigma", &linear_omega::LinearExpModel::integer_sigma);

    m.def("classify", &linear_omega::classify, py::arg("lambda_"), py::arg("mu"), py::arg("a"));

    py::class_<linear_omega::SeriesSolution>(m, "SeriesSolution")
        .def_readonly("model", &linear_omega::SeriesSolution::model)
        .def_readonly("c", &linear_omega::SeriesSolution::c)
        .def_readonly("r1", &linear_omega::SeriesSolution::r1)
        .def_readonly("EI", &linear_omega::SeriesSolution::mean_inventory)
        .def_readonly("warnings", &linear_omega::SeriesSolution::warnings)
        .def("phi_minus0", &linear_omega::SeriesSolution::phi_minus0)
        .def("phi_minus", [](const linear_omega::SeriesSolution& s, double z) {
            return s.phi_minus(z);
        })
        .def("v_minus_integer", &linear_omega::SeriesSolution::v_minus_integer)
        .def("v_plus", &linear_omega::SeriesSolution::v_plus);

    m.def("series_solve", &linear_omega::series_solve);

    py::class_<linear_omega::DirectSolution>(m, "DirectSolution")
        .def_readonly("C", &linear_omega::DirectSolution::C)
        .def_readonly("k_form", &linear_omega::DirectSolution::k_form)
        .def_property_readonly("route",
                               [](const linear_omega::DirectSolution& d) {
                                   return linear_omega::DirectSolution::route_name(d.route);
                               })
        .def("r1", &linear_omega::DirectSolution::r1)
        .def("v_minus", &linear_omega::DirectSolution::v_minus)
        .def("v_plus", &linear_omega::DirectSolution::v_plus);

    m.def("direct_solve", &linear_omega::direct_solve);

    m.def("hermite", &num::hermite);
    m.def("kummer_m", &num::kummer_m);
    m.def("kummer_u", &num::kummer_u);

    py::class_<sim::SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("seed", &sim::SimConfig::seed)
        .def_readwrite("replications", &sim::SimConfig::replications)
        .def_readwrite("time_total", &sim::SimConfig::time_total)
        .def_readwrite("burn_in", &sim::SimConfig::burn_in)
        .def_readwrite("bin_width", &sim::SimConfig::bin_width)
        .def_readwrite("x_max_neg", &sim::SimConfig::x_max_neg)
        .def_readwrite("x_max_pos", &sim::SimConfig::x_max_pos)
        .def_readwrite("paths", &sim::SimConfig::paths)
        .def_readwrite("threshold_m", &sim::SimConfig::threshold_m)
        .def_readwrite("eps_tail", &sim::SimConfig::eps_tail)
        .def_readwrite("threads", &sim::SimConfig::threads);

    py::class_<sim::DensityEstimate>(m, "DensityEstimate")
        .def_readonly("phi_minus_hat", &sim::DensityEstimate::phi_minus_hat)
        .def_readonly("phi_minus_se", &sim::DensityEstimate::phi_minus_se)
        .def_readonly("phi_plus_hat", &sim::DensityEstimate::phi_plus_hat)
        .def_readonly("mean_inventory_hat", &sim::DensityEstimate::mean_inventory_hat)
        .def_readonly("mean_inventory_se", &sim::DensityEstimate::mean_inventory_se)
        .def_readonly("clearing_rate_hat", &sim::DensityEstimate::clearing_rate_hat)
        .def_readonly("observed_time", &sim::DensityEstimate::observed_time)
        .def_readonly("n_arrivals", &sim::DensityEstimate::n_arrivals)
        .def_readonly("n_clearings", &sim::DensityEstimate::n_clearings)
        .def("bins", [](const sim::DensityEstimate& e) {
            py::list out;
            for (const auto& b : e.bins)
                out.append(py::make_tuple(b.left, b.right, b.density, b.se));
            return out;
        });

    m.def(
        "simulate_workload",
        [](double lambda, const ServiceDistribution& dist, const std::string& kind, double value,
           const sim::SimConfig& cfg) {
            return sim::simulate_workload(lambda, dist, clearing_from_args(kind, value), cfg);
        },
        py::arg("lambda_"), py::arg("dist"), py::arg("omega_kind"), py::arg("omega_value"),
        py::arg("config"), py::call_guard<py::gil_scoped_release>());

    py::class_<sim::BankruptcyEstimate>(m, "BankruptcyEstimate")
        .def_readonly("p_bankrupt", &sim::BankruptcyEstimate::p_bankrupt)
        .def_readonly("se", &sim::BankruptcyEstimate::se)
        .def_readonly("p_ever_negative", &sim::BankruptcyEstimate::p_ever_negative)
        .def_readonly("se_negative", &sim::BankruptcyEstimate::se_negative)
        .def_readonly("eps_tail", &sim::BankruptcyEstimate::eps_tail)
        .def_readonly("threshold_m", &sim::BankruptcyEstimate::threshold_m)
        .def_readonly("n_paths", &sim::BankruptcyEstimate::n_paths);

    m.def(
        "simulate_bankruptcy",
        [](double lambda, double c, const std::string& kind, double value,
           const ServiceDistribution& claims, double x0, const sim::SimConfig& cfg) {
            return sim::simulate_bankruptcy(lambda, c, clearing_from_args(kind, value), claims,
                                            x0, cfg);
        },
        py::arg("lambda_"), py::arg("c"), py::arg("omega_kind"), py::arg("omega_value"),
        py::arg("claims"), py::arg("x0"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
}
