// Python bindings for the supchain core: metric structures, chaining bound,
// process samplers, and the Monte Carlo front ends.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <vector>

#include "supchain/chaining.hpp"
#include "supchain/config.hpp"
#include "supchain/metric.hpp"
#include "supchain/montecarlo.hpp"
#include "supchain/processes.hpp"
#include "supchain/report.hpp"
#include "supchain/rng.hpp"

namespace py = pybind11;
using namespace supchain;

namespace {

PartitionFamily make_family(const IndexSpace& space, int n_max, double t0) {
  PartitionOptions options;
  options.t0 = t0;
  return PartitionFamily(space, n_max, options);
}

PathSample py_indicator_path(const IndicatorModel& model, const std::vector<double>& grid,
                             std::uint64_t seed, std::uint64_t replicate_index) {
  return indicator_path(model, std::span<const double>(grid), seed, replicate_index);
}

PathSample py_cpp_path(const CppModel& model, const std::vector<double>& grid,
                       std::uint64_t seed, std::uint64_t replicate_index) {
  return cpp_path(model, std::span<const double>(grid), seed, replicate_index);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Chaining tail bounds and exact process simulators";

  m.attr("DEFAULT_SEED") = py::int_(kDefaultSeed);

  py::class_<IndexSpace>(m, "IndexSpace")
      .def_static("unit_interval", &IndexSpace::unit_interval)
      .def_static("interval", &IndexSpace::interval, py::arg("lo"), py::arg("hi"))
      .def_static("single_point", &IndexSpace::single_point, py::arg("declared_diameter"))
      .def_property_readonly("lo", &IndexSpace::lo)
      .def_property_readonly("hi", &IndexSpace::hi)
      .def_property_readonly("diameter", &IndexSpace::diameter)
      .def("distance", &IndexSpace::distance, py::arg("s"), py::arg("t"))
      .def("covering_number", &IndexSpace::covering_number, py::arg("radius"));

  m.def("largest_trivial_level", &largest_trivial_level, py::arg("space"));
  m.def("entropy_integral", &entropy_integral, py::arg("space"), py::arg("gamma"),
        py::arg("squared") = false);

  py::class_<PartitionFamily>(m, "PartitionFamily")
      .def(py::init(&make_family), py::arg("space"), py::arg("n_max"), py::arg("t0") = 0.5)
      .def_property_readonly("n0", &PartitionFamily::n0)
      .def_property_readonly("n_max", &PartitionFamily::n_max)
      .def_property_readonly("t0", &PartitionFamily::t0)
      .def("net_size", &PartitionFamily::net_size, py::arg("n"))
      .def("pair_count", &PartitionFamily::pair_count, py::arg("n"))
      .def("materialized", &PartitionFamily::materialized, py::arg("n"))
      .def("net", [](const PartitionFamily& f, int n) { return f.level(n).net; }, py::arg("n"))
      .def("pairs", [](const PartitionFamily& f, int n) { return f.level(n).h_pairs; },
           py::arg("n"))
      .def("designated_point", &PartitionFamily::designated_point, py::arg("n"), py::arg("t"));

  py::class_<ChainingParams>(m, "ChainingParams")
      .def(py::init([](double alpha, double beta, double gamma, double delta) {
             return ChainingParams{alpha, beta, gamma, delta};
           }),
           py::arg("alpha") = 1.0, py::arg("beta") = 2.0, py::arg("gamma") = 0.5,
           py::arg("delta") = 0.5)
      .def_readwrite("alpha", &ChainingParams::alpha)
      .def_readwrite("beta", &ChainingParams::beta)
      .def_readwrite("gamma", &ChainingParams::gamma)
      .def_readwrite("delta", &ChainingParams::delta)
      .def("h", &ChainingParams::h)
      .def("validate", &ChainingParams::validate);

  m.def("chaining_weight", &chaining_weight, py::arg("n"), py::arg("params"), py::arg("n0"));

  py::class_<EntropySum>(m, "EntropySum")
      .def_readonly("partial", &EntropySum::partial)
      .def_readonly("tail", &EntropySum::tail)
      .def_readonly("divergent", &EntropySum::divergent)
      .def("value", &EntropySum::value);

  m.def("entropy_sum", &entropy_sum, py::arg("family"), py::arg("gamma"));
  m.def("bound_constant", &bound_constant, py::arg("params"), py::arg("n0"));

  py::class_<TailBoundReport>(m, "TailBoundReport")
      .def_readonly("entropy", &TailBoundReport::entropy)
      .def_readonly("constant", &TailBoundReport::constant)
      .def_readonly("b_eps", &TailBoundReport::b_eps)
      .def_readonly("var_t0", &TailBoundReport::var_t0)
      .def_readonly("delta", &TailBoundReport::delta)
      .def_readonly("chain_raw", &TailBoundReport::chain_raw)
      .def_readonly("chain_bound", &TailBoundReport::chain_bound)
      .def_readonly("center_bound", &TailBoundReport::center_bound)
      .def_readonly("total_bound", &TailBoundReport::total_bound);

  m.def("tail_bound", &tail_bound, py::arg("params"), py::arg("family"), py::arg("b_eps"),
        py::arg("var_t0"));

  py::class_<HypothesisCheck>(m, "HypothesisCheck")
      .def_readonly("name", &HypothesisCheck::name)
      .def_readonly("pass_", &HypothesisCheck::pass)
      .def_readonly("detail", &HypothesisCheck::detail);

  m.def("hypothesis_check", &hypothesis_check, py::arg("params"), py::arg("family"));
  m.def("all_pass", &all_pass, py::arg("checks"));

  py::class_<PathSample>(m, "PathSample")
      .def_readonly("grid", &PathSample::grid)
      .def_readonly("values", &PathSample::values)
      .def_readonly("seed", &PathSample::seed)
      .def_readonly("replicate_index", &PathSample::replicate_index);

  py::class_<IndicatorModel>(m, "IndicatorModel")
      .def(py::init([](double eps) { return IndicatorModel{eps}; }), py::arg("eps") = 0.1)
      .def_readwrite("eps", &IndicatorModel::eps)
      .def("validate", &IndicatorModel::validate)
      .def("b_eps", &IndicatorModel::b_eps)
      .def("var_t0", &IndicatorModel::var_t0, py::arg("t0"))
      .def("value", &IndicatorModel::value, py::arg("t"), py::arg("u"));

  py::class_<IndicatorMoments>(m, "IndicatorMoments")
      .def_readonly("second_moment_s", &IndicatorMoments::second_moment_s)
      .def_readonly("second_moment_t", &IndicatorMoments::second_moment_t)
      .def_readonly("cross_moment", &IndicatorMoments::cross_moment)
      .def_readonly("increment_moment", &IndicatorMoments::increment_moment)
      .def_readonly("increment_bound", &IndicatorMoments::increment_bound);

  m.def("indicator_moments", &indicator_moments, py::arg("model"), py::arg("s"), py::arg("t"));
  m.def("indicator_path", &py_indicator_path, py::arg("model"), py::arg("grid"), py::arg("seed"),
        py::arg("replicate_index") = 0);

  py::class_<PowerLawIntensity>(m, "PowerLawIntensity")
      .def(py::init([](double rho, double c) { return PowerLawIntensity{rho, c}; }),
           py::arg("rho") = 0.5, py::arg("c") = 1.0)
      .def_readwrite("rho", &PowerLawIntensity::rho)
      .def_readwrite("c", &PowerLawIntensity::c)
      .def("validate", &PowerLawIntensity::validate)
      .def("region_mass", &PowerLawIntensity::region_mass, py::arg("tau"), py::arg("eps"))
      .def("second_moment_band", &PowerLawIntensity::second_moment_band, py::arg("lo"),
           py::arg("hi"))
      .def("magnitude_quantile", &PowerLawIntensity::magnitude_quantile, py::arg("q"),
           py::arg("tau"), py::arg("eps"));

  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("linear", &KernelSpec::linear)
      .def_static("sinusoid", &KernelSpec::sinusoid)
      .def_static("hoelder", &KernelSpec::hoelder, py::arg("p"))
      .def_readonly("p", &KernelSpec::p)
      .def_readonly("alpha", &KernelSpec::alpha)
      .def_readonly("c_scale", &KernelSpec::c_scale)
      .def("eval", &KernelSpec::eval, py::arg("t"), py::arg("omega"))
      .def("sup_abs", &KernelSpec::sup_abs)
      .def("mean_square", &KernelSpec::mean_square, py::arg("t"))
      .def("increment_mean_square", &KernelSpec::increment_mean_square, py::arg("s"),
           py::arg("t"))
      .def("name", &KernelSpec::name);

  py::class_<TauPolicy>(m, "TauPolicy")
      .def(py::init<>())
      .def_readwrite("rel_tolerance", &TauPolicy::rel_tolerance)
      .def_readwrite("t0_ref", &TauPolicy::t0_ref)
      .def_readwrite("fixed_tau", &TauPolicy::fixed_tau);

  py::class_<CppModel>(m, "CppModel")
      .def(py::init([](const PowerLawIntensity& intensity, const KernelSpec& kernel, double eps) {
             CppModel model;
             model.intensity = intensity;
             model.kernel = kernel;
             model.eps = eps;
             return model;
           }),
           py::arg("intensity"), py::arg("kernel"), py::arg("eps") = 0.1)
      .def_readwrite("intensity", &CppModel::intensity)
      .def_readwrite("kernel", &CppModel::kernel)
      .def_readwrite("eps", &CppModel::eps)
      .def_readwrite("tau", &CppModel::tau)
      .def("validate", &CppModel::validate)
      .def("with_eps", &CppModel::with_eps, py::arg("eps"))
      .def("b_eps", &CppModel::b_eps)
      .def("var_t0", &CppModel::var_t0, py::arg("t0"))
      .def("truncated_var_t0", &CppModel::truncated_var_t0, py::arg("t0"))
      .def("select_tau", &CppModel::select_tau)
      .def("char_function", &CppModel::char_function, py::arg("t"), py::arg("zeta"));

  m.def("cpp_path", &py_cpp_path, py::arg("model"), py::arg("grid"), py::arg("seed"),
        py::arg("replicate_index") = 0);

  py::class_<KernelAuditReport>(m, "KernelAuditReport")
      .def_readonly("worst_ratio", &KernelAuditReport::worst_ratio)
      .def_readonly("worst_s", &KernelAuditReport::worst_s)
      .def_readonly("worst_t", &KernelAuditReport::worst_t)
      .def_readonly("worst_omega", &KernelAuditReport::worst_omega)
      .def_readonly("samples", &KernelAuditReport::samples)
      .def_readonly("ok", &KernelAuditReport::ok);

  m.def("kernel_hoelder_audit", &kernel_hoelder_audit, py::arg("kernel"), py::arg("samples"),
        py::arg("seed") = kDefaultSeed);

  py::class_<BinomialCI>(m, "BinomialCI")
      .def_readonly("p_hat", &BinomialCI::p_hat)
      .def_readonly("lo", &BinomialCI::lo)
      .def_readonly("hi", &BinomialCI::hi)
      .def_readonly("successes", &BinomialCI::successes)
      .def_readonly("trials", &BinomialCI::trials);

  m.def("wilson_interval", &wilson_interval, py::arg("successes"), py::arg("trials"),
        py::arg("z") = kZ95);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("eps", &SweepRow::eps)
      .def_readonly("b_eps", &SweepRow::b_eps)
      .def_readonly("var_t0", &SweepRow::var_t0)
      .def_readonly("entropy_sum", &SweepRow::entropy_sum)
      .def_readonly("constant", &SweepRow::constant)
      .def_readonly("theory_bound", &SweepRow::theory_bound)
      .def_readonly("theory_bound_raw", &SweepRow::theory_bound_raw)
      .def_readonly("empirical_prob", &SweepRow::empirical_prob)
      .def_readonly("ci_low", &SweepRow::ci_low)
      .def_readonly("ci_high", &SweepRow::ci_high)
      .def_readonly("replicates", &SweepRow::replicates)
      .def_readonly("seed", &SweepRow::seed);

  py::class_<SweepCheck>(m, "SweepCheck")
      .def_readonly("name", &SweepCheck::name)
      .def_readonly("pass_", &SweepCheck::pass)
      .def_readonly("detail", &SweepCheck::detail);

  py::class_<SupExperimentResult>(m, "SupExperimentResult")
      .def_readonly("rows", &SupExperimentResult::rows)
      .def_readonly("checks", &SupExperimentResult::checks)
      .def_readonly("pass_", &SupExperimentResult::pass);

  py::class_<SupEstimate>(m, "SupEstimate")
      .def_readonly("eps", &SupEstimate::eps)
      .def_readonly("threshold", &SupEstimate::threshold)
      .def_readonly("exceed_count", &SupEstimate::exceed_count)
      .def_readonly("ci", &SupEstimate::ci);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readwrite("params", &ExperimentConfig::params)
      .def_readwrite("eps_list", &ExperimentConfig::eps_list)
      .def_readwrite("grid_exponent", &ExperimentConfig::grid_exponent)
      .def_readwrite("replicates", &ExperimentConfig::replicates)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("t0", &ExperimentConfig::t0)
      .def_readwrite("n_max", &ExperimentConfig::n_max)
      .def_readwrite("threads", &ExperimentConfig::threads)
      .def_readwrite("theory", &ExperimentConfig::theory)
      .def("validate", &ExperimentConfig::validate);

  py::class_<LabConfig>(m, "LabConfig")
      .def_readwrite("experiment", &LabConfig::experiment)
      .def_readonly("out_csv", &LabConfig::out_csv)
      .def_readonly("out_json", &LabConfig::out_json);

  m.def("parse_config", [](const std::string& text) { return parse_config_text(text); },
        py::arg("text"), "Parse a key-value experiment config document");
  m.def("load_config", &load_config, py::arg("path"));
  m.def("config_text", &config_to_text, py::arg("config"),
        "Canonical key-value text for a parsed config");

  m.def("run_sweep", [](const LabConfig& config) { return run_sweep(config.experiment); },
        py::arg("config"));
  m.def("estimate_sup_prob",
        [](const LabConfig& config, double eps) { return estimate_sup_prob(config.experiment, eps); },
        py::arg("config"), py::arg("eps"));
  m.def("sweep_csv", &sweep_csv, py::arg("result"));
  m.def("sweep_summary",
        [](const SupExperimentResult& result, const LabConfig& config) {
          PartitionOptions options;
          options.t0 = config.experiment.t0;
          std::vector<HypothesisCheck> hypotheses;
          if (config.experiment.theory) {
            PartitionFamily family(IndexSpace::unit_interval(), config.experiment.n_max, options);
            hypotheses = hypothesis_check(config.experiment.params, family);
          }
          return sweep_summary_json(result, hypotheses, config.experiment);
        },
        py::arg("result"), py::arg("config"), "JSON summary text for a sweep result");

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
