#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pcia/config.hpp"
#include "pcia/experiment.hpp"
#include "pcia/serialize.hpp"

namespace py = pybind11;
using namespace pcia;

namespace {

StreamAssignment plan(const NetworkInstance& net, const std::vector<int>& d_max,
                      const std::string& rule) {
  DimRule r = DimRule::kArgmax;
  if (rule == "force_max")
    r = DimRule::kForceMax;
  else if (rule == "force_min")
    r = DimRule::kForceMin;
  else if (rule != "argmax")
    throw std::invalid_argument("rule must be argmax, force_max or force_min");
  return stage1_run(net.topology, net.channels, d_max, r);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-stage interference mitigation for partially connected "
            "MIMO networks";
  m.attr("__version__") = PCIA_VERSION;

  py::class_<Subspace>(m, "Subspace")
      .def_static("zero", &Subspace::zero, py::arg("ambient"))
      .def_static("full", &Subspace::full, py::arg("ambient"))
      .def_static("from_span", &Subspace::from_span, py::arg("candidate"),
                  py::arg("tol") = kRankTol)
      .def_property_readonly("ambient", &Subspace::ambient)
      .def_property_readonly("rank", &Subspace::rank)
      .def_property_readonly("basis", &Subspace::basis)
      .def("__repr__", [](const Subspace& s) {
        return "<Subspace rank " + std::to_string(s.rank()) + " of C^" +
               std::to_string(s.ambient()) + ">";
      });
  m.def("null_space", &null_space, py::arg("m"), py::arg("tol") = kRankTol);
  m.def("left_null_space", &left_null_space, py::arg("m"),
        py::arg("tol") = kRankTol);
  m.def("intersect", &intersect, py::arg("a"), py::arg("b"),
        py::arg("tol") = kRankTol);
  m.def("complement", &complement, py::arg("a"));
  m.def("dim_meet", &dim_meet, py::arg("a"), py::arg("b"),
        py::arg("tol") = kRankTol);
  m.def("dim_outside", &dim_outside, py::arg("a"), py::arg("b"),
        py::arg("tol") = kRankTol);
  m.def("principal_angles", &principal_angles, py::arg("a"), py::arg("b"));
  m.def("spans_equal", &spans_equal, py::arg("a"), py::arg("b"),
        py::arg("angle_tol") = 1e-7);
  m.def("contains", &contains, py::arg("outer"), py::arg("inner"),
        py::arg("tol") = kResidualTol);

  m.def("steering_vector", &steering_vector, py::arg("n"), py::arg("omega"));
  m.def("dft_steering_basis", &dft_steering_basis, py::arg("n"));
  m.def("angular_support", &angular_support, py::arg("theta"),
        py::arg("dist_km"), py::arg("scatter_km"), py::arg("nt"));

  py::class_<NetworkInstance>(m, "NetworkInstance")
      .def_property_readonly(
          "k", [](const NetworkInstance& n) { return n.channels.K; })
      .def_property_readonly(
          "nt", [](const NetworkInstance& n) { return n.channels.Nt; })
      .def_property_readonly(
          "nr", [](const NetworkInstance& n) { return n.channels.Nr; })
      .def_property_readonly(
          "power", [](const NetworkInstance& n) { return n.channels.power; })
      .def("h",
           [](const NetworkInstance& net, int m, int n) {
             return net.channels.H(m, n);
           },
           py::arg("m"), py::arg("n"))
      .def("connected",
           [](const NetworkInstance& net, int m, int n) {
             return net.topology.connected(m, n);
           },
           py::arg("m"), py::arg("n"))
      .def("tx_null",
           [](const NetworkInstance& net, int m, int n) {
             return net.topology.tx(m, n);
           },
           py::arg("m"), py::arg("n"))
      .def("rx_null",
           [](const NetworkInstance& net, int m, int n) {
             return net.topology.rx(m, n);
           },
           py::arg("m"), py::arg("n"))
      .def("to_json",
           [](const NetworkInstance& net) { return network_to_json(net).dump(); });

  m.def("gen_symmetric", &gen_symmetric, py::arg("k"), py::arg("nt"),
        py::arg("nr"), py::arg("l"), py::arg("e1"), py::arg("e2"),
        py::arg("seed"));
  m.def("gen_random_geometric", &gen_random_geometric, py::arg("k"),
        py::arg("nt"), py::arg("nr"), py::arg("area_km"), py::arg("l_km"),
        py::arg("s_km"), py::arg("seed"));
  m.def("gen_unequal", &gen_unequal, py::arg("k"), py::arg("nt"),
        py::arg("nr"), py::arg("seed"));
  m.def("gen_fully_connected", &gen_fully_connected, py::arg("k"),
        py::arg("nt"), py::arg("nr"), py::arg("seed"));
  m.def("gen_demo_fivepair", &gen_demo_fivepair, py::arg("seed"));

  py::class_<FreedomConstraintInstance>(m, "FreedomConstraintInstance")
      .def(py::init([](int k, std::vector<long long> v_t,
                       std::vector<long long> v_r,
                       std::vector<std::vector<long long>> c) {
             FreedomConstraintInstance inst{k, std::move(v_t), std::move(v_r),
                                            std::move(c)};
             validate_instance(inst);
             return inst;
           }),
           py::arg("k"), py::arg("v_t"), py::arg("v_r"), py::arg("c"))
      .def_readonly("k", &FreedomConstraintInstance::K)
      .def_readonly("v_t", &FreedomConstraintInstance::v_t)
      .def_readonly("v_r", &FreedomConstraintInstance::v_r)
      .def_readonly("c", &FreedomConstraintInstance::c);

  py::class_<ConstraintAssignment>(m, "ConstraintAssignment")
      .def_readonly("c_t", &ConstraintAssignment::c_t)
      .def_readonly("c_r", &ConstraintAssignment::c_r);

  py::class_<FeasibilityVerdict>(m, "FeasibilityVerdict")
      .def_readonly("proper", &FeasibilityVerdict::proper)
      .def_readonly("assignment", &FeasibilityVerdict::assignment)
      .def_readonly("witness", &FeasibilityVerdict::witness)
      .def_readonly("steps", &FeasibilityVerdict::steps)
      .def("__repr__", [](const FeasibilityVerdict& v) {
        return std::string("<FeasibilityVerdict ") +
               (v.proper ? "proper" : "improper") + ">";
      });
  m.def("brute_force_proper", &brute_force_proper, py::arg("inst"));
  m.def("tree_check",
        [](const FreedomConstraintInstance& inst) { return tree_check(inst); },
        py::arg("inst"));
  m.def("flow_check", &flow_check, py::arg("inst"));

  py::class_<StreamAssignment>(m, "StreamAssignment")
      .def_readonly("d", &StreamAssignment::d)
      .def_readonly("s_t", &StreamAssignment::s_t)
      .def_readonly("s_r", &StreamAssignment::s_r);
  m.def("stage1_run", &plan, py::arg("net"), py::arg("d_max"),
        py::arg("rule") = "argmax");
  m.def("count_instance",
        [](const NetworkInstance& net, const StreamAssignment& sa) {
          return count_instance(net.topology, sa);
        },
        py::arg("net"), py::arg("sa"));

  py::class_<Stage2Options>(m, "Stage2Options")
      .def(py::init<>())
      .def_readwrite("eps", &Stage2Options::eps)
      .def_readwrite("max_iters", &Stage2Options::max_iters)
      .def_readwrite("seed", &Stage2Options::seed);
  py::class_<TransceiverDesign>(m, "TransceiverDesign")
      .def_readonly("v", &TransceiverDesign::v)
      .def_readonly("u", &TransceiverDesign::u);
  py::class_<LeakageReport>(m, "LeakageReport")
      .def_readonly("total", &LeakageReport::total)
      .def_readonly("per_link", &LeakageReport::per_link)
      .def_readonly("iterations", &LeakageReport::iterations)
      .def_readonly("converged", &LeakageReport::converged)
      .def_readonly("direct_rank_ok", &LeakageReport::direct_rank_ok);
  m.def("stage2_run",
        [](const NetworkInstance& net, const StreamAssignment& sa,
           const Stage2Options& opts) {
          return stage2_run(net.channels, sa, opts);
        },
        py::arg("net"), py::arg("sa"), py::arg("opts") = Stage2Options{});
  m.def("leakage",
        [](const NetworkInstance& net, const StreamAssignment& sa,
           const TransceiverDesign& de) {
          return leakage(net.channels, sa, de);
        },
        py::arg("net"), py::arg("sa"), py::arg("design"));

  py::enum_<Scheme>(m, "Scheme")
      .value("proposed", Scheme::kProposed)
      .value("bl1", Scheme::kBl1)
      .value("bl2", Scheme::kBl2)
      .value("bl3", Scheme::kBl3)
      .value("bl4", Scheme::kBl4)
      .value("bl5", Scheme::kBl5);
  m.def("scheme_name", &scheme_name, py::arg("scheme"));
  m.def("scheme_from_name", &scheme_from_name, py::arg("name"));

  py::class_<SchemeDesign>(m, "SchemeDesign")
      .def_readonly("assignment", &SchemeDesign::assignment)
      .def_readonly("design", &SchemeDesign::design)
      .def_readonly("leakage", &SchemeDesign::leakage)
      .def_readonly("share", &SchemeDesign::share)
      .def_readonly("interference_free", &SchemeDesign::interference_free);
  m.def("run_scheme", &run_scheme, py::arg("scheme"), py::arg("net"),
        py::arg("d_max"), py::arg("opts") = Stage2Options{});
  m.def("run_baseline", &run_baseline, py::arg("index"), py::arg("net"),
        py::arg("d_max"), py::arg("opts") = Stage2Options{});
  m.def("per_pair_rate",
        [](const NetworkInstance& net, const StreamAssignment& sa,
           const TransceiverDesign& de, double p) {
          return per_pair_rate(net.channels, sa, de, p);
        },
        py::arg("net"), py::arg("sa"), py::arg("design"), py::arg("p"));
  m.def("scheme_rates",
        [](const NetworkInstance& net, const SchemeDesign& sd, double p) {
          return scheme_rates(net.channels, sd, p);
        },
        py::arg("net"), py::arg("sd"), py::arg("p"));
  m.def("estimate_dof", &estimate_dof, py::arg("snr_db"),
        py::arg("mean_sum_rate"), py::arg("lo_db") = 40.0,
        py::arg("hi_db") = 60.0);
  m.def("symmetric_dof_bound", &symmetric_dof_bound, py::arg("k"),
        py::arg("nt"), py::arg("nr"), py::arg("l"), py::arg("e1"),
        py::arg("e2"));

  py::class_<TheoremReport>(m, "TheoremReport")
      .def_readonly("bound", &TheoremReport::bound)
      .def_readonly("d_f", &TheoremReport::d_f)
      .def_readonly("trials", &TheoremReport::trials)
      .def_readonly("successes", &TheoremReport::successes)
      .def_readonly("success_rate", &TheoremReport::success_rate);
  m.def("verify_theorem", &verify_theorem, py::arg("k"), py::arg("nt"),
        py::arg("nr"), py::arg("l"), py::arg("e1"), py::arg("e2"),
        py::arg("trials"), py::arg("seed"));

  py::register_exception<ConfigError>(m, "ConfigError");
  py::class_<Stage2Config>(m, "Stage2Config")
      .def_readwrite("eps", &Stage2Config::eps)
      .def_readwrite("max_iters", &Stage2Config::max_iters);
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readwrite("model", &ExperimentConfig::model)
      .def_readwrite("k", &ExperimentConfig::k)
      .def_readwrite("nt", &ExperimentConfig::nt)
      .def_readwrite("nr", &ExperimentConfig::nr)
      .def_readwrite("l", &ExperimentConfig::l)
      .def_readwrite("e1", &ExperimentConfig::e1)
      .def_readwrite("e2", &ExperimentConfig::e2)
      .def_readwrite("area_km", &ExperimentConfig::area_km)
      .def_readwrite("l_km", &ExperimentConfig::l_km)
      .def_readwrite("s_km", &ExperimentConfig::s_km)
      .def_readwrite("d_max", &ExperimentConfig::d_max)
      .def_readwrite("snr_db", &ExperimentConfig::snr_db)
      .def_readwrite("drops", &ExperimentConfig::drops)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("schemes", &ExperimentConfig::schemes)
      .def_readwrite("dof_lo_db", &ExperimentConfig::dof_lo_db)
      .def_readwrite("dof_hi_db", &ExperimentConfig::dof_hi_db)
      .def_readwrite("stage2", &ExperimentConfig::stage2);
  m.def("load_config", &load_config, py::arg("path"));
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("format"));
  m.def("validate_config", &validate_config, py::arg("cfg"));
  m.def("config_hash", &config_hash, py::arg("cfg"));
  m.def("generate_instance", &generate_instance, py::arg("cfg"),
        py::arg("drop"));

  py::class_<ResultRecord>(m, "ResultRecord")
      .def_readonly("drop", &ResultRecord::drop)
      .def_readonly("scheme", &ResultRecord::scheme)
      .def_readonly("snr_db", &ResultRecord::snr_db)
      .def_readonly("sum_rate", &ResultRecord::sum_rate)
      .def_readonly("pair_rates", &ResultRecord::pair_rates)
      .def_readonly("streams_total", &ResultRecord::streams_total)
      .def_readonly("leakage_total", &ResultRecord::leakage_total)
      .def_readonly("wall_ms", &ResultRecord::wall_ms);
  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("records", &ExperimentResult::records)
      .def_readonly("wall_ms_generate", &ExperimentResult::wall_ms_generate)
      .def_readonly("wall_ms_design", &ExperimentResult::wall_ms_design)
      .def_readonly("wall_ms_evaluate", &ExperimentResult::wall_ms_evaluate)
      .def_readonly("wall_ms_total", &ExperimentResult::wall_ms_total);
  m.def("run_experiment",
        [](const ExperimentConfig& cfg, int jobs) {
          py::gil_scoped_release release;
          return run_experiment(cfg, jobs);
        },
        py::arg("cfg"), py::arg("jobs") = 1);
  m.def("results_to_csv", &results_to_csv, py::arg("res"));
  m.def("results_to_summary_json", &results_to_summary_json, py::arg("cfg"),
        py::arg("res"));
  m.def("manifest_json", &manifest_json, py::arg("cfg"), py::arg("res"),
        py::arg("jobs"), py::arg("outputs"));
  m.def("mean_sum_rate", &mean_sum_rate, py::arg("res"), py::arg("scheme"),
        py::arg("snr_db"));
  m.def("sign_test_p", &sign_test_p, py::arg("decreases"),
        py::arg("increases"));
  m.def("derive_seed", &derive_seed, py::arg("root"), py::arg("index"));
}
