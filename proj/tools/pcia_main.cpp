#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "CLI11.hpp"
#include "json.hpp"

#include "pcia/experiment.hpp"
#include "pcia/serialize.hpp"

#ifndef PCIA_VERSION
#define PCIA_VERSION "0.0.0"
#endif

namespace {

using namespace pcia;

std::string join_set(const std::vector<int>& v) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << v[i];
  }
  out << '}';
  return out.str();
}

void print_verdict(const std::string& name, const FeasibilityVerdict& v,
                   bool with_steps) {
  std::cout << name << ": " << (v.proper ? "proper" : "improper");
  if (with_steps) std::cout << " steps=" << v.steps;
  if (v.witness)
    std::cout << " witness_tx=" << join_set(v.witness->first)
              << " witness_rx=" << join_set(v.witness->second);
  std::cout << '\n';
}

int do_run(const std::string& config_path, const std::string& out_dir,
           std::optional<std::uint64_t> seed_override, int jobs, bool verbose) {
  ExperimentConfig cfg = load_config(config_path);
  if (seed_override) cfg.seed = *seed_override;

  std::filesystem::create_directories(out_dir);
  const ExperimentResult res =
      run_experiment(cfg, jobs, verbose ? &std::cerr : nullptr);

  const auto path = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  write_text_file(path("results.csv"), results_to_csv(res));
  write_text_file(path("summary.json"), results_to_summary_json(cfg, res));
  write_text_file(path("manifest.json"),
                  manifest_json(cfg, res, jobs,
                                {"results.csv", "summary.json",
                                 "manifest.json"}));

  std::cout << "config " << config_path << " hash " << config_hash(cfg)
            << " drops " << cfg.drops << '\n';
  bool has_proposed = false;
  for (const Scheme scheme : cfg.schemes) {
    if (scheme == Scheme::kProposed) has_proposed = true;
    const auto mean = mean_sum_rate(res, scheme, cfg.snr_db);
    std::cout << scheme_name(scheme) << ": sum rate " << mean.back()
              << " bits/s/Hz at " << cfg.snr_db.back() << " dB";
    if (cfg.snr_db.size() >= 2)
      std::cout << ", slope "
                << estimate_dof(cfg.snr_db, mean, cfg.dof_lo_db, cfg.dof_hi_db);
    std::cout << '\n';
  }
  if (has_proposed && cfg.drops >= 1) {
    const NetworkInstance net = generate_instance(cfg, 0);
    const StreamAssignment sa =
        stage1_run(net.topology, net.channels, cfg.d_max);
    std::cout << "planned streams (drop 0):";
    for (const int d : sa.d) std::cout << ' ' << d;
    double leak = 0;
    for (const ResultRecord& r : res.records)
      if (r.drop == 0 && r.scheme == Scheme::kProposed &&
          r.snr_db == cfg.snr_db.front())
        leak = r.leakage_total;
    std::cout << "  residual leakage " << leak << '\n';
  }
  std::cout << "wrote " << path("results.csv") << ", " << path("summary.json")
            << ", " << path("manifest.json") << '\n';
  return 0;
}

int do_dump(const std::string& config_path, const std::string& out_path,
            int drop) {
  const ExperimentConfig cfg = load_config(config_path);
  nlohmann::json j = network_to_json(generate_instance(cfg, drop));
  j["config_hash"] = config_hash(cfg);
  j["drop"] = drop;
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
  return 0;
}

int do_feascheck(const std::string& input_path, bool verbose) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(input_path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("feascheck: invalid json: ") + e.what());
  }
  FreedomConstraintInstance inst;
  try {
    inst = instance_from_json(j);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("feascheck: ") + e.what());
  }

  const FeasibilityVerdict tree =
      tree_check(inst, verbose ? &std::cout : nullptr);
  const FeasibilityVerdict flow = flow_check(inst);
  print_verdict("tree", tree, true);
  print_verdict("flow", flow, false);
  bool agree = tree.proper == flow.proper;
  if (inst.K <= 14) {
    const FeasibilityVerdict brute = brute_force_proper(inst);
    print_verdict("brute", brute, false);
    agree = agree && tree.proper == brute.proper;
  }
  std::cout << "agree: " << (agree ? "yes" : "no") << '\n';
  if (!agree) throw std::runtime_error("feascheck: checkers disagree");
  return 0;
}

// ---- selfcheck ----------------------------------------------------------

bool check_validation_rejects() {
  FreedomConstraintInstance inst;
  inst.K = 2;
  inst.v_t = {1, -1};  // corrupted: negative budget
  inst.v_r = {1, 1};
  inst.c = {{0, 1}, {1, 0}};
  try {
    validate_instance(inst);
  } catch (const std::invalid_argument&) {
    return true;
  }
  return false;
}

bool violates(const FreedomConstraintInstance& inst,
              const std::pair<std::vector<int>, std::vector<int>>& w) {
  long long lhs = 0, rhs = 0;
  for (const int n : w.first) rhs += inst.v_t[n];
  for (const int m : w.second) {
    rhs += inst.v_r[m];
    for (const int n : w.first)
      if (n != m) lhs += inst.c[m][n];
  }
  return lhs > rhs;
}

bool check_checker_agreement() {
  Rng rng(20240816);
  for (int i = 0; i < 200; ++i) {
    const int k = 2 + static_cast<int>(rng.uniform_int(3));
    FreedomConstraintInstance inst;
    inst.K = k;
    inst.v_t.resize(k);
    inst.v_r.resize(k);
    inst.c.assign(k, std::vector<long long>(k, 0));
    for (int n = 0; n < k; ++n) {
      inst.v_t[n] = static_cast<long long>(rng.uniform_int(5));
      inst.v_r[n] = static_cast<long long>(rng.uniform_int(5));
    }
    for (int m = 0; m < k; ++m)
      for (int n = 0; n < k; ++n)
        if (m != n) inst.c[m][n] = static_cast<long long>(rng.uniform_int(4));

    const auto brute = brute_force_proper(inst);
    const auto tree = tree_check(inst);
    const auto flow = flow_check(inst);
    if (brute.proper != tree.proper || brute.proper != flow.proper)
      return false;
    if (tree.proper) {
      const auto& as = *tree.assignment;
      for (int m = 0; m < k; ++m)
        for (int n = 0; n < k; ++n) {
          if (as.c_t[n][m] < 0 || as.c_r[m][n] < 0) return false;
          if (as.c_t[n][m] + as.c_r[m][n] != inst.c[m][n]) return false;
        }
      for (int n = 0; n < k; ++n) {
        long long load = 0;
        for (int m = 0; m < k; ++m) load += as.c_t[n][m];
        if (load > inst.v_t[n]) return false;
      }
      for (int m = 0; m < k; ++m) {
        long long load = 0;
        for (int n = 0; n < k; ++n) load += as.c_r[m][n];
        if (load > inst.v_r[m]) return false;
      }
    } else {
      if (!tree.witness || !violates(inst, *tree.witness)) return false;
      if (!flow.witness || !violates(inst, *flow.witness)) return false;
      if (!brute.witness || !violates(inst, *brute.witness)) return false;
    }
  }
  return true;
}

bool check_golden_fivepair() {
  const NetworkInstance net = gen_demo_fivepair(1);
  const StreamAssignment sa =
      stage1_run(net.topology, net.channels, std::vector<int>(5, 1));
  const std::vector<int> want{1, 1, 0, 1, 1};
  if (sa.d != want) return false;
  Stage2Options opts;
  opts.seed = 7;
  const auto [de, rep] = stage2_run(net.channels, sa, opts);
  return rep.total <= 1e-9 && rep.direct_rank_ok && rep.converged;
}

bool check_angular_support() {
  const std::vector<int> got = angular_support(0.0, 1.0, 0.0, 4);
  return got == std::vector<int>{0, 1, 3};
}

bool check_rate_oracle() {
  const NetworkInstance net = gen_unequal(3, 3, 2, 42);
  Stage2Options opts;
  opts.seed = 5;
  const SchemeDesign sd =
      run_scheme(Scheme::kBl5, net, std::vector<int>(3, 1), opts);
  const double p = 100.0;
  const std::vector<double> rates =
      per_pair_rate(net.channels, sd.assignment, sd.design, p);
  const auto& ch = net.channels;
  for (int m = 0; m < 3; ++m) {
    const Index dm = sd.assignment.d[m];
    if (dm == 0) continue;
    CMatrix cov = CMatrix::Identity(ch.Nr, ch.Nr);
    for (int n = 0; n < 3; ++n) {
      if (n == m || sd.assignment.d[n] == 0) continue;
      const CMatrix hv = ch.H(m, n) * sd.design.v[n];
      cov += p * ch.power[n] / sd.assignment.d[n] * (hv * hv.adjoint());
    }
    const CMatrix q = sd.design.u[m] * cov * sd.design.u[m].adjoint();
    const CMatrix g = sd.design.u[m] * ch.H(m, m) * sd.design.v[m];
    const CMatrix arg = CMatrix::Identity(dm, dm) +
                        p * ch.power[m] / dm * (g * g.adjoint()) * q.inverse();
    const double want = std::log2(std::abs(arg.determinant()));
    if (std::abs(want - rates[m]) > 1e-9 * std::max(1.0, std::abs(want)))
      return false;
  }
  return true;
}

int do_selfcheck() {
  struct Check {
    const char* name;
    bool (*fn)();
  };
  const Check checks[] = {
      {"validation rejects a corrupted instance", &check_validation_rejects},
      {"feasibility checkers agree on 200 instances", &check_checker_agreement},
      {"five-pair planning and alignment", &check_golden_fivepair},
      {"angular support of a broadside link", &check_angular_support},
      {"rate evaluation matches the determinant form", &check_rate_oracle},
  };
  int failures = 0;
  for (const Check& c : checks) {
    const bool ok = c.fn();
    std::cout << (ok ? "ok:   " : "FAIL: ") << c.name << '\n';
    if (!ok) ++failures;
  }
  if (failures) {
    std::cout << failures << " selfcheck(s) failed\n";
    return 2;
  }
  std::cout << "all selfchecks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation toolkit for partially connected interference "
               "channels"};
  app.set_version_flag("--version", PCIA_VERSION);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment from a config");
  std::string run_config, run_out = "out";
  std::optional<std::uint64_t> run_seed;
  int run_jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (run_jobs < 1) run_jobs = 1;
  bool run_verbose = false;
  run->add_option("--config", run_config, "path to a .toml or .json config")
      ->required();
  run->add_option("--out", run_out, "output directory");
  run->add_option("--seed", run_seed, "override the config seed");
  run->add_option("--jobs", run_jobs, "worker threads over drops");
  run->add_flag("--verbose", run_verbose, "log per-drop progress to stderr");

  auto* selfcheck =
      app.add_subcommand("selfcheck", "run the built-in consistency checks");

  auto* dump = app.add_subcommand("dump-channels",
                                  "write one generated drop as json");
  std::string dump_config, dump_out;
  int dump_drop = 0;
  dump->add_option("--config", dump_config, "path to a .toml or .json config")
      ->required();
  dump->add_option("--out", dump_out, "output file (stdout when omitted)");
  dump->add_option("--drop", dump_drop, "drop index");

  auto* feas = app.add_subcommand(
      "feascheck", "run all feasibility checkers on an instance json");
  std::string feas_input;
  bool feas_verbose = false;
  feas->add_option("--input", feas_input, "instance json path")->required();
  feas->add_flag("--verbose", feas_verbose, "print the transfer trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed())
      return do_run(run_config, run_out, run_seed, run_jobs, run_verbose);
    if (selfcheck->parsed()) return do_selfcheck();
    if (dump->parsed()) return do_dump(dump_config, dump_out, dump_drop);
    if (feas->parsed()) return do_feascheck(feas_input, feas_verbose);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
