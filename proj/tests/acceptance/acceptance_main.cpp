// Acceptance gate: every release-blocking behavior, one verdict line each.
// Exit status is the number of failed checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pcia/evaluate.hpp"
#include "pcia/experiment.hpp"
#include "pcia/feasibility.hpp"
#include "pcia/rng.hpp"
#include "pcia/serialize.hpp"
#include "pcia/stage2.hpp"

using namespace pcia;

namespace {

int g_failed = 0;

void report(int idx, const char* title, bool pass, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", idx, title,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int pick_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return std::max(1, std::min(8, static_cast<int>(hw)));
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

FreedomConstraintInstance random_small_instance(std::uint64_t seed) {
  Rng rng(seed);
  FreedomConstraintInstance inst;
  inst.K = 1 + static_cast<int>(rng.uniform_int(4));
  inst.v_t.resize(inst.K);
  inst.v_r.resize(inst.K);
  inst.c.assign(inst.K, std::vector<long long>(inst.K, 0));
  for (int n = 0; n < inst.K; ++n) {
    inst.v_t[n] = static_cast<long long>(rng.uniform_int(5));
    inst.v_r[n] = static_cast<long long>(rng.uniform_int(5));
    for (int m = 0; m < inst.K; ++m)
      if (m != n) inst.c[m][n] = static_cast<long long>(rng.uniform_int(5));
  }
  return inst;
}

void criterion_checker_agreement() {
  const auto t0 = Clock::now();
  int disagreements = 0;
  for (int i = 0; i < 1000; ++i) {
    const FreedomConstraintInstance inst =
        random_small_instance(derive_seed(1111, i));
    const bool a = brute_force_proper(inst).proper;
    const bool b = tree_check(inst).proper;
    const bool c = flow_check(inst).proper;
    if (a != b || a != c) ++disagreements;
  }
  const double wall = seconds_since(t0);
  report(1, "checker agreement", disagreements == 0 && wall <= 10.0,
         "1000 instances, " + std::to_string(disagreements) +
             " disagreements, " + fmt(wall) + " s (limit 10)");
}

FreedomConstraintInstance random_dense_instance(int K, std::uint64_t seed) {
  Rng rng(seed);
  FreedomConstraintInstance inst;
  inst.K = K;
  inst.v_t.resize(K);
  inst.v_r.resize(K);
  inst.c.assign(K, std::vector<long long>(K, 0));
  const std::uint64_t v_hi = 5ull * (K - 1) / 2;
  for (int n = 0; n < K; ++n) {
    inst.v_t[n] = static_cast<long long>(rng.uniform_int(v_hi + 1));
    inst.v_r[n] = static_cast<long long>(rng.uniform_int(v_hi + 1));
    for (int m = 0; m < K; ++m)
      if (m != n) inst.c[m][n] = 1 + static_cast<long long>(rng.uniform_int(4));
  }
  return inst;
}

void criterion_step_scaling() {
  const std::vector<int> sizes = {5, 10, 20, 40, 80};
  std::vector<double> ratio;
  for (const int K : sizes) {
    double steps = 0;
    for (int i = 0; i < 10; ++i)
      steps += static_cast<double>(
          tree_check(random_dense_instance(K, derive_seed(4242, K * 1000 + i)))
              .steps);
    ratio.push_back(steps / 10.0 / (static_cast<double>(K) * K * K));
  }
  bool cubic = true;
  std::ostringstream detail;
  detail << "steps/K^3 vs K=5:";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double rel = ratio[i] / ratio[0];
    cubic = cubic && rel <= 3.0;
    detail << ' ' << fmt(rel);
  }
  report(2, "cubic step scaling", cubic, detail.str() + " (each <= 3)");
}

void criterion_golden_network() {
  const NetworkInstance net = gen_demo_fivepair(2);
  Stage1Stats stats;
  const StreamAssignment sa =
      stage1_run(net.topology, net.channels, std::vector<int>(5, 1),
                 DimRule::kArgmax, &stats);

  const std::vector<int> want = {1, 1, 0, 1, 1};
  bool ok = sa.d == want && stats.removals.size() == 1 &&
            stats.removals[0].chosen == 2;
  std::vector<long long> gain(5, -1);
  if (ok)
    for (const auto& [node, g] : stats.removals[0].gains) gain[node] = g;
  ok = ok && gain == std::vector<long long>({3, 3, 6, 3, 3});

  Stage2Options opts;
  opts.seed = 7;
  const auto [design, leak] = stage2_run(net.channels, sa, opts);
  ok = ok && leak.total <= 1e-10 && leak.direct_rank_ok;

  // slope of the aligned design across the high-power window
  double sum40 = 0, sum60 = 0;
  for (const double r : per_pair_rate(net.channels, sa, design, 1e4)) sum40 += r;
  for (const double r : per_pair_rate(net.channels, sa, design, 1e6)) sum60 += r;
  const double slope = estimate_dof({40, 60}, {sum40, sum60});
  int streams = 0;
  for (const int d : sa.d) streams += d;
  ok = ok && streams == 4 && std::abs(slope - 4.0) <= 0.1;

  // best fully connected stream total at the same sizes, by brute force
  const NetworkInstance full = gen_fully_connected(5, 2, 2, 3);
  int best_full = 0;
  for (int mask = 0; mask < 32; ++mask) {
    StreamAssignment cand;
    cand.d.assign(5, 0);
    cand.s_t.assign(5, Subspace::zero(2));
    cand.s_r.assign(5, Subspace::zero(2));
    int total = 0;
    for (int n = 0; n < 5; ++n)
      if (mask >> n & 1) {
        cand.d[n] = 1;
        cand.s_t[n] = Subspace::full(2);
        cand.s_r[n] = Subspace::full(2);
        ++total;
      }
    if (brute_force_proper(count_instance(full.topology, cand)).proper)
      best_full = std::max(best_full, total);
  }
  ok = ok && best_full == 3;

  report(3, "golden five-pair plan", ok,
         "streams {1,1,0,1,1}, removal gains {3,3,6,3,3}, leakage " +
             fmt(leak.total) + ", slope " + fmt(slope) +
             ", fully connected best " + std::to_string(best_full));
}

void criterion_symmetric_targets() {
  struct Case {
    int k, nt, nr, l, e1, e2, d_f;
  };
  const std::vector<Case> cases = {
      {6, 4, 4, 1, 4, 2, 2}, {8, 4, 4, 1, 4, 0, 4}, {5, 3, 3, 2, 3, 1, 1}};
  bool ok = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Case& c = cases[i];
    const TheoremReport rep = verify_theorem(c.k, c.nt, c.nr, c.l, c.e1, c.e2,
                                             20, derive_seed(777, i));
    ok = ok && rep.d_f == c.d_f && rep.successes >= 18;
    if (i) detail << ", ";
    detail << "d_f " << rep.d_f << " hit " << rep.successes << "/20";
  }
  report(4, "banded stream targets", ok, detail.str() + " (need >= 18)");
}

StreamAssignment full_streams(const NetworkInstance& net, int d) {
  StreamAssignment sa;
  const int K = net.channels.K;
  sa.d.assign(K, d);
  sa.s_t.assign(K, Subspace::full(net.channels.Nt));
  sa.s_r.assign(K, Subspace::full(net.channels.Nr));
  return sa;
}

void criterion_classical_threshold() {
  const NetworkInstance three = gen_fully_connected(3, 2, 2, 11);
  const StreamAssignment sa3 = full_streams(three, 1);
  const FreedomConstraintInstance i3 = count_instance(three.topology, sa3);
  bool ok = brute_force_proper(i3).proper && tree_check(i3).proper &&
            flow_check(i3).proper;

  Stage2Options opts;
  opts.seed = 5;
  opts.max_iters = 20000;
  const auto [design, leak] = stage2_run(three.channels, sa3, opts);
  ok = ok && leak.total <= 1e-8;

  const NetworkInstance four = gen_fully_connected(4, 2, 2, 12);
  const FreedomConstraintInstance i4 =
      count_instance(four.topology, full_streams(four, 1));
  ok = ok && !brute_force_proper(i4).proper && !tree_check(i4).proper &&
       !flow_check(i4).proper;
  const double bound = symmetric_dof_bound(4, 2, 2, 2, 2, 2);
  ok = ok && std::abs(bound - 0.8) < 1e-12;

  report(5, "classical threshold", ok,
         "K=3 proper with leakage " + fmt(leak.total) +
             ", K=4 improper by all checkers, bound " + fmt(bound));
}

void criterion_monotone_descent() {
  int bad = 0;
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const NetworkInstance net =
        i % 2 == 0 ? gen_random_geometric(5, 4, 4, 10.0, 6.0, 2.0,
                                          derive_seed(888, i))
                   : gen_symmetric(6, 4, 4, 1, 4, 2, derive_seed(888, i));
    const StreamAssignment sa =
        stage1_run(net.topology, net.channels, std::vector<int>(net.channels.K, 2));
    if (!tree_check(count_instance(net.topology, sa)).proper) {
      ++bad;  // the planner must only emit proper systems
      continue;
    }
    Stage2Options opts;
    opts.max_iters = 300;
    opts.seed = derive_seed(999, i);
    std::vector<double> trace;
    stage2_run(net.channels, sa, opts, &trace);
    ++checked;
    for (std::size_t t = 1; t < trace.size(); ++t)
      if (trace[t] > trace[t - 1] + 1e-12 * std::max(1.0, trace[t - 1])) {
        ++bad;
        break;
      }
  }
  report(6, "monotone leakage descent", bad == 0,
         std::to_string(checked) + " proper instances, " +
             std::to_string(bad) + " monotonicity violations");
}

ExperimentConfig geometric_config(double l_km, double s_km,
                                  const std::string& snr,
                                  const std::string& schemes) {
  std::ostringstream toml;
  toml << "model = \"geometric\"\nk = 8\nnt = 6\nnr = 6\n"
       << "area_km = 10.0\nl_km = " << l_km << "\ns_km = " << s_km
       << "\nd_max = 2\nsnr_db = " << snr << "\ndrops = 20\nseed = 20250815\n"
       << "schemes = " << schemes << "\n";
  return parse_config(toml.str(), "toml");
}

void criterion_saturation() {
  const auto t0 = Clock::now();
  const ExperimentConfig cfg = geometric_config(
      5.0, 3.0, "[0, 10, 20, 30, 40, 50, 60]", "[\"proposed\", \"bl1\", \"bl5\"]");
  const ExperimentResult res = run_experiment(cfg, pick_jobs());
  const double wall = seconds_since(t0);

  const double sp = estimate_dof(
      cfg.snr_db, mean_sum_rate(res, Scheme::kProposed, cfg.snr_db));
  const double s1 =
      estimate_dof(cfg.snr_db, mean_sum_rate(res, Scheme::kBl1, cfg.snr_db));
  const double s5 =
      estimate_dof(cfg.snr_db, mean_sum_rate(res, Scheme::kBl5, cfg.snr_db));

  const bool ok =
      sp >= s1 && sp >= s5 && s1 <= 0.2 * sp && wall <= 600.0;
  report(7, "slope ordering and saturation", ok,
         "slopes proposed " + fmt(sp) + ", full-space " + fmt(s1) +
             ", random " + fmt(s5) + ", " + fmt(wall) + " s (limit 600)");
}

std::vector<double> per_drop_sums(const ExperimentResult& res) {
  std::vector<double> sums;
  for (const ResultRecord& r : res.records) sums.push_back(r.sum_rate);
  return sums;
}

bool endpoint_decrease(const std::vector<std::vector<double>>& by_point,
                       std::ostringstream& detail) {
  const std::vector<double>& first = by_point.front();
  const std::vector<double>& last = by_point.back();
  int dec = 0, inc = 0;
  double mean_first = 0, mean_last = 0;
  for (std::size_t d = 0; d < first.size(); ++d) {
    if (last[d] < first[d]) ++dec;
    if (last[d] > first[d]) ++inc;
    mean_first += first[d];
    mean_last += last[d];
  }
  mean_first /= first.size();
  mean_last /= last.size();
  const double p = sign_test_p(dec, inc);
  detail << "means";
  for (const auto& point : by_point) {
    double m = 0;
    for (const double x : point) m += x;
    detail << ' ' << fmt(m / point.size());
  }
  detail << ", endpoint " << dec << "v" << inc << " p " << fmt(p);
  return mean_last < mean_first && p < 0.05;
}

void criterion_connectivity_sweeps() {
  std::ostringstream detail;
  std::vector<std::vector<double>> l_points;
  for (const double l_km : {2.0, 4.0, 6.0, 8.0})
    l_points.push_back(per_drop_sums(run_experiment(
        geometric_config(l_km, 3.0, "[40]", "[\"proposed\"]"), pick_jobs())));
  detail << "radius sweep ";
  const bool l_ok = endpoint_decrease(l_points, detail);

  std::vector<std::vector<double>> s_points;
  for (const double s_km : {1.0, 2.0, 3.0, 4.0})
    s_points.push_back(per_drop_sums(run_experiment(
        geometric_config(8.0, s_km, "[40]", "[\"proposed\"]"), pick_jobs())));
  detail << "; scatter sweep ";
  const bool s_ok = endpoint_decrease(s_points, detail);

  report(8, "denser coupling lowers throughput", l_ok && s_ok, detail.str());
}

}  // namespace

int main() {
  criterion_checker_agreement();
  criterion_step_scaling();
  criterion_golden_network();
  criterion_symmetric_targets();
  criterion_classical_threshold();
  criterion_monotone_descent();
  criterion_saturation();
  criterion_connectivity_sweeps();
  std::printf("%s: %d of 8 checks failed\n", g_failed ? "RED" : "GREEN",
              g_failed);
  return g_failed;
}
