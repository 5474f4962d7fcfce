#include "pcia/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#ifndef PCIA_VERSION
#define PCIA_VERSION "0.0.0"
#endif

namespace pcia {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string fmt_g(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs,
                                std::ostream* log) {
  validate_config(cfg);
  const int drops = cfg.drops;
  const int ns = static_cast<int>(cfg.schemes.size());
  const int ng = static_cast<int>(cfg.snr_db.size());

  ExperimentResult res;
  res.records.resize(static_cast<std::size_t>(drops) * ns * ng);
  jobs = std::max(1, std::min(jobs, drops));

  std::atomic<int> next{0};
  std::mutex mu;
  const auto t0 = Clock::now();

  auto worker = [&]() {
    while (true) {
      const int drop = next.fetch_add(1);
      if (drop >= drops) return;

      const auto tg = Clock::now();
      const NetworkInstance net = generate_instance(cfg, drop);
      const double gen_ms = ms_since(tg);
      const std::uint64_t drop_seed = derive_seed(cfg.seed, drop);

      double design_ms = 0;
      double eval_ms = 0;
      for (int s = 0; s < ns; ++s) {
        const Scheme scheme = cfg.schemes[s];
        Stage2Options opts;
        opts.eps = cfg.stage2.eps;
        opts.max_iters = cfg.stage2.max_iters;
        opts.seed = derive_seed(drop_seed, 101 + static_cast<int>(scheme));

        const auto td = Clock::now();
        const SchemeDesign sd = run_scheme(scheme, net, cfg.d_max, opts);
        const double cell_ms = ms_since(td);
        design_ms += cell_ms;

        int streams = 0;
        for (const int d : sd.assignment.d) streams += d;

        const auto te = Clock::now();
        for (int g = 0; g < ng; ++g) {
          const double p = std::pow(10.0, cfg.snr_db[g] / 10.0);
          ResultRecord& rec =
              res.records[(static_cast<std::size_t>(drop) * ns + s) * ng + g];
          rec.drop = drop;
          rec.scheme = scheme;
          rec.snr_db = cfg.snr_db[g];
          rec.pair_rates = scheme_rates(net.channels, sd, p);
          rec.sum_rate = 0;
          for (const double r : rec.pair_rates) rec.sum_rate += r;
          rec.streams_total = streams;
          rec.leakage_total = sd.leakage.total;
          rec.wall_ms = cell_ms;
        }
        eval_ms += ms_since(te);
      }

      std::lock_guard<std::mutex> lock(mu);
      res.wall_ms_generate += gen_ms;
      res.wall_ms_design += design_ms;
      res.wall_ms_evaluate += eval_ms;
      if (log) *log << "drop " << drop << " done\n";
    }
  };

  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  res.wall_ms_total = ms_since(t0);
  return res;
}

std::string results_to_csv(const ExperimentResult& res) {
  std::ostringstream out;
  // No timing columns here: rerunning a config must reproduce this file
  // byte for byte (timings live in the manifest).
  out << "drop,scheme,snr_db,sum_rate,streams_total,leakage_total,"
         "pair_rates\n";
  for (const ResultRecord& r : res.records) {
    out << r.drop << ',' << scheme_name(r.scheme) << ',' << fmt_g(r.snr_db)
        << ',' << fmt_g(r.sum_rate) << ',' << r.streams_total << ','
        << fmt_g(r.leakage_total) << ',';
    for (std::size_t i = 0; i < r.pair_rates.size(); ++i) {
      if (i) out << ';';
      out << fmt_g(r.pair_rates[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::vector<double> mean_sum_rate(const ExperimentResult& res, Scheme scheme,
                                  const std::vector<double>& snr_db) {
  std::vector<double> mean(snr_db.size(), 0.0);
  std::vector<int> count(snr_db.size(), 0);
  for (const ResultRecord& r : res.records) {
    if (r.scheme != scheme) continue;
    for (std::size_t g = 0; g < snr_db.size(); ++g)
      if (r.snr_db == snr_db[g]) {
        mean[g] += r.sum_rate;
        ++count[g];
      }
  }
  for (std::size_t g = 0; g < mean.size(); ++g)
    if (count[g] > 0) mean[g] /= count[g];
  return mean;
}

std::string results_to_summary_json(const ExperimentConfig& cfg,
                                    const ExperimentResult& res) {
  json out{{"config_hash", config_hash(cfg)},
           {"model", cfg.model},
           {"k", cfg.k},
           {"drops", cfg.drops},
           {"seed", cfg.seed},
           {"snr_db", cfg.snr_db}};
  json schemes = json::object();
  for (const Scheme scheme : cfg.schemes) {
    const std::vector<double> mean = mean_sum_rate(res, scheme, cfg.snr_db);
    double streams = 0;
    double leak = 0;
    int cells = 0;
    for (const ResultRecord& r : res.records) {
      if (r.scheme != scheme || r.snr_db != cfg.snr_db.front()) continue;
      streams += r.streams_total;
      leak += r.leakage_total;
      ++cells;
    }
    json entry{{"mean_sum_rate", mean},
               {"mean_streams", cells ? streams / cells : 0.0},
               {"mean_leakage", cells ? leak / cells : 0.0}};
    try {
      entry["dof_estimate"] =
          estimate_dof(cfg.snr_db, mean, cfg.dof_lo_db, cfg.dof_hi_db);
    } catch (const std::invalid_argument&) {
      entry["dof_estimate"] = nullptr;
    }
    schemes[scheme_name(scheme)] = std::move(entry);
  }
  out["schemes"] = std::move(schemes);
  return out.dump(2) + "\n";
}

std::string manifest_json(const ExperimentConfig& cfg,
                          const ExperimentResult& res, int jobs,
                          const std::vector<std::string>& outputs) {
  json out{{"tool", "pcia"},
           {"version", PCIA_VERSION},
           {"config_hash", config_hash(cfg)},
           {"seed", cfg.seed},
           {"jobs", jobs},
           {"outputs", outputs},
           {"wall_ms",
            {{"generate", res.wall_ms_generate},
             {"design", res.wall_ms_design},
             {"evaluate", res.wall_ms_evaluate},
             {"total", res.wall_ms_total}}}};
  return out.dump(2) + "\n";
}

double sign_test_p(int decreases, int increases) {
  if (decreases < 0 || increases < 0)
    throw std::invalid_argument("sign_test_p: negative counts");
  const int n = decreases + increases;
  if (n == 0) return 1.0;
  long double comb = 1.0L;  // C(n, 0)
  long double tail = 0.0L;
  for (int k = 0; k <= n; ++k) {
    if (k >= decreases) tail += comb;
    comb = comb * (n - k) / (k + 1);
  }
  return static_cast<double>(tail * std::exp2l(-static_cast<long double>(n)));
}

}  // namespace pcia
