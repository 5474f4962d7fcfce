#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pcia/config.hpp"

namespace pcia {

struct ResultRecord {
  int drop = 0;
  Scheme scheme = Scheme::kProposed;
  double snr_db = 0;
  double sum_rate = 0;
  std::vector<double> pair_rates;
  int streams_total = 0;
  double leakage_total = 0;
  double wall_ms = 0;  // design time of the (drop, scheme) cell
};

struct ExperimentResult {
  std::vector<ResultRecord> records;  // ordered by (drop, scheme, snr)
  double wall_ms_generate = 0;
  double wall_ms_design = 0;
  double wall_ms_evaluate = 0;
  double wall_ms_total = 0;
};

/// Runs every (drop, scheme) cell, drop-parallel over `jobs` threads.
/// Designs are computed once per cell and evaluated across the SNR grid;
/// record order and content are independent of the thread schedule.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs,
                                std::ostream* log = nullptr);

/// Deterministic CSV (fixed column order, %.12g floats): one row per
/// (drop, scheme, snr) with the per-pair rates semicolon-joined.
std::string results_to_csv(const ExperimentResult& res);

/// Per-scheme aggregates over drops plus the high-SNR slope estimate.
std::string results_to_summary_json(const ExperimentConfig& cfg,
                                    const ExperimentResult& res);

/// Run provenance: tool version, config hash, seed, wall times, output list.
std::string manifest_json(const ExperimentConfig& cfg,
                          const ExperimentResult& res, int jobs,
                          const std::vector<std::string>& outputs);

/// Mean over drops of the per-drop sum rate for one scheme and SNR.
std::vector<double> mean_sum_rate(const ExperimentResult& res, Scheme scheme,
                                  const std::vector<double>& snr_db);

/// One-sided sign test p-value for "paired differences are decreases":
/// P(X >= decreases) for X ~ Binomial(decreases + increases, 1/2).
double sign_test_p(int decreases, int increases);

}  // namespace pcia
