#pragma once

#include <string>
#include <vector>

#include "pcia/stage2.hpp"

namespace pcia {

enum class Scheme {
  kProposed,  // two-stage pipeline
  kBl1,       // leakage minimization in the full spaces at d_max, no planning
  kBl2,       // planning with the dimension forced maximal
  kBl3,       // planning with the dimension forced minimal
  kBl4,       // orthogonal sharing on the direct links' top singular modes
  kBl5,       // seeded random transceivers, no adaptation
};

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct SchemeDesign {
  StreamAssignment assignment;
  TransceiverDesign design;
  LeakageReport leakage;
  double share = 1.0;             // time share (< 1 only for kBl4)
  bool interference_free = false; // rate evaluation skips cross links
};

/// Per-pair achievable rates at common transmit power p with unit-variance
/// noise: log2 det(I + (p/d_m) G_m G_m^H Q_m^{-1}) with G_m the effective
/// direct link and Q_m the decorrelated noise-plus-interference covariance.
/// Inactive pairs rate 0.
std::vector<double> per_pair_rate(const ChannelRealization& ch,
                                  const StreamAssignment& sa,
                                  const TransceiverDesign& de, double p);

/// Rates of a scheme design at power p, honoring the time share and the
/// interference-free flag.
std::vector<double> scheme_rates(const ChannelRealization& ch,
                                 const SchemeDesign& sd, double p);

/// Builds the baseline or proposed design for one drop.
SchemeDesign run_scheme(Scheme scheme, const NetworkInstance& net,
                        const std::vector<int>& d_max,
                        const Stage2Options& opts);

/// run_scheme for baseline index 1..5.
SchemeDesign run_baseline(int index, const NetworkInstance& net,
                          const std::vector<int>& d_max,
                          const Stage2Options& opts);

/// High-SNR slope of the mean sum rate in bits/s/Hz per 3.01 dB, taken
/// between the grid points closest to lo_db and hi_db.
double estimate_dof(const std::vector<double>& snr_db,
                    const std::vector<double>& mean_sum_rate,
                    double lo_db = 40.0, double hi_db = 60.0);

/// Stream-count upper bound of the banded circulant model:
/// max((E1 + min(E1, Nr)) / (min(K-1, 2L) + 2),
///     min(E1, Nr) / (min(K-1, 2L) E2 / Nt + 1)).
double symmetric_dof_bound(int K, Index Nt, Index Nr, int L, int E1, int E2);

struct TheoremReport {
  double bound = 0;
  int d_f = 0;        // floor of the bound, capped at min(E1, Nr)
  int trials = 0;
  int successes = 0;  // planner kept d_f streams on every pair
  double success_rate = 0;
};

/// Checks that the planner achieves the predicted symmetric stream count.
TheoremReport verify_theorem(int K, Index Nt, Index Nr, int L, int E1, int E2,
                             int trials, std::uint64_t seed);

}  // namespace pcia
