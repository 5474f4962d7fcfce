#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pcia/stage1.hpp"

namespace pcia {

/// Final transceivers: v[n] is Nt x d_n with orthonormal columns inside
/// s_t[n]; u[m] is d_m x Nr with orthonormal rows inside s_r[m].
struct TransceiverDesign {
  std::vector<CMatrix> v;
  std::vector<CMatrix> u;
};

struct LeakageReport {
  double total = 0;
  std::vector<std::vector<double>> per_link;  // [m][n], row = receiver
  int iterations = 0;
  bool converged = false;
  /// Every active direct link kept rank d_m through the final transceivers.
  bool direct_rank_ok = true;
};

struct Stage2Options {
  double eps = 1e-10;   // relative change threshold on the leakage total
  int max_iters = 5000;
  std::uint64_t seed = 0;
};

/// Residual interference power: per_link[m][n] =
/// (P_n / d_n) * ||u_m H_mn v_n||_F^2 over active cross links.
LeakageReport leakage(const ChannelRealization& ch, const StreamAssignment& sa,
                      const TransceiverDesign& de);

/// One decorrelator half-step in projected coordinates. eff[m*K+n] is
/// s_r[m]^H H_mn s_t[n]; vp[n] (rank(s_t) x d_n) and up[m] (d_m x rank(s_r))
/// hold the projected transceivers. Rows of up[m] become the conjugated
/// eigenvectors of the d_m smallest eigenvalues of the interference
/// covariance seen by receiver m.
void update_decorrelators(const std::vector<CMatrix>& eff,
                          const std::vector<double>& power,
                          const std::vector<int>& d,
                          const std::vector<CMatrix>& vp,
                          std::vector<CMatrix>& up);

/// Mirrored precoder half-step on the reversed links.
void update_precoders(const std::vector<CMatrix>& eff,
                      const std::vector<double>& power,
                      const std::vector<int>& d,
                      const std::vector<CMatrix>& up,
                      std::vector<CMatrix>& vp);

/// Alternating leakage minimization inside the assigned subspaces from a
/// seeded random orthonormal start. Converges when the per-iteration total
/// changes by at most eps * max(1, previous). half_step_trace, when given,
/// receives the initial total followed by the total after every half-step;
/// the sequence is non-increasing.
std::pair<TransceiverDesign, LeakageReport> stage2_run(
    const ChannelRealization& ch, const StreamAssignment& sa,
    const Stage2Options& opts = {}, std::vector<double>* half_step_trace = nullptr);

}  // namespace pcia
