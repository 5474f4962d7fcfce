#include "pcia/stage2.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcia {

namespace {

/// Projected residual interference of the current half-step iterate.
double projected_total(const std::vector<CMatrix>& eff,
                       const std::vector<double>& power,
                       const std::vector<int>& d,
                       const std::vector<CMatrix>& vp,
                       const std::vector<CMatrix>& up) {
  const int K = static_cast<int>(d.size());
  double total = 0;
  for (int m = 0; m < K; ++m) {
    if (d[m] <= 0) continue;
    for (int n = 0; n < K; ++n) {
      if (n == m || d[n] <= 0) continue;
      const CMatrix& e = eff[static_cast<std::size_t>(m) * K + n];
      total += power[n] / d[n] * (up[m] * e * vp[n]).squaredNorm();
    }
  }
  return total;
}

}  // namespace

LeakageReport leakage(const ChannelRealization& ch, const StreamAssignment& sa,
                      const TransceiverDesign& de) {
  const int K = ch.K;
  LeakageReport rep;
  rep.per_link.assign(K, std::vector<double>(K, 0));
  for (int m = 0; m < K; ++m) {
    if (sa.d[m] <= 0) continue;
    for (int n = 0; n < K; ++n) {
      if (n == m || sa.d[n] <= 0) continue;
      const double p =
          ch.power[n] / sa.d[n] * (de.u[m] * ch.H(m, n) * de.v[n]).squaredNorm();
      rep.per_link[m][n] = p;
      rep.total += p;
    }
    if (numerical_rank(de.u[m] * ch.H(m, m) * de.v[m]) != sa.d[m])
      rep.direct_rank_ok = false;
  }
  return rep;
}

void update_decorrelators(const std::vector<CMatrix>& eff,
                          const std::vector<double>& power,
                          const std::vector<int>& d,
                          const std::vector<CMatrix>& vp,
                          std::vector<CMatrix>& up) {
  const int K = static_cast<int>(d.size());
  for (int m = 0; m < K; ++m) {
    if (d[m] <= 0) continue;
    const Index r = up[m].cols();
    CMatrix q = CMatrix::Zero(r, r);
    for (int n = 0; n < K; ++n) {
      if (n == m || d[n] <= 0) continue;
      const CMatrix s = eff[static_cast<std::size_t>(m) * K + n] * vp[n];
      q += power[n] / d[n] * (s * s.adjoint());
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(q);
    up[m] = es.eigenvectors().leftCols(d[m]).adjoint();
  }
}

void update_precoders(const std::vector<CMatrix>& eff,
                      const std::vector<double>& power,
                      const std::vector<int>& d,
                      const std::vector<CMatrix>& up,
                      std::vector<CMatrix>& vp) {
  const int K = static_cast<int>(d.size());
  for (int n = 0; n < K; ++n) {
    if (d[n] <= 0) continue;
    const Index r = vp[n].rows();
    CMatrix q = CMatrix::Zero(r, r);
    for (int m = 0; m < K; ++m) {
      if (m == n || d[m] <= 0) continue;
      const CMatrix s = up[m] * eff[static_cast<std::size_t>(m) * K + n];
      q += power[n] / d[n] * (s.adjoint() * s);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(q);
    vp[n] = es.eigenvectors().leftCols(d[n]);
  }
}

std::pair<TransceiverDesign, LeakageReport> stage2_run(
    const ChannelRealization& ch, const StreamAssignment& sa,
    const Stage2Options& opts, std::vector<double>* half_step_trace) {
  const int K = ch.K;
  if (static_cast<int>(sa.d.size()) != K)
    throw std::invalid_argument("stage2_run: assignment size mismatch");
  for (int n = 0; n < K; ++n)
    if (sa.d[n] > 0 &&
        (sa.s_t[n].rank() < sa.d[n] || sa.s_r[n].rank() < sa.d[n]))
      throw std::invalid_argument(
          "stage2_run: subspace thinner than the stream count");

  std::vector<CMatrix> eff(static_cast<std::size_t>(K) * K);
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n) {
      if (sa.d[m] <= 0 || sa.d[n] <= 0) continue;
      eff[static_cast<std::size_t>(m) * K + n] =
          sa.s_r[m].basis().adjoint() * ch.H(m, n) * sa.s_t[n].basis();
    }

  Rng rng(opts.seed);
  std::vector<CMatrix> vp(K), up(K);
  for (int n = 0; n < K; ++n)
    vp[n] = sa.d[n] > 0 ? random_orthonormal(sa.s_t[n].rank(), sa.d[n], rng)
                        : CMatrix(0, 0);
  for (int m = 0; m < K; ++m)
    up[m] = sa.d[m] > 0
                ? random_orthonormal(sa.s_r[m].rank(), sa.d[m], rng).adjoint()
                : CMatrix(0, 0);

  double prev = projected_total(eff, ch.power, sa.d, vp, up);
  if (half_step_trace) {
    half_step_trace->clear();
    half_step_trace->push_back(prev);
  }

  int iterations = 0;
  bool converged = false;
  for (int it = 1; it <= opts.max_iters; ++it) {
    update_decorrelators(eff, ch.power, sa.d, vp, up);
    if (half_step_trace)
      half_step_trace->push_back(projected_total(eff, ch.power, sa.d, vp, up));
    update_precoders(eff, ch.power, sa.d, up, vp);
    const double total = projected_total(eff, ch.power, sa.d, vp, up);
    if (half_step_trace) half_step_trace->push_back(total);
    iterations = it;
    if (std::abs(total - prev) <= opts.eps * std::max(1.0, prev)) {
      converged = true;
      break;
    }
    prev = total;
  }

  TransceiverDesign de;
  de.v.resize(K);
  de.u.resize(K);
  for (int n = 0; n < K; ++n) {
    de.v[n] = sa.d[n] > 0 ? CMatrix(sa.s_t[n].basis() * vp[n])
                          : CMatrix(ch.Nt, 0);
    de.u[n] = sa.d[n] > 0 ? CMatrix(up[n] * sa.s_r[n].basis().adjoint())
                          : CMatrix(0, ch.Nr);
  }
  LeakageReport rep = leakage(ch, sa, de);
  rep.iterations = iterations;
  rep.converged = converged;
  return {std::move(de), rep};
}

}  // namespace pcia
