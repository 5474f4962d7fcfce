#include "pcia/evaluate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcia {

namespace {

double logdet_hermitian(const CMatrix& a) {
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("logdet: matrix not positive definite");
  const CMatrix l = llt.matrixL();
  return 2.0 * l.diagonal().real().array().log().sum();
}

std::vector<double> rates_impl(const ChannelRealization& ch,
                               const StreamAssignment& sa,
                               const TransceiverDesign& de, double p,
                               bool with_interference) {
  const int K = ch.K;
  std::vector<double> rates(K, 0.0);
  for (int m = 0; m < K; ++m) {
    if (sa.d[m] <= 0) continue;
    const Index dm = sa.d[m];
    CMatrix cov = CMatrix::Identity(ch.Nr, ch.Nr);
    if (with_interference) {
      for (int n = 0; n < K; ++n) {
        if (n == m || sa.d[n] <= 0) continue;
        const CMatrix hv = ch.H(m, n) * de.v[n];
        cov += p * ch.power[n] / sa.d[n] * (hv * hv.adjoint());
      }
    }
    const CMatrix q = de.u[m] * cov * de.u[m].adjoint();
    const CMatrix g = de.u[m] * ch.H(m, m) * de.v[m];
    const CMatrix s = q + p * ch.power[m] / dm * (g * g.adjoint());
    rates[m] = (logdet_hermitian(s) - logdet_hermitian(q)) / std::log(2.0);
  }
  return rates;
}

}  // namespace

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kProposed: return "proposed";
    case Scheme::kBl1: return "bl1";
    case Scheme::kBl2: return "bl2";
    case Scheme::kBl3: return "bl3";
    case Scheme::kBl4: return "bl4";
    case Scheme::kBl5: return "bl5";
  }
  throw std::invalid_argument("scheme_name: unknown scheme");
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "proposed") return Scheme::kProposed;
  if (name == "bl1") return Scheme::kBl1;
  if (name == "bl2") return Scheme::kBl2;
  if (name == "bl3") return Scheme::kBl3;
  if (name == "bl4") return Scheme::kBl4;
  if (name == "bl5") return Scheme::kBl5;
  throw std::invalid_argument("unknown scheme name: " + name);
}

std::vector<double> per_pair_rate(const ChannelRealization& ch,
                                  const StreamAssignment& sa,
                                  const TransceiverDesign& de, double p) {
  return rates_impl(ch, sa, de, p, true);
}

std::vector<double> scheme_rates(const ChannelRealization& ch,
                                 const SchemeDesign& sd, double p) {
  std::vector<double> rates =
      rates_impl(ch, sd.assignment, sd.design, p, !sd.interference_free);
  for (double& r : rates) r *= sd.share;
  return rates;
}

namespace {

SchemeDesign planned_scheme(const NetworkInstance& net,
                            const std::vector<int>& d_max,
                            const Stage2Options& opts, DimRule rule) {
  SchemeDesign sd;
  sd.assignment = stage1_run(net.topology, net.channels, d_max, rule);
  auto [de, rep] = stage2_run(net.channels, sd.assignment, opts);
  sd.design = std::move(de);
  sd.leakage = std::move(rep);
  return sd;
}

StreamAssignment full_space_assignment(const NetworkInstance& net,
                                       const std::vector<int>& d_max) {
  const auto& ch = net.channels;
  StreamAssignment sa;
  sa.d = init_streams(ch, d_max);
  sa.s_t.resize(ch.K);
  sa.s_r.resize(ch.K);
  for (int n = 0; n < ch.K; ++n) {
    sa.s_t[n] = sa.d[n] > 0 ? Subspace::full(ch.Nt) : Subspace::zero(ch.Nt);
    sa.s_r[n] = sa.d[n] > 0 ? Subspace::full(ch.Nr) : Subspace::zero(ch.Nr);
  }
  return sa;
}

SchemeDesign orthogonal_share_scheme(const NetworkInstance& net,
                                     const std::vector<int>& d_max) {
  const auto& ch = net.channels;
  SchemeDesign sd;
  auto& sa = sd.assignment;
  sa.d = init_streams(ch, d_max);
  sa.s_t.resize(ch.K);
  sa.s_r.resize(ch.K);
  sd.design.v.resize(ch.K);
  sd.design.u.resize(ch.K);
  int active = 0;
  for (int n = 0; n < ch.K; ++n) {
    if (sa.d[n] <= 0) {
      sa.s_t[n] = Subspace::zero(ch.Nt);
      sa.s_r[n] = Subspace::zero(ch.Nr);
      sd.design.v[n] = CMatrix(ch.Nt, 0);
      sd.design.u[n] = CMatrix(0, ch.Nr);
      continue;
    }
    ++active;
    Eigen::JacobiSVD<CMatrix> svd(ch.H(n, n),
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
    sd.design.v[n] = svd.matrixV().leftCols(sa.d[n]);
    sd.design.u[n] = svd.matrixU().leftCols(sa.d[n]).adjoint();
    sa.s_t[n] = Subspace::from_orthonormal(sd.design.v[n]);
    sa.s_r[n] = Subspace::from_orthonormal(svd.matrixU().leftCols(sa.d[n]));
  }
  sd.share = active > 0 ? 1.0 / active : 1.0;
  sd.interference_free = true;
  // Slots never overlap, so the operating leakage is zero; keep only the
  // direct-link rank check from the physical report.
  sd.leakage.per_link.assign(ch.K, std::vector<double>(ch.K, 0.0));
  sd.leakage.direct_rank_ok = leakage(ch, sa, sd.design).direct_rank_ok;
  return sd;
}

SchemeDesign random_scheme(const NetworkInstance& net,
                           const std::vector<int>& d_max,
                           const Stage2Options& opts) {
  const auto& ch = net.channels;
  SchemeDesign sd;
  sd.assignment = full_space_assignment(net, d_max);
  const auto& sa = sd.assignment;
  Rng rng(opts.seed);
  sd.design.v.resize(ch.K);
  sd.design.u.resize(ch.K);
  for (int n = 0; n < ch.K; ++n)
    sd.design.v[n] = sa.d[n] > 0 ? random_orthonormal(ch.Nt, sa.d[n], rng)
                                 : CMatrix(ch.Nt, 0);
  for (int m = 0; m < ch.K; ++m)
    sd.design.u[m] =
        sa.d[m] > 0 ? CMatrix(random_orthonormal(ch.Nr, sa.d[m], rng).adjoint())
                    : CMatrix(0, ch.Nr);
  sd.leakage = leakage(ch, sa, sd.design);
  return sd;
}

}  // namespace

SchemeDesign run_scheme(Scheme scheme, const NetworkInstance& net,
                        const std::vector<int>& d_max,
                        const Stage2Options& opts) {
  switch (scheme) {
    case Scheme::kProposed:
      return planned_scheme(net, d_max, opts, DimRule::kArgmax);
    case Scheme::kBl1: {
      SchemeDesign sd;
      sd.assignment = full_space_assignment(net, d_max);
      auto [de, rep] = stage2_run(net.channels, sd.assignment, opts);
      sd.design = std::move(de);
      sd.leakage = std::move(rep);
      return sd;
    }
    case Scheme::kBl2:
      return planned_scheme(net, d_max, opts, DimRule::kForceMax);
    case Scheme::kBl3:
      return planned_scheme(net, d_max, opts, DimRule::kForceMin);
    case Scheme::kBl4:
      return orthogonal_share_scheme(net, d_max);
    case Scheme::kBl5:
      return random_scheme(net, d_max, opts);
  }
  throw std::invalid_argument("run_scheme: unknown scheme");
}

SchemeDesign run_baseline(int index, const NetworkInstance& net,
                          const std::vector<int>& d_max,
                          const Stage2Options& opts) {
  switch (index) {
    case 1: return run_scheme(Scheme::kBl1, net, d_max, opts);
    case 2: return run_scheme(Scheme::kBl2, net, d_max, opts);
    case 3: return run_scheme(Scheme::kBl3, net, d_max, opts);
    case 4: return run_scheme(Scheme::kBl4, net, d_max, opts);
    case 5: return run_scheme(Scheme::kBl5, net, d_max, opts);
    default:
      throw std::invalid_argument("run_baseline: index must be 1..5");
  }
}

double estimate_dof(const std::vector<double>& snr_db,
                    const std::vector<double>& mean_sum_rate, double lo_db,
                    double hi_db) {
  if (snr_db.size() != mean_sum_rate.size() || snr_db.size() < 2)
    throw std::invalid_argument("estimate_dof: need two aligned grid points");
  auto closest = [&](double target) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < snr_db.size(); ++i)
      if (std::abs(snr_db[i] - target) < std::abs(snr_db[best] - target))
        best = i;
    return best;
  };
  const std::size_t lo = closest(lo_db);
  const std::size_t hi = closest(hi_db);
  if (lo == hi)
    throw std::invalid_argument("estimate_dof: slope window collapsed");
  const double per_double = 10.0 * std::log10(2.0);  // dB per rate doubling
  return (mean_sum_rate[hi] - mean_sum_rate[lo]) /
         ((snr_db[hi] - snr_db[lo]) / per_double);
}

double symmetric_dof_bound(int K, Index Nt, Index Nr, int L, int E1, int E2) {
  if (K < 1 || Nt < 1 || Nr < 1 || L < 0 || E1 < 1 || E1 > Nt || E2 < 0 ||
      E2 > Nt)
    throw std::invalid_argument("symmetric_dof_bound: bad parameters");
  const double coupled = std::min<double>(K - 1, 2 * L);
  const double direct = std::min<double>(E1, Nr);
  const double a = (E1 + direct) / (coupled + 2.0);
  const double b = direct / (coupled * E2 / static_cast<double>(Nt) + 1.0);
  return std::max(a, b);
}

TheoremReport verify_theorem(int K, Index Nt, Index Nr, int L, int E1, int E2,
                             int trials, std::uint64_t seed) {
  TheoremReport rep;
  rep.bound = symmetric_dof_bound(K, Nt, Nr, L, E1, E2);
  rep.d_f = std::min<int>(static_cast<int>(std::floor(rep.bound + 1e-12)),
                          std::min<int>(E1, static_cast<int>(Nr)));
  rep.trials = trials;
  const std::vector<int> d_max(K, rep.d_f);
  for (int t = 0; t < trials; ++t) {
    const NetworkInstance net =
        gen_symmetric(K, Nt, Nr, L, E1, E2, derive_seed(seed, t));
    const StreamAssignment sa =
        stage1_run(net.topology, net.channels, d_max);
    bool ok = true;
    for (int n = 0; n < K; ++n) ok = ok && sa.d[n] == rep.d_f;
    if (ok) ++rep.successes;
  }
  rep.success_rate = trials > 0 ? static_cast<double>(rep.successes) / trials : 0;
  return rep;
}

}  // namespace pcia
