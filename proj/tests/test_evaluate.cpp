#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "pcia/evaluate.hpp"
#include "pcia/feasibility.hpp"
#include "pcia/rng.hpp"

using namespace pcia;

namespace {

// Straight determinant evaluation of the same rate, no LLT shortcut.
double det_rate(const ChannelRealization& ch, const StreamAssignment& sa,
                const TransceiverDesign& de, int m, double p,
                bool with_interference) {
  if (sa.d[m] <= 0) return 0.0;
  CMatrix cov = CMatrix::Identity(ch.Nr, ch.Nr);
  if (with_interference)
    for (int n = 0; n < ch.K; ++n) {
      if (n == m || sa.d[n] <= 0) continue;
      CMatrix hv = ch.H(m, n) * de.v[n];
      cov += p * ch.power[n] / sa.d[n] * (hv * hv.adjoint());
    }
  CMatrix q = de.u[m] * cov * de.u[m].adjoint();
  CMatrix g = de.u[m] * ch.H(m, m) * de.v[m];
  CMatrix s = q + p * ch.power[m] / sa.d[m] * (g * g.adjoint());
  return std::log2(std::abs(s.determinant())) -
         std::log2(std::abs(q.determinant()));
}

}  // namespace

TEST_CASE("scheme names round trip") {
  for (Scheme s : {Scheme::kProposed, Scheme::kBl1, Scheme::kBl2, Scheme::kBl3,
                   Scheme::kBl4, Scheme::kBl5})
    CHECK(scheme_from_name(scheme_name(s)) == s);
  CHECK_THROWS_AS(scheme_from_name("bl9"), std::invalid_argument);
}

TEST_CASE("rate evaluation matches the determinant form") {
  NetworkInstance net = gen_unequal(3, 3, 2, 42);
  Stage2Options opts;
  opts.seed = 4;
  SchemeDesign sd = run_scheme(Scheme::kBl5, net, std::vector<int>(3, 1), opts);
  for (double p : {1.0, 100.0, 1e4}) {
    std::vector<double> rates =
        per_pair_rate(net.channels, sd.assignment, sd.design, p);
    for (int m = 0; m < 3; ++m)
      CHECK(rates[m] ==
            doctest::Approx(det_rate(net.channels, sd.assignment, sd.design, m,
                                     p, true))
                .epsilon(1e-9));
  }
}

TEST_CASE("orthogonal sharing rides the top singular modes") {
  NetworkInstance net = gen_unequal(3, 4, 4, 17);
  Stage2Options opts;
  SchemeDesign sd = run_scheme(Scheme::kBl4, net, std::vector<int>(3, 2), opts);

  CHECK(sd.interference_free);
  CHECK(sd.share == doctest::Approx(1.0 / 3.0));
  CHECK(sd.leakage.total == 0.0);

  for (int m = 0; m < 3; ++m) {
    Eigen::JacobiSVD<CMatrix> svd(net.channels.H(m, m));
    const CMatrix g = sd.design.u[m] * net.channels.H(m, m) * sd.design.v[m];
    // effective link is diagonal with the two leading singular values
    CHECK(std::abs(g(0, 0)) == doctest::Approx(svd.singularValues()(0)));
    CHECK(std::abs(g(1, 1)) == doctest::Approx(svd.singularValues()(1)));
    CHECK(std::abs(g(0, 1)) < 1e-10);
    CHECK(std::abs(g(1, 0)) < 1e-10);
  }

  // the reported rate is the time-shared interference-free rate
  const double p = 50.0;
  std::vector<double> rates = scheme_rates(net.channels, sd, p);
  for (int m = 0; m < 3; ++m)
    CHECK(rates[m] ==
          doctest::Approx((1.0 / 3.0) * det_rate(net.channels, sd.assignment,
                                                 sd.design, m, p, false))
              .epsilon(1e-9));
}

TEST_CASE("planned baselines stay proper") {
  NetworkInstance net = gen_random_geometric(6, 4, 4, 10.0, 6.0, 2.0, 12);
  Stage2Options opts;
  opts.seed = 3;
  for (int idx : {2, 3}) {
    SchemeDesign sd = run_baseline(idx, net, std::vector<int>(6, 2), opts);
    CHECK(tree_check(count_instance(net.topology, sd.assignment)).proper);
  }
  CHECK_THROWS_AS(run_baseline(0, net, std::vector<int>(6, 2), opts),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_baseline(6, net, std::vector<int>(6, 2), opts),
                  std::invalid_argument);
}

TEST_CASE("random transceivers leak but keep their shape") {
  NetworkInstance net = gen_random_geometric(5, 4, 4, 10.0, 9.0, 3.0, 21);
  Stage2Options opts;
  opts.seed = 11;
  SchemeDesign sd = run_scheme(Scheme::kBl5, net, std::vector<int>(5, 2), opts);
  CHECK(sd.leakage.total > 1e-6);  // no adaptation, interference survives
  for (int n = 0; n < 5; ++n) {
    if (sd.assignment.d[n] == 0) continue;
    const CMatrix& v = sd.design.v[n];
    CHECK((v.adjoint() * v -
           CMatrix::Identity(sd.assignment.d[n], sd.assignment.d[n]))
              .norm() < 1e-10);
  }
}

TEST_CASE("slope estimation on a synthetic ramp") {
  const double step = 10.0 * std::log10(2.0);
  std::vector<double> snr = {40, 60};
  std::vector<double> rates = {10.0, 10.0 + 2.0 * (20.0 / step)};
  CHECK(estimate_dof(snr, rates) == doctest::Approx(2.0).epsilon(1e-12));

  // closest grid points are used when the window is not exactly on the grid
  std::vector<double> snr2 = {0, 35, 55};
  std::vector<double> rates2 = {0.0, 7.0, 7.0 + 3.0 * (20.0 / step)};
  CHECK(estimate_dof(snr2, rates2, 40, 60) == doctest::Approx(3.0));

  const std::vector<double> tight_grid = {0, 10};
  const std::vector<double> tight_rates = {1.0, 2.0};
  CHECK_THROWS_AS(estimate_dof(tight_grid, tight_rates, 40, 60),
                  std::invalid_argument);
}

TEST_CASE("banded stream bound arithmetic") {
  CHECK(symmetric_dof_bound(6, 4, 4, 1, 4, 2) == doctest::Approx(2.0));
  CHECK(symmetric_dof_bound(8, 4, 4, 1, 4, 0) == doctest::Approx(4.0));
  CHECK(symmetric_dof_bound(5, 3, 3, 2, 3, 1) == doctest::Approx(9.0 / 7.0));
  // fully connected classical threshold: (2+2)/(K+1)
  CHECK(symmetric_dof_bound(4, 2, 2, 2, 2, 2) == doctest::Approx(0.8));
  CHECK_THROWS_AS(symmetric_dof_bound(0, 4, 4, 1, 4, 2), std::invalid_argument);
  CHECK_THROWS_AS(symmetric_dof_bound(6, 4, 4, 1, 5, 2), std::invalid_argument);
}

TEST_CASE("theorem verification smoke run") {
  TheoremReport rep = verify_theorem(5, 3, 3, 2, 3, 1, 5, 2025);
  CHECK(rep.d_f == 1);
  CHECK(rep.bound == doctest::Approx(9.0 / 7.0));
  CHECK(rep.trials == 5);
  CHECK(rep.successes >= 4);
  CHECK(rep.success_rate == doctest::Approx(rep.successes / 5.0));
}

TEST_CASE("proposed scheme aligns a structured network") {
  NetworkInstance net = gen_demo_fivepair(2);
  Stage2Options opts;
  opts.seed = 9;
  SchemeDesign sd =
      run_scheme(Scheme::kProposed, net, std::vector<int>(5, 1), opts);
  int total = 0;
  for (int d : sd.assignment.d) total += d;
  CHECK(total == 4);
  CHECK(sd.leakage.total <= 1e-9);
  CHECK(sd.leakage.direct_rank_ok);
}
