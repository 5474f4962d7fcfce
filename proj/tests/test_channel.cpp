#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "pcia/channel.hpp"
#include "pcia/rng.hpp"

using namespace pcia;

namespace {

// Every stored null-space basis must actually annihilate the channel.
void check_topology_residuals(const NetworkInstance& net) {
  const int K = net.topology.K;
  for (int m = 0; m < K; ++m) {
    for (int n = 0; n < K; ++n) {
      const CMatrix& h = net.channels.H(m, n);
      const double scale = std::max(1.0, h.norm());
      const Subspace& tn = net.topology.tx(m, n);
      if (tn.rank() > 0) CHECK((h * tn.basis()).norm() <= 1e-8 * scale);
      const Subspace& rn = net.topology.rx(m, n);
      if (rn.rank() > 0)
        CHECK((rn.basis().adjoint() * h).norm() <= 1e-8 * scale);
    }
  }
}

int connected_cross_links(const NetworkInstance& net) {
  int links = 0;
  for (int m = 0; m < net.topology.K; ++m)
    for (int n = 0; n < net.topology.K; ++n)
      if (m != n && net.topology.connected(m, n)) ++links;
  return links;
}

}  // namespace

TEST_CASE("angular support of a broadside point scatterer") {
  const std::vector<int> expect = {0, 1, 3};
  CHECK(angular_support(0.0, 1.0, 0.0, 4) == expect);
}

TEST_CASE("angular support grows with the scatter radius") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const double theta = rng.uniform(-3.1415, 3.1415);
    const double dist = rng.uniform(0.5, 8.0);
    std::vector<int> prev;
    for (double s : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      std::vector<int> cur = angular_support(theta, dist, s, 6);
      CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      prev = std::move(cur);
    }
    CHECK(static_cast<int>(prev.size()) == 6);  // scatter covers the source
  }
}

TEST_CASE("banded circulant model structure") {
  const int K = 5, L = 1, E1 = 4, E2 = 2;
  NetworkInstance net = gen_symmetric(K, 4, 4, L, E1, E2, 31);
  REQUIRE(net.layout.has_value());
  CHECK(static_cast<int>(net.layout->e1.size()) == E1);

  // offset 2 lies outside the band: link from transmitter 0 into receiver 2
  CHECK(net.channels.H(2, 0).norm() == 0.0);
  CHECK_FALSE(net.topology.connected(2, 0));
  CHECK(net.topology.tx(2, 0).rank() == 4);

  for (int n = 0; n < K; ++n) {
    CHECK(numerical_rank(net.channels.H(n, n)) == std::min(E1, 4));
    CHECK(net.topology.tx(n, n).rank() == 4 - E1);
  }
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n) {
      const int off = std::min((n - m + K) % K, (m - n + K) % K);
      if (m == n || off > L) continue;
      CHECK(numerical_rank(net.channels.H(m, n)) == E2);
      CHECK(net.topology.tx(m, n).rank() == 4 - E2);
    }
  check_topology_residuals(net);
}

TEST_CASE("banded model degenerate corners") {
  NetworkInstance empty = gen_symmetric(4, 4, 4, 1, 4, 0, 5);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      if (m != n) {
        CHECK(empty.channels.H(m, n).norm() == 0.0);
        CHECK(empty.topology.tx(m, n).rank() == 4);
      }

  // full supports and a covering band reduce to the fully connected ensemble
  NetworkInstance full = gen_symmetric(5, 3, 3, 3, 3, 3, 6);
  for (int m = 0; m < 5; ++m)
    for (int n = 0; n < 5; ++n) {
      CHECK(full.topology.tx(m, n).rank() == 0);
      CHECK(full.topology.rx(m, n).rank() == 0);
    }
}

TEST_CASE("geometric model radius and scatter limits") {
  NetworkInstance dead = gen_random_geometric(4, 3, 3, 10.0, 0.0, 3.0, 17);
  REQUIRE(dead.scene.has_value());
  CHECK(dead.scene->degenerate);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) CHECK(dead.channels.H(m, n).norm() == 0.0);

  const double wide = 10.0 * std::sqrt(2.0);
  NetworkInstance full = gen_random_geometric(4, 3, 3, 10.0, wide, wide, 17);
  CHECK_FALSE(full.scene->degenerate);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      CHECK(full.topology.connected(m, n));
      CHECK(full.topology.tx(m, n).rank() == 0);
      CHECK(numerical_rank(full.channels.H(m, n)) == 3);
    }
  check_topology_residuals(full);
}

TEST_CASE("geometric direct links survive realistic radii") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    NetworkInstance net = gen_random_geometric(8, 6, 6, 10.0, 2.0, 1.0, seed);
    CHECK_FALSE(net.scene->degenerate);
    for (int n = 0; n < 8; ++n) {
      CHECK(net.topology.connected(n, n));
      CHECK(numerical_rank(net.channels.H(n, n)) == 6);
    }
    check_topology_residuals(net);
  }
}

TEST_CASE("geometric connectivity grows with the radius") {
  int prev = -1;
  for (double l : {2.0, 4.0, 6.0, 8.0}) {
    int links = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      links += connected_cross_links(
          gen_random_geometric(6, 3, 3, 10.0, l, 2.0, derive_seed(99, seed)));
    CHECK(links >= prev);
    prev = links;
  }
}

TEST_CASE("unequal antenna ensemble null ranks") {
  NetworkInstance net = gen_unequal(3, 4, 2, 23);
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) {
      CHECK(net.topology.tx(m, n).rank() == 2);
      CHECK(net.topology.rx(m, n).rank() == 0);
    }
  check_topology_residuals(net);

  NetworkInstance square = gen_fully_connected(3, 3, 3, 23);
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) CHECK(square.topology.tx(m, n).rank() == 0);
}

TEST_CASE("five-pair demo carries the prescribed null directions") {
  NetworkInstance net = gen_demo_fivepair(1);
  REQUIRE(net.topology.K == 5);
  const double s = 1.0 / std::sqrt(2.0);
  auto dir = [](Complex a, Complex b) {
    CMatrix m(2, 1);
    m << a, b;
    return Subspace::from_span(m);
  };
  // transmitter 0 nulls toward receivers 3 and 4, and so on around the ring
  CHECK(spans_equal(net.topology.tx(3, 0), dir(s, -s)));
  CHECK(spans_equal(net.topology.tx(4, 0), dir(s, -s)));
  CHECK(spans_equal(net.topology.tx(0, 1), dir(1, 0)));
  CHECK(spans_equal(net.topology.tx(4, 1), dir(1, 0)));
  CHECK(spans_equal(net.topology.tx(0, 3), dir(s, s)));
  CHECK(spans_equal(net.topology.tx(1, 3), dir(s, s)));
  CHECK(spans_equal(net.topology.tx(1, 4), dir(0, 1)));
  CHECK(spans_equal(net.topology.tx(3, 4), dir(0, 1)));
  for (int n = 0; n < 5; ++n)
    CHECK(numerical_rank(net.channels.H(n, n)) == 2);
  check_topology_residuals(net);
}

TEST_CASE("generators are deterministic in the seed") {
  NetworkInstance a = gen_random_geometric(5, 4, 4, 10.0, 5.0, 3.0, 77);
  NetworkInstance b = gen_random_geometric(5, 4, 4, 10.0, 5.0, 3.0, 77);
  for (int m = 0; m < 5; ++m)
    for (int n = 0; n < 5; ++n)
      CHECK((a.channels.H(m, n) - b.channels.H(m, n)).norm() == 0.0);

  NetworkInstance c = gen_symmetric(5, 4, 4, 1, 3, 2, 78);
  NetworkInstance d = gen_symmetric(5, 4, 4, 1, 3, 2, 78);
  CHECK(c.layout->e1 == d.layout->e1);
  for (int m = 0; m < 5; ++m)
    for (int n = 0; n < 5; ++n)
      CHECK((c.channels.H(m, n) - d.channels.H(m, n)).norm() == 0.0);
}

TEST_CASE("generator argument validation") {
  CHECK_THROWS_AS(gen_symmetric(3, 4, 4, 1, 5, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_symmetric(0, 4, 4, 1, 2, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_random_geometric(3, 4, 4, -1.0, 5, 3, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(gen_random_geometric(3, 4, 4, 10.0, -5, 3, 1),
                  std::invalid_argument);
}
