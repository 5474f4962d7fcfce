#include "pcia/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pcia {

namespace {

constexpr double kPi = std::numbers::pi;

// Transmitter-to-receiver hop of a geometric pair (km). Short against any
// realistic connection radius, yet positive so a zero radius disconnects
// even the direct links.
constexpr double kPairHopKm = 0.01;

// Signed circular offset of transmitter n relative to receiver m,
// normalized into (-K/2, K/2]; the ambiguous antipodal offset of even K is
// taken positive.
int circular_offset(int n, int m, int K) {
  int d = ((n - m) % K + K) % K;
  if (2 * d > K) d -= K;
  return d;
}

void require_network_dims(int K, Index Nt, Index Nr, const char* who) {
  if (K < 1) throw std::invalid_argument(std::string(who) + ": K must be >= 1");
  if (Nt < 1 || Nr < 1)
    throw std::invalid_argument(std::string(who) + ": antenna counts must be >= 1");
}

// Shared assembly of one angular-domain link: zero the angular columns
// outside `support`, lift to the antenna domain, and derive both structural
// null spaces from the steering geometry.
struct AngularLink {
  CMatrix h;
  Subspace tx_null;
  Subspace rx_null;
};

AngularLink assemble_angular_link(const CMatrix& at, const CMatrix& ar,
                                  CMatrix h_ang,
                                  const std::vector<int>& support) {
  const Index nt = at.cols();
  const Index nr = ar.cols();
  std::vector<bool> in_support(nt, false);
  for (int q : support) in_support[q] = true;
  for (Index q = 0; q < nt; ++q)
    if (!in_support[q]) h_ang.col(q).setZero();

  AngularLink out;
  if (support.empty()) {
    out.h = CMatrix::Zero(nr, nt);
    out.tx_null = Subspace::full(nt);
    out.rx_null = Subspace::full(nr);
    return out;
  }
  out.h = ar * h_ang * at.adjoint();

  CMatrix tx_basis(nt, nt - static_cast<Index>(support.size()));
  Index col = 0;
  for (Index q = 0; q < nt; ++q)
    if (!in_support[q]) tx_basis.col(col++) = at.col(q);
  out.tx_null = Subspace::from_orthonormal(std::move(tx_basis));

  CMatrix received(nr, static_cast<Index>(support.size()));
  col = 0;
  for (int q : support) received.col(col++) = ar * h_ang.col(q);
  out.rx_null = complement(Subspace::from_span(received));
  return out;
}

void push_disconnected(NetworkInstance& net) {
  net.topology.tx_null.push_back(Subspace::full(net.topology.Nt));
  net.topology.rx_null.push_back(Subspace::full(net.topology.Nr));
  net.channels.h.push_back(
      CMatrix::Zero(net.channels.Nr, net.channels.Nt));
}

NetworkInstance make_empty_network(int K, Index Nt, Index Nr) {
  NetworkInstance net;
  net.topology.K = K;
  net.topology.Nt = Nt;
  net.topology.Nr = Nr;
  net.channels.K = K;
  net.channels.Nt = Nt;
  net.channels.Nr = Nr;
  net.channels.power.assign(K, 1.0);
  return net;
}

}  // namespace

CVector steering_vector(Index n, double omega) {
  if (n < 1) throw std::invalid_argument("steering_vector: n must be >= 1");
  CVector v(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index k = 0; k < n; ++k) {
    const double phase = -2.0 * kPi * omega * static_cast<double>(k);
    v(k) = scale * Complex(std::cos(phase), std::sin(phase));
  }
  return v;
}

CMatrix dft_steering_basis(Index n) {
  if (n < 1) throw std::invalid_argument("dft_steering_basis: n must be >= 1");
  CMatrix b(n, n);
  for (Index q = 0; q < n; ++q)
    b.col(q) = steering_vector(n, static_cast<double>(q) / static_cast<double>(n));
  return b;
}

CMatrix angular_to_antenna(const CMatrix& h_ang) {
  if (h_ang.rows() < 1 || h_ang.cols() < 1)
    throw std::invalid_argument("angular_to_antenna: empty matrix");
  return dft_steering_basis(h_ang.rows()) * h_ang *
         dft_steering_basis(h_ang.cols()).adjoint();
}

std::vector<int> angular_support(double theta, double dist_km,
                                 double scatter_km, Index nt) {
  if (nt < 1) throw std::invalid_argument("angular_support: nt must be >= 1");
  if (dist_km < 0 || scatter_km < 0)
    throw std::invalid_argument("angular_support: negative distance");
  const double fa =
      scatter_km >= dist_km ? kPi : std::asin(scatter_km / dist_km);
  const double a = theta - fa;
  const double b = theta + fa;

  // Exact range of sin(x)/2 over [a, b].
  double lo, hi;
  if (b - a >= 2.0 * kPi) {
    lo = -0.5;
    hi = 0.5;
  } else {
    const double sa = std::sin(a);
    const double sb = std::sin(b);
    lo = 0.5 * std::min(sa, sb);
    hi = 0.5 * std::max(sa, sb);
    const double k_max = std::ceil((a - 0.5 * kPi) / (2.0 * kPi));
    if (0.5 * kPi + 2.0 * kPi * k_max <= b) hi = 0.5;
    const double k_min = std::ceil((a + 0.5 * kPi) / (2.0 * kPi));
    if (-0.5 * kPi + 2.0 * kPi * k_min <= b) lo = -0.5;
  }

  const double w = 1.0 / static_cast<double>(nt);
  std::vector<int> support;
  for (Index q = 0; q < nt; ++q) {
    const double t = static_cast<double>(q) / static_cast<double>(nt);
    bool hit = false;
    for (int k = -2; k <= 2 && !hit; ++k) {
      const double wl = t - w + k;
      const double wh = t + w + k;
      hit = (lo <= wh) && (wl <= hi);
    }
    if (hit) support.push_back(static_cast<int>(q));
  }
  return support;
}

NetworkInstance gen_symmetric(int K, Index Nt, Index Nr, int L, int E1, int E2,
                              std::uint64_t seed) {
  require_network_dims(K, Nt, Nr, "gen_symmetric");
  if (L < 0) throw std::invalid_argument("gen_symmetric: L must be >= 0");
  if (E1 < 1 || E1 > Nt)
    throw std::invalid_argument("gen_symmetric: E1 out of range");
  if (E2 < 0 || E2 > Nt)
    throw std::invalid_argument("gen_symmetric: E2 out of range");

  Rng rng(seed);
  AngularLayout layout;
  layout.e1 = rng.sample_without_replacement(static_cast<int>(Nt), E1);
  const int max_neg = (K - 1) / 2;
  const int max_pos = K / 2;
  for (int off = -max_neg; off <= max_pos; ++off) {
    if (off == 0) continue;
    if (std::abs(off) > L) continue;
    layout.e2[off] = rng.sample_without_replacement(static_cast<int>(Nt), E2);
  }

  const CMatrix at = dft_steering_basis(Nt);
  const CMatrix ar = dft_steering_basis(Nr);
  NetworkInstance net = make_empty_network(K, Nt, Nr);
  for (int m = 0; m < K; ++m) {
    for (int n = 0; n < K; ++n) {
      CMatrix h_ang = rng.gaussian_matrix(Nr, Nt);
      const std::vector<int>* support = nullptr;
      if (m == n) {
        support = &layout.e1;
      } else {
        const int off = circular_offset(n, m, K);
        const auto it = layout.e2.find(off);
        if (it != layout.e2.end()) support = &it->second;
      }
      if (support == nullptr) {
        push_disconnected(net);
        continue;
      }
      AngularLink link = assemble_angular_link(at, ar, std::move(h_ang), *support);
      net.channels.h.push_back(std::move(link.h));
      net.topology.tx_null.push_back(std::move(link.tx_null));
      net.topology.rx_null.push_back(std::move(link.rx_null));
    }
  }
  net.layout = std::move(layout);
  return net;
}

NetworkInstance gen_random_geometric(int K, Index Nt, Index Nr, double area_km,
                                     double l_km, double s_km,
                                     std::uint64_t seed) {
  require_network_dims(K, Nt, Nr, "gen_random_geometric");
  if (area_km <= 0)
    throw std::invalid_argument("gen_random_geometric: area must be positive");
  if (l_km < 0 || s_km < 0)
    throw std::invalid_argument("gen_random_geometric: negative range");

  Rng rng(seed);
  GeometryScene scene;
  scene.area_km = area_km;
  // One location per pair: the receiver sits a short fixed hop from its
  // transmitter, so direct links stay inside any realistic connection radius
  // and see the full angular spread, while cross links thin out with
  // distance. Distances use the wrap-around convention so every pair sees a
  // statistically identical interference environment (no boundary effects).
  const double pair_hop = std::min(kPairHopKm, 0.25 * area_km);
  for (int n = 0; n < K; ++n) {
    const double x = rng.uniform(0.0, area_km);
    const double y = rng.uniform(0.0, area_km);
    scene.tx_x.push_back(x);
    scene.tx_y.push_back(y);
    scene.rx_x.push_back(std::fmod(x + pair_hop, area_km));
    scene.rx_y.push_back(y);
  }
  auto wrap = [area_km](double delta) {
    delta = std::fmod(delta, area_km);
    if (delta > 0.5 * area_km) delta -= area_km;
    if (delta < -0.5 * area_km) delta += area_km;
    return delta;
  };

  const CMatrix at = dft_steering_basis(Nt);
  const CMatrix ar = dft_steering_basis(Nr);
  NetworkInstance net = make_empty_network(K, Nt, Nr);
  for (int m = 0; m < K; ++m) {
    for (int n = 0; n < K; ++n) {
      const double dx = wrap(scene.rx_x[m] - scene.tx_x[n]);
      const double dy = wrap(scene.rx_y[m] - scene.tx_y[n]);
      const double dist = std::hypot(dx, dy);
      const double theta = std::atan2(dx, dy);  // from the array normal
      scene.dist.push_back(dist);
      scene.theta.push_back(theta);

      CMatrix h_ang = rng.gaussian_matrix(Nr, Nt);
      if (dist > l_km) {
        if (m == n) scene.degenerate = true;
        push_disconnected(net);
        continue;
      }
      const std::vector<int> support = angular_support(theta, dist, s_km, Nt);
      AngularLink link = assemble_angular_link(at, ar, std::move(h_ang), support);
      net.channels.h.push_back(std::move(link.h));
      net.topology.tx_null.push_back(std::move(link.tx_null));
      net.topology.rx_null.push_back(std::move(link.rx_null));
    }
  }
  net.scene = std::move(scene);
  return net;
}

NetworkInstance gen_unequal(int K, Index Nt, Index Nr, std::uint64_t seed) {
  require_network_dims(K, Nt, Nr, "gen_unequal");
  Rng rng(seed);
  NetworkInstance net = make_empty_network(K, Nt, Nr);
  for (int m = 0; m < K; ++m) {
    for (int n = 0; n < K; ++n) {
      CMatrix h = rng.gaussian_matrix(Nr, Nt);
      net.topology.tx_null.push_back(null_space(h));
      net.topology.rx_null.push_back(left_null_space(h));
      net.channels.h.push_back(std::move(h));
    }
  }
  return net;
}

NetworkInstance gen_fully_connected(int K, Index Nt, Index Nr,
                                    std::uint64_t seed) {
  return gen_unequal(K, Nt, Nr, seed);
}

NetworkInstance gen_demo_fivepair(std::uint64_t seed) {
  constexpr int K = 5;
  const double s = 1.0 / std::sqrt(2.0);
  // Prescribed transmit null directions w (and the rank-1 row w_perp^H).
  struct Prescription {
    int tx;
    int rx[2];
    CVector w;
    CVector w_perp;
  };
  auto vec2 = [](Complex a, Complex b) {
    CVector v(2);
    v << a, b;
    return v;
  };
  const std::vector<Prescription> rules = {
      {0, {3, 4}, vec2(s, -s), vec2(s, s)},
      {1, {0, 4}, vec2(1, 0), vec2(0, 1)},
      {3, {0, 1}, vec2(s, s), vec2(s, -s)},
      {4, {1, 3}, vec2(0, 1), vec2(1, 0)},
  };

  Rng rng(seed);
  NetworkInstance net = make_empty_network(K, 2, 2);
  for (int m = 0; m < K; ++m) {
    for (int n = 0; n < K; ++n) {
      CMatrix draw = rng.gaussian_matrix(2, 2);
      const Prescription* rule = nullptr;
      for (const auto& r : rules)
        if (r.tx == n && (r.rx[0] == m || r.rx[1] == m)) rule = &r;
      CMatrix h;
      if (rule != nullptr && m != n) {
        h = draw.col(0) * rule->w_perp.adjoint();  // null space span{w}
      } else {
        h = std::move(draw);
      }
      net.topology.tx_null.push_back(null_space(h));
      net.topology.rx_null.push_back(left_null_space(h));
      net.channels.h.push_back(std::move(h));
    }
  }
  return net;
}

}  // namespace pcia
