#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pcia/rng.hpp"
#include "pcia/subspace.hpp"

namespace pcia {

/// Link null-space structure of a K-pair network. Entry (m, n) describes the
/// link from transmitter n to receiver m: tx_null is the transmit-side null
/// space in C^Nt, rx_null the receive-side one in C^Nr (columns are u^H).
/// A fully disconnected link carries full null spaces on both sides.
struct Topology {
  int K = 0;
  Index Nt = 0;
  Index Nr = 0;
  std::vector<Subspace> tx_null;  // K*K entries, index m*K + n
  std::vector<Subspace> rx_null;

  const Subspace& tx(int m, int n) const {
    return tx_null[static_cast<std::size_t>(m) * K + n];
  }
  const Subspace& rx(int m, int n) const {
    return rx_null[static_cast<std::size_t>(m) * K + n];
  }
  bool connected(int m, int n) const { return tx(m, n).rank() < Nt; }
};

struct ChannelRealization {
  int K = 0;
  Index Nt = 0;
  Index Nr = 0;
  std::vector<CMatrix> h;      // K*K entries of Nr x Nt, index m*K + n
  std::vector<double> power;   // per-pair transmit power (relative weights)

  const CMatrix& H(int m, int n) const {
    return h[static_cast<std::size_t>(m) * K + n];
  }
};

/// Node placement of a geometric drop. Arrays are oriented along the x axis;
/// angles are measured from the array normal (the y axis). Distances and
/// angles follow the wrap-around convention of the generator.
struct GeometryScene {
  double area_km = 0;
  std::vector<double> tx_x, tx_y, rx_x, rx_y;
  std::vector<double> dist;   // K*K, index m*K + n
  std::vector<double> theta;  // K*K
  bool degenerate = false;    // some direct link fell outside the radius
};

/// Angular index sets of a symmetric drop: e1 for direct links, e2 keyed by
/// the signed circular offset of the interfering link.
struct AngularLayout {
  std::vector<int> e1;
  std::map<int, std::vector<int>> e2;
};

struct NetworkInstance {
  Topology topology;
  ChannelRealization channels;
  std::optional<GeometryScene> scene;
  std::optional<AngularLayout> layout;
};

/// Unit-norm array steering vector: entry k is exp(-j 2 pi k w) / sqrt(n).
CVector steering_vector(Index n, double omega);

/// Unitary basis whose column q is steering_vector(n, q / n).
CMatrix dft_steering_basis(Index n);

/// Antenna-domain channel A_R * h_ang * A_T^H for critically spaced arrays.
CMatrix angular_to_antenna(const CMatrix& h_ang);

/// Transmit-side angular support of a link: column q survives iff the arc
/// swept by sin(theta)/2 over [theta - F_a, theta + F_a] comes within 1/nt
/// (circular distance, boundary inclusive) of q/nt, where
/// F_a = asin(scatter/dist) clipped to pi when the scatter disc covers the
/// transmitter. The support grows monotonically with scatter_km.
std::vector<int> angular_support(double theta, double dist_km,
                                 double scatter_km, Index nt);

/// Banded network with circulant angular structure: pair (m, n) is connected
/// iff its signed circular offset is at most L; direct links share the index
/// set E1, interfering links share per-offset sets of size E2.
NetworkInstance gen_symmetric(int K, Index Nt, Index Nr, int L, int E1, int E2,
                              std::uint64_t seed);

/// Uniform pair placement in an area_km square; each pair's transmitter and
/// receiver share a location, so direct links are always connected and full
/// rank. Cross links beyond l_km are disconnected, the rest carry the angular
/// support of a scatter disc of radius s_km around the receiver.
NetworkInstance gen_random_geometric(int K, Index Nt, Index Nr, double area_km,
                                     double l_km, double s_km,
                                     std::uint64_t seed);

/// Fully connected generic network with i.i.d. links; null spaces are derived
/// numerically (nontrivial only when Nt != Nr).
NetworkInstance gen_unequal(int K, Index Nt, Index Nr, std::uint64_t seed);

/// Alias of gen_unequal for square generic networks.
NetworkInstance gen_fully_connected(int K, Index Nt, Index Nr,
                                    std::uint64_t seed);

/// Five-pair 2x2 network with prescribed rank-1 cross-link null directions;
/// the remaining cross links are generic full rank. The canonical small
/// scenario exercised by the demo config and the golden tests.
NetworkInstance gen_demo_fivepair(std::uint64_t seed);

}  // namespace pcia
