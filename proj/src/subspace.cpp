#include "pcia/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace pcia {

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b,
                          const char* who) {
  if (a.ambient() != b.ambient())
    throw std::invalid_argument(std::string(who) + ": ambient mismatch");
}

}  // namespace

Subspace::Subspace(Index ambient, CMatrix basis)
    : ambient_(ambient), basis_(std::move(basis)) {}

Subspace Subspace::zero(Index ambient) {
  if (ambient < 0) throw std::invalid_argument("Subspace: negative ambient");
  return Subspace(ambient, CMatrix(ambient, 0));
}

Subspace Subspace::full(Index ambient) {
  if (ambient < 0) throw std::invalid_argument("Subspace: negative ambient");
  return Subspace(ambient, CMatrix::Identity(ambient, ambient));
}

Subspace Subspace::from_span(const CMatrix& candidate, double tol) {
  return Subspace(candidate.rows(), orthonormal_span(candidate, tol));
}

Subspace Subspace::from_orthonormal(CMatrix basis) {
  const Index ambient = basis.rows();
  if (basis.cols() > ambient)
    throw std::invalid_argument("Subspace: more basis vectors than ambient");
  return Subspace(ambient, std::move(basis));
}

Subspace null_space(const CMatrix& m, double tol) {
  if (m.cols() == 0) return Subspace::zero(0);
  if (m.rows() == 0) return Subspace::full(m.cols());
  if (!m.allFinite())
    throw std::invalid_argument("null_space: non-finite entries");
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Index r = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    const double cut = tol * s(0);
    while (r < s.size() && s(r) > cut) ++r;
  }
  return Subspace::from_orthonormal(svd.matrixV().rightCols(m.cols() - r));
}

Subspace left_null_space(const CMatrix& m, double tol) {
  return null_space(CMatrix(m.adjoint()), tol);
}

Subspace intersect(const Subspace& a, const Subspace& b, double tol) {
  require_same_ambient(a, b, "intersect");
  if (a.rank() == 0 || b.rank() == 0) return Subspace::zero(a.ambient());
  // x in both spans iff [A -B] [p; q] = 0 with x = A p.
  CMatrix stack(a.ambient(), a.rank() + b.rank());
  stack << a.basis(), -b.basis();
  const Subspace pq = null_space(stack, tol);
  if (pq.rank() == 0) return Subspace::zero(a.ambient());
  return Subspace::from_span(a.basis() * pq.basis().topRows(a.rank()), tol);
}

Subspace complement(const Subspace& a) {
  if (a.rank() == 0) return Subspace::full(a.ambient());
  if (a.rank() == a.ambient()) return Subspace::zero(a.ambient());
  Eigen::HouseholderQR<CMatrix> qr(a.basis());
  const CMatrix q =
      qr.householderQ() * CMatrix::Identity(a.ambient(), a.ambient());
  return Subspace::from_orthonormal(q.rightCols(a.ambient() - a.rank()));
}

Index dim_meet(const Subspace& a, const Subspace& b, double tol) {
  require_same_ambient(a, b, "dim_meet");
  if (a.rank() == 0 || b.rank() == 0) return 0;
  CMatrix stack(a.ambient(), a.rank() + b.rank());
  stack << a.basis(), b.basis();
  return a.rank() + b.rank() - numerical_rank(stack, tol);
}

Index dim_outside(const Subspace& a, const Subspace& b, double tol) {
  return a.rank() - dim_meet(a, b, tol);
}

RVector principal_angles(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "principal_angles");
  const Index k = std::min(a.rank(), b.rank());
  if (k == 0) return RVector(0);
  Eigen::JacobiSVD<CMatrix> svd(a.basis().adjoint() * b.basis());
  RVector angles(k);
  for (Index i = 0; i < k; ++i) {
    const double c = std::clamp(svd.singularValues()(i), 0.0, 1.0);
    angles(i) = std::acos(c);
  }
  return angles;  // ascending: cosines come out descending
}

bool spans_equal(const Subspace& a, const Subspace& b, double angle_tol) {
  if (a.ambient() != b.ambient() || a.rank() != b.rank()) return false;
  if (a.rank() == 0) return true;
  const RVector angles = principal_angles(a, b);
  return angles(angles.size() - 1) <= angle_tol;
}

bool contains(const Subspace& outer, const Subspace& inner, double tol) {
  require_same_ambient(outer, inner, "contains");
  if (inner.rank() == 0) return true;
  if (outer.rank() == 0) return false;
  const CMatrix residual =
      inner.basis() - outer.basis() * (outer.basis().adjoint() * inner.basis());
  return residual.colwise().norm().maxCoeff() <= tol;
}

}  // namespace pcia
