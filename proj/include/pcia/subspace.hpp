#pragma once

#include "pcia/linalg.hpp"

namespace pcia {

/// Linear subspace of C^ambient, stored as an orthonormal basis
/// (ambient x rank matrix). The zero subspace has an ambient x 0 basis.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(Index ambient);
  static Subspace full(Index ambient);
  /// Orthonormalizes the candidate columns; the rank is decided by the
  /// shared singular value threshold.
  static Subspace from_span(const CMatrix& candidate, double tol = kRankTol);
  /// Trusts the caller that the columns are already orthonormal.
  static Subspace from_orthonormal(CMatrix basis);

  Index ambient() const { return ambient_; }
  Index rank() const { return basis_.cols(); }
  const CMatrix& basis() const { return basis_; }

 private:
  Subspace(Index ambient, CMatrix basis);

  Index ambient_ = 0;
  CMatrix basis_;
};

/// Right null space {x : M x = 0}.
Subspace null_space(const CMatrix& m, double tol = kRankTol);

/// Left null space {u : u M = 0}, stored through the columns u^H
/// (ambient = rows of M).
Subspace left_null_space(const CMatrix& m, double tol = kRankTol);

Subspace intersect(const Subspace& a, const Subspace& b, double tol = kRankTol);

/// Orthogonal complement within the ambient space.
Subspace complement(const Subspace& a);

/// rank(intersect(a, b)), computed from the rank of the stacked bases.
Index dim_meet(const Subspace& a, const Subspace& b, double tol = kRankTol);

/// Dimensions of a not contained in b: rank(a) - dim_meet(a, b). Equals the
/// rank of a's projection onto the orthogonal complement of b.
Index dim_outside(const Subspace& a, const Subspace& b, double tol = kRankTol);

/// Principal angles in radians, ascending; length min(rank(a), rank(b)).
RVector principal_angles(const Subspace& a, const Subspace& b);

/// Same span: equal ranks and max principal angle below angle_tol.
bool spans_equal(const Subspace& a, const Subspace& b, double angle_tol = 1e-7);

/// Every basis vector of inner lies in outer up to the residual tolerance.
bool contains(const Subspace& outer, const Subspace& inner,
              double tol = kResidualTol);

}  // namespace pcia
