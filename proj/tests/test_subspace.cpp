#include <cmath>

#include "doctest.h"
#include "pcia/channel.hpp"
#include "pcia/rng.hpp"
#include "pcia/subspace.hpp"

using namespace pcia;

namespace {

Subspace random_subspace(Index ambient, Index rank, Rng& rng) {
  return Subspace::from_orthonormal(random_orthonormal(ambient, rank, rng));
}

Subspace axis_span(Index ambient, std::initializer_list<Index> axes) {
  CMatrix b = CMatrix::Zero(ambient, static_cast<Index>(axes.size()));
  Index col = 0;
  for (Index a : axes) b(a, col++) = 1.0;
  return Subspace::from_orthonormal(std::move(b));
}

}  // namespace

TEST_CASE("steering vector frozen values") {
  const double s = 1.0 / std::sqrt(2.0);
  CVector v2 = steering_vector(2, 0.5);
  CHECK(std::abs(v2(0) - Complex(s, 0)) < 1e-12);
  CHECK(std::abs(v2(1) - Complex(-s, 0)) < 1e-12);

  // exp(-j 2 pi k / 4) / 2 for k = 0..3
  CVector v4 = steering_vector(4, 0.25);
  CHECK(std::abs(v4(0) - Complex(0.5, 0)) < 1e-12);
  CHECK(std::abs(v4(1) - Complex(0, -0.5)) < 1e-12);
  CHECK(std::abs(v4(2) - Complex(-0.5, 0)) < 1e-12);
  CHECK(std::abs(v4(3) - Complex(0, 0.5)) < 1e-12);
  CHECK(v4.norm() == doctest::Approx(1.0));
}

TEST_CASE("steering basis is unitary") {
  for (Index n : {2, 4, 6}) {
    CMatrix a = dft_steering_basis(n);
    CHECK((a.adjoint() * a - CMatrix::Identity(n, n)).norm() < 1e-12);
  }
}

TEST_CASE("null spaces of a diagonal rank-1 matrix") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  Subspace right = null_space(m);
  REQUIRE(right.rank() == 1);
  CHECK(std::abs(right.basis()(1, 0)) == doctest::Approx(1.0));
  Subspace left = left_null_space(m);
  REQUIRE(left.rank() == 1);
  CHECK(std::abs(left.basis()(1, 0)) == doctest::Approx(1.0));
  CHECK((m * right.basis()).norm() < 1e-12);
  CHECK((left.basis().adjoint() * m).norm() < 1e-12);
}

TEST_CASE("axis-aligned meet and complement") {
  Subspace a = axis_span(3, {0, 1});
  Subspace b = axis_span(3, {1, 2});
  Subspace m = intersect(a, b);
  REQUIRE(m.rank() == 1);
  CHECK(contains(a, m));
  CHECK(contains(b, m));
  CHECK(std::abs(m.basis()(1, 0)) == doctest::Approx(1.0));

  Subspace c = complement(axis_span(3, {0}));
  CHECK(c.rank() == 2);
  CHECK(dim_meet(c, axis_span(3, {0})) == 0);
  CHECK(dim_outside(a, b) == 1);
  CHECK(dim_outside(a, Subspace::full(3)) == 0);
  CHECK(dim_outside(Subspace::full(3), a) == 1);
}

TEST_CASE("from_span collapses dependent columns") {
  CMatrix cand(3, 3);
  cand.setZero();
  cand.col(0)(0) = 1.0;
  cand.col(1)(0) = 2.0;           // dependent
  cand.col(2)(1) = Complex(0, 3); // new direction
  Subspace s = Subspace::from_span(cand);
  CHECK(s.rank() == 2);
  CHECK((s.basis().adjoint() * s.basis() - CMatrix::Identity(2, 2)).norm() <
        1e-12);
}

TEST_CASE("principal angles of aligned and orthogonal spans") {
  Subspace a = axis_span(4, {0, 1});
  RVector same = principal_angles(a, a);
  CHECK(same.maxCoeff() < 1e-7);
  CHECK(spans_equal(a, a));
  RVector orth = principal_angles(a, axis_span(4, {2, 3}));
  CHECK(std::abs(orth.minCoeff() - std::acos(0.0)) < 1e-7);
  CHECK_FALSE(spans_equal(a, axis_span(4, {2, 3})));
}

TEST_CASE("lattice identities on random subspaces") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const Index ambient = 4 + static_cast<Index>(rng.uniform_int(3));
    const Index ra = 1 + static_cast<Index>(rng.uniform_int(ambient));
    const Index rb = 1 + static_cast<Index>(rng.uniform_int(ambient));
    Subspace a = random_subspace(ambient, ra, rng);
    Subspace b = random_subspace(ambient, rb, rng);

    Subspace m = intersect(a, b);
    CHECK(contains(a, m));
    CHECK(contains(b, m));
    CHECK(m.rank() == dim_meet(a, b));
    CHECK(dim_outside(a, b) == a.rank() - dim_meet(a, b));

    // rank of the union span complements the meet
    CMatrix stacked(ambient, ra + rb);
    stacked << a.basis(), b.basis();
    CHECK(numerical_rank(stacked) == ra + rb - dim_meet(a, b));

    Subspace comp = complement(a);
    CHECK(comp.rank() == ambient - ra);
    CHECK(dim_meet(a, comp) == 0);

    // generic pair: meet has the dimension forced by ambient counting
    CHECK(dim_meet(a, b) >= std::max<Index>(0, ra + rb - ambient));
  }
}
