#include "pcia/linalg.hpp"

#include <stdexcept>

namespace pcia {

Index numerical_rank(const CMatrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (!m.allFinite())
    throw std::invalid_argument("numerical_rank: non-finite entries");
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) return 0;
  const double cut = tol * s(0);
  Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return r;
}

CMatrix orthonormal_span(const CMatrix& candidate, double tol) {
  if (candidate.rows() == 0 || candidate.cols() == 0)
    return CMatrix(candidate.rows(), 0);
  if (!candidate.allFinite())
    throw std::invalid_argument("orthonormal_span: non-finite entries");
  Eigen::JacobiSVD<CMatrix> svd(candidate, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) return CMatrix(candidate.rows(), 0);
  const double cut = tol * s(0);
  Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace pcia
