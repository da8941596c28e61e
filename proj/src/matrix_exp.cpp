#include "pdsys/matrix_exp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace pdsys {

CMat expm(const CMat& a) { return a.exp(); }

Propagator::Propagator(const CMat& k, double max_condition) : k_(k) {
  if (k.rows() == 0) return;
  Eigen::ComplexEigenSolver<CMat> es(k);
  if (es.info() != Eigen::Success) return;
  Eigen::JacobiSVD<CMat> svd(es.eigenvectors());
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0) || s(0) / smin > max_condition) return;
  v_ = es.eigenvectors();
  v_inv_ = v_.inverse();
  lambda_ = es.eigenvalues();
  diagonalized_ = true;
}

CMat Propagator::at(double t) const {
  if (!diagonalized_) return expm(-t * k_);
  const CVec e = (-t * lambda_).array().exp();
  return v_ * e.asDiagonal() * v_inv_;
}

CVec Propagator::apply(double t, const CVec& v) const {
  if (!diagonalized_) return expm(-t * k_) * v;
  const CVec e = (-t * lambda_).array().exp();
  return v_ * (e.asDiagonal() * (v_inv_ * v));
}

}  // namespace pdsys
