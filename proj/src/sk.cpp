#include "pdsys/sk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "pdsys/error.hpp"
#include "pdsys/parallel.hpp"

namespace pdsys {
namespace {

void require_pair(const CMat& n_mat, const CMat& m_mat) {
  if (n_mat.rows() != n_mat.cols() || m_mat.rows() != m_mat.cols() ||
      n_mat.rows() != m_mat.rows()) {
    throw Error(ErrorCode::kShapeMismatch, "N and M must be square of equal size");
  }
}

double spectral_norm(const CMat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues()(0);
}

CMat normalized(const CMat& a) {
  const double s = spectral_norm(a);
  return s > 0.0 ? CMat(a / s) : a;
}

std::vector<double> to_vector(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

bool passes_filter(Complex lambda, SpectrumFilter filter, double tol) {
  switch (filter) {
    case SpectrumFilter::kAll:
      return true;
    case SpectrumFilter::kReal:
      return std::abs(lambda.imag()) <= tol;
    case SpectrumFilter::kImaginary:
      return std::abs(lambda.real()) <= tol;
  }
  return true;
}

}  // namespace

CMat kalman_matrix(const CMat& n_mat, const CMat& m_mat) {
  require_pair(n_mat, m_mat);
  const Eigen::Index n = n_mat.rows();
  CMat out(n * n, n);
  CMat block = m_mat;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.middleRows(k * n, n) = block;
    block = block * n_mat;
  }
  return out;
}

SkVerdict kalman_rank_holds(const CMat& n_mat, const CMat& m_mat, double tol) {
  require_pair(n_mat, m_mat);
  const Eigen::Index n = n_mat.rows();
  if (tol <= 0.0) tol = static_cast<double>(n * n) * std::numeric_limits<double>::epsilon() * 100.0;

  SkVerdict verdict;
  verdict.method = SkMethod::kKalman;
  const double n_scale = spectral_norm(n_mat);
  const CMat nn = normalized(n_mat);
  const CMat mm = normalized(m_mat);
  const CMat stack = kalman_matrix(nn, mm);
  Eigen::JacobiSVD<CMat> svd(stack, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  verdict.singular_values = to_vector(sv);
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (smax > 0.0 && sv(i) > tol * smax) ++rank;
  }
  verdict.rank = rank;
  verdict.holds = rank == n;
  if (!verdict.holds && n > 0) {
    // The unobservable subspace is N-invariant; an eigenvector of N restricted
    // to it is a violating φ.
    const CMat q = svd.matrixV().rightCols(n - rank);
    const CMat restricted = q.adjoint() * nn * q;
    Eigen::ComplexEigenSolver<CMat> es(restricted);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorCode::kEigenFailure, "eigen solver failed on the unobservable subspace");
    }
    CVec w = q * es.eigenvectors().col(0);
    w.normalize();
    verdict.witness = w;
    verdict.lambda = es.eigenvalues()(0) * n_scale;
  }
  return verdict;
}

SkVerdict sk_eigenvector_check(const CMat& n_mat, const CMat& m_mat, double tol,
                               SpectrumFilter filter) {
  require_pair(n_mat, m_mat);
  const Eigen::Index n = n_mat.rows();
  SkVerdict verdict;
  verdict.method = SkMethod::kEigenvector;
  verdict.holds = true;
  if (n == 0) return verdict;

  const double n_scale = spectral_norm(n_mat);
  const CMat nn = normalized(n_mat);
  const CMat mm = normalized(m_mat);
  Eigen::ComplexEigenSolver<CMat> es(nn);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "eigen solver failed on N");
  }

  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> minima;
  CMat pencil(2 * n, n);
  pencil.bottomRows(n) = mm;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex lambda = es.eigenvalues()(i);
    if (!passes_filter(lambda, filter, tol)) continue;
    pencil.topRows(n) = nn - lambda * CMat::Identity(n, n);
    Eigen::JacobiSVD<CMat> svd(pencil, Eigen::ComputeFullV);
    const double smin = svd.singularValues()(n - 1);
    minima.push_back(smin);
    if (smin < worst) {
      worst = smin;
      verdict.lambda = lambda * n_scale;
      if (smin <= tol) {
        CVec w = svd.matrixV().col(n - 1);
        w.normalize();
        verdict.witness = w;
      }
    }
  }
  std::sort(minima.rbegin(), minima.rend());
  verdict.singular_values = minima;
  verdict.holds = !(worst <= tol);
  if (verdict.holds) verdict.witness.reset();
  verdict.rank = static_cast<int>(std::count_if(minima.begin(), minima.end(),
                                                [tol](double s) { return s > tol; }));
  return verdict;
}

SkSphereReport sk_over_sphere(const SymbolicSystem& system, int sphere_count, double tol) {
  return sk_over_sphere(system, sample_sphere(system.d, sphere_count), tol);
}

SkSphereReport sk_over_sphere(const SymbolicSystem& system,
                              const std::vector<Vec>& directions, double tol) {
  validate_shape(system);
  const FrozenCoefficients coeffs = freeze(system);
  SkSphereReport report;
  report.rows.resize(directions.size());
  parallel_for(directions.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const FrequencySymbol sym = evaluate_symbols(coeffs, directions[i]);
      SkSphereRow& row = report.rows[i];
      row.omega_index = static_cast<int>(i);
      row.omega = directions[i];
      row.full = kalman_rank_holds(sym.n_omega, sym.m_omega, tol);
      if (sym.n1 > 0) {
        row.reduced = kalman_rank_holds(sym.nred, sym.mred, tol);
      } else {
        row.reduced.holds = true;
      }
      row.agree = row.full.holds == row.reduced.holds;
    }
  });
  report.pass = !report.rows.empty();
  report.reduced_agreement = true;
  for (const auto& row : report.rows) {
    if (!row.full.holds) {
      report.pass = false;
      ++report.failing;
    }
    report.reduced_agreement = report.reduced_agreement && row.agree;
  }
  return report;
}

BlockReductionResult block_sk_reduction_check(const CMat& n11, const CMat& n12,
                                              const CMat& n21, const CMat& n22,
                                              const CMat& m22, const CMat& q,
                                              double tol) {
  const Eigen::Index n1 = n11.rows();
  const Eigen::Index n2 = n22.rows();
  if (n11.cols() != n1 || n22.cols() != n2 || n12.rows() != n1 || n12.cols() != n2 ||
      n21.rows() != n2 || n21.cols() != n1 || m22.rows() != n2 || m22.cols() != n2 ||
      q.rows() != n2 || q.cols() != n2) {
    throw Error(ErrorCode::kShapeMismatch, "inconsistent block sizes");
  }
  const double scale = std::max({1.0, n12.size() ? n12.cwiseAbs().maxCoeff() : 0.0,
                                 n21.size() ? n21.cwiseAbs().maxCoeff() : 0.0});
  const double adj_err = n12.size() ? (n21.adjoint() - n12).cwiseAbs().maxCoeff() : 0.0;
  const double skew_err = n12.size() ? (n21.adjoint() + n12).cwiseAbs().maxCoeff() : 0.0;
  if (std::min(adj_err, skew_err) > 1e-10 * scale) {
    throw Error(ErrorCode::kHypothesisViolation, "N21* differs from ±N12");
  }
  if (n2 > 0) {
    const CMat herm = 0.5 * (q + q.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(herm, Eigen::EigenvaluesOnly);
    const Vec& ev = es.eigenvalues();
    const double qs = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    const bool definite = ev.minCoeff() > 1e-12 * qs || ev.maxCoeff() < -1e-12 * qs;
    if (!definite) {
      throw Error(ErrorCode::kHypothesisViolation,
                  "Re(Qη·η) vanishes for some η (Hermitian part of Q not definite)");
    }
  }

  const Eigen::Index n = n1 + n2;
  CMat n_full(n, n);
  n_full << n11, n12, n21, n22;
  CMat m_full = CMat::Zero(n, n);
  m_full.bottomRightCorner(n2, n2) = m22;

  BlockReductionResult result;
  result.full_holds = kalman_rank_holds(n_full, m_full, tol).holds;
  result.reduced_holds =
      n1 == 0 ? true : kalman_rank_holds(n11, n12 * q * n21, tol).holds;
  if (n2 > 0) {
    Eigen::JacobiSVD<CMat> svd(m22);
    const Vec& sv = svd.singularValues();
    result.equivalence_asserted = sv(0) > 0.0 && sv(n2 - 1) > 1e-10 * sv(0);
  }
  const bool forward = !result.full_holds || result.reduced_holds;
  const bool backward = !result.reduced_holds || result.full_holds;
  result.consistent = forward && (!result.equivalence_asserted || backward);
  return result;
}

double hypocoercivity_positivity(const CMat& n_mat, const CMat& m_mat,
                                 const std::vector<double>& epsilons) {
  require_pair(n_mat, m_mat);
  const Eigen::Index n = n_mat.rows();
  if (static_cast<Eigen::Index>(epsilons.size()) != n) {
    throw Error(ErrorCode::kShapeMismatch, "need one weight per power of N");
  }
  if (n == 0) return 0.0;
  CMat stack(n * n, n);
  CMat block = m_mat;
  for (Eigen::Index l = 0; l < n; ++l) {
    stack.middleRows(l * n, n) = std::sqrt(epsilons[l]) * block;
    block = block * n_mat;
  }
  Eigen::JacobiSVD<CMat> svd(stack);
  const double smin = svd.singularValues()(n - 1);
  return smin * smin;
}

}  // namespace pdsys
