#pragma once

#include <complex>

#include <Eigen/Core>

namespace pdsys {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

}  // namespace pdsys
