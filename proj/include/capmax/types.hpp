#ifndef CAPMAX_TYPES_HPP
#define CAPMAX_TYPES_HPP

#include <complex>
#include <Eigen/Dense>

namespace capmax {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using IVector = Eigen::VectorXi;

inline constexpr Complex kImag{0.0, 1.0};

} // namespace capmax

#endif
