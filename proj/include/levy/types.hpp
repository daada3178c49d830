#pragma once

#include <complex>
#include <limits>

#include <Eigen/Core>

namespace levy {

using Complex = std::complex<double>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Vector = VectorX<double>;
using ComplexVector = VectorX<Complex>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace levy
