#pragma once

#include "ntgv/types.hpp"

#include <algorithm>
#include <cmath>

namespace ntgv {

/// Soft thresholding: x / |x| * max(|x| - kappa, 0), and 0 for x = 0.
inline double shrink(double x, double kappa)
{
    const double a = std::abs(x);
    if (a == 0.0) return 0.0;
    return x / a * std::max(a - kappa, 0.0);
}

template <typename Derived>
typename Derived::PlainObject shrink(const Eigen::MatrixBase<Derived>& x, double kappa)
{
    const double a = x.norm();
    if (a == 0.0) return Derived::PlainObject::Zero(x.rows(), x.cols());
    return x * (std::max(a - kappa, 0.0) / a);
}

/// Frobenius-norm shrinkage of an order-3 tensor.
inline Tensor3 shrink(const Tensor3& x, double kappa)
{
    const double a = x.norm();
    if (a == 0.0) return Tensor3::zero();
    return x * (std::max(a - kappa, 0.0) / a);
}

} // namespace ntgv
