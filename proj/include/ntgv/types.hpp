#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace ntgv {

using Index = std::int32_t;

template <typename S>
using Vec3T = Eigen::Matrix<S, 3, 1>;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

using Triangle = std::array<Index, 3>;

/// Order-3 tensor on R^3, stored row-major: entry (i, j, k) at 9 i + 3 j + k.
struct Tensor3
{
    std::array<double, 27> data{};

    double& operator()(int i, int j, int k) { return data[9 * i + 3 * j + k]; }
    double operator()(int i, int j, int k) const { return data[9 * i + 3 * j + k]; }

    static Tensor3 zero() { return {}; }

    /// a (x) B with B a 3x3 matrix: entry a_i B_jk.
    static Tensor3 outer(const Vec3& a, const Mat3& b)
    {
        Tensor3 t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) t(i, j, k) = a[i] * b(j, k);
        return t;
    }

    double squared_norm() const
    {
        double s = 0.0;
        for (double x : data) s += x * x;
        return s;
    }
    double norm() const { return std::sqrt(squared_norm()); }

    /// Frobenius inner product.
    double dot(const Tensor3& o) const
    {
        double s = 0.0;
        for (int i = 0; i < 27; ++i) s += data[i] * o.data[i];
        return s;
    }

    /// Contraction of the first axis with v.
    Mat3 contract_first(const Vec3& v) const
    {
        Mat3 m = Mat3::Zero();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) m(j, k) += v[i] * (*this)(i, j, k);
        return m;
    }
    Mat3 contract_second(const Vec3& v) const
    {
        Mat3 m = Mat3::Zero();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) m(i, k) += v[j] * (*this)(i, j, k);
        return m;
    }
    /// Contraction of the last axis with v (directional derivative of a matrix field).
    Mat3 contract_last(const Vec3& v) const
    {
        Mat3 m = Mat3::Zero();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) m(i, j) += v[k] * (*this)(i, j, k);
        return m;
    }

    /// The vector sum_jk T_ijk P_jk.
    Vec3 contract_last_two(const Mat3& p) const
    {
        Vec3 v = Vec3::Zero();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) v[i] += (*this)(i, j, k) * p(j, k);
        return v;
    }

    /// Trace over the last two axes, the vector sum_j T_ijj.
    Vec3 trace_last_two() const
    {
        Vec3 v = Vec3::Zero();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) v[i] += (*this)(i, j, j);
        return v;
    }

    Tensor3& operator+=(const Tensor3& o)
    {
        for (int i = 0; i < 27; ++i) data[i] += o.data[i];
        return *this;
    }
    Tensor3& operator-=(const Tensor3& o)
    {
        for (int i = 0; i < 27; ++i) data[i] -= o.data[i];
        return *this;
    }
    Tensor3& operator*=(double s)
    {
        for (double& x : data) x *= s;
        return *this;
    }
    friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
    friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
    friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }
    friend Tensor3 operator*(Tensor3 a, double s) { return a *= s; }
};

} // namespace ntgv
