#pragma once

// Second-order forward-mode automatic differentiation.
//
// A Jet<N> carries a value together with its gradient and Hessian with respect to N
// independent variables. The Hessian is stored as the packed upper triangle. The
// local energies of the augmented Lagrangian depend on at most 12 vertex coordinates,
// so element Hessians are obtained in one pass with N = 9 or N = 12.

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <limits>

namespace ntgv {

template <int N>
struct Jet
{
    static constexpr int kSize = N;
    static constexpr int kPacked = N * (N + 1) / 2;

    double v = 0.0;
    std::array<double, N> g{};
    std::array<double, kPacked> h{};

    Jet() = default;
    Jet(double value) // NOLINT: constants promote implicitly
        : v(value)
    {}

    static Jet variable(double value, int index)
    {
        Jet j(value);
        j.g[index] = 1.0;
        return j;
    }

    static constexpr int packed(int i, int j)
    {
        return i <= j ? i * N - i * (i - 1) / 2 + (j - i) : packed(j, i);
    }

    double hessian(int i, int j) const { return h[packed(i, j)]; }

    Jet& operator+=(const Jet& o)
    {
        v += o.v;
        for (int i = 0; i < N; ++i) g[i] += o.g[i];
        for (int i = 0; i < kPacked; ++i) h[i] += o.h[i];
        return *this;
    }
    Jet& operator-=(const Jet& o)
    {
        v -= o.v;
        for (int i = 0; i < N; ++i) g[i] -= o.g[i];
        for (int i = 0; i < kPacked; ++i) h[i] -= o.h[i];
        return *this;
    }
    Jet& operator*=(double s)
    {
        v *= s;
        for (int i = 0; i < N; ++i) g[i] *= s;
        for (int i = 0; i < kPacked; ++i) h[i] *= s;
        return *this;
    }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }
    Jet& operator/=(const Jet& o) { return *this = *this / o; }
    Jet& operator/=(double s) { return *this *= (1.0 / s); }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double b)
    {
        a.v += b;
        return a;
    }
    friend Jet operator+(double b, Jet a) { return a + b; }
    friend Jet operator-(Jet a, double b)
    {
        a.v -= b;
        return a;
    }
    friend Jet operator-(double b, const Jet& a) { return -a + b; }
    friend Jet operator-(Jet a)
    {
        a *= -1.0;
        return a;
    }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }

    friend Jet operator*(const Jet& a, const Jet& b)
    {
        Jet r;
        r.v = a.v * b.v;
        for (int i = 0; i < N; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
        int k = 0;
        for (int i = 0; i < N; ++i) {
            const double ai = a.g[i];
            const double bi = b.g[i];
            for (int j = i; j < N; ++j, ++k) {
                r.h[k] = a.v * b.h[k] + b.v * a.h[k] + ai * b.g[j] + bi * a.g[j];
            }
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
    friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
    friend Jet operator/(double s, const Jet& b) { return s * reciprocal(b); }

    /// f(a) given f(a.v), f'(a.v), f''(a.v).
    static Jet chain(const Jet& a, double f0, double f1, double f2)
    {
        Jet r;
        r.v = f0;
        for (int i = 0; i < N; ++i) r.g[i] = f1 * a.g[i];
        int k = 0;
        for (int i = 0; i < N; ++i) {
            const double ai = f2 * a.g[i];
            for (int j = i; j < N; ++j, ++k) r.h[k] = f1 * a.h[k] + ai * a.g[j];
        }
        return r;
    }

    friend Jet reciprocal(const Jet& a)
    {
        const double inv = 1.0 / a.v;
        return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
    }

    friend Jet sqrt(const Jet& a)
    {
        const double s = std::sqrt(a.v);
        return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
    }

    friend Jet acos(const Jet& a)
    {
        const double q = 1.0 - a.v * a.v;
        const double rs = 1.0 / std::sqrt(q);
        return chain(a, std::acos(a.v), -rs, -a.v * rs / q);
    }

    friend Jet atan2(const Jet& y, const Jet& x)
    {
        const double r2 = x.v * x.v + y.v * y.v;
        const double r4 = r2 * r2;
        const double dy = x.v / r2;
        const double dx = -y.v / r2;
        const double dyy = -2.0 * x.v * y.v / r4;
        const double dxx = 2.0 * x.v * y.v / r4;
        const double dxy = (y.v * y.v - x.v * x.v) / r4;
        Jet r;
        r.v = std::atan2(y.v, x.v);
        for (int i = 0; i < N; ++i) r.g[i] = dy * y.g[i] + dx * x.g[i];
        int k = 0;
        for (int i = 0; i < N; ++i) {
            for (int j = i; j < N; ++j, ++k) {
                r.h[k] = dy * y.h[k] + dx * x.h[k] + dyy * y.g[i] * y.g[j] + dxx * x.g[i] * x.g[j] +
                         dxy * (x.g[i] * y.g[j] + y.g[i] * x.g[j]);
            }
        }
        return r;
    }

    friend Jet abs(const Jet& a) { return a.v < 0.0 ? -a : a; }

    friend bool operator<(const Jet& a, const Jet& b) { return a.v < b.v; }
    friend bool operator>(const Jet& a, const Jet& b) { return a.v > b.v; }
    friend bool operator<=(const Jet& a, const Jet& b) { return a.v <= b.v; }
    friend bool operator>=(const Jet& a, const Jet& b) { return a.v >= b.v; }
    friend bool operator==(const Jet& a, const Jet& b) { return a.v == b.v; }
    friend bool operator!=(const Jet& a, const Jet& b) { return a.v != b.v; }
};

inline double value_of(double x) { return x; }
template <int N>
double value_of(const Jet<N>& x)
{
    return x.v;
}

} // namespace ntgv

namespace Eigen {

template <int N>
struct NumTraits<ntgv::Jet<N>> : GenericNumTraits<ntgv::Jet<N>>
{
    using Real = ntgv::Jet<N>;
    using NonInteger = ntgv::Jet<N>;
    using Nested = ntgv::Jet<N>;
    using Literal = ntgv::Jet<N>;

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 1,
        MulCost = 3
    };

    static Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
    static Real dummy_precision() { return Real(1e-12); }
    static Real highest() { return Real(std::numeric_limits<double>::max()); }
    static Real lowest() { return Real(std::numeric_limits<double>::lowest()); }
    static int digits10() { return NumTraits<double>::digits10(); }
};

} // namespace Eigen
