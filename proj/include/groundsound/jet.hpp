/**
 * @file jet.hpp
 * @brief Truncated Taylor series ("jets") for exact higher-order derivatives
 *        of closed-form expressions.
 *
 * A Jet<T, N> stores Taylor coefficients c[k] = f^(k)(t0) / k! for k = 0..N.
 * Arithmetic and the elementary functions below propagate the series exactly,
 * so the k-th derivative is recovered as k! * c[k] with only rounding error.
 */

#ifndef GROUNDSOUND_JET_HPP
#define GROUNDSOUND_JET_HPP

#include <array>
#include <cmath>
#include <complex>

namespace groundsound {

template <class T, int N>
struct Jet {
    static_assert(N >= 0);
    std::array<T, N + 1> c{};

    static Jet constant(T v)
    {
        Jet j;
        j.c[0] = v;
        return j;
    }
    /// The independent variable evaluated at v.
    static Jet variable(T v)
    {
        Jet j;
        j.c[0] = v;
        if constexpr (N >= 1)
            j.c[1] = T(1);
        return j;
    }

    T value() const { return c[0]; }
    /// k-th derivative, k! * c[k].
    T derivative(int k) const
    {
        T f(1);
        for (int i = 2; i <= k; ++i)
            f *= T(i);
        return f * c[k];
    }

    Jet operator-() const
    {
        Jet r;
        for (int k = 0; k <= N; ++k)
            r.c[k] = -c[k];
        return r;
    }
    Jet& operator+=(const Jet& o)
    {
        for (int k = 0; k <= N; ++k)
            c[k] += o.c[k];
        return *this;
    }
    Jet& operator-=(const Jet& o)
    {
        for (int k = 0; k <= N; ++k)
            c[k] -= o.c[k];
        return *this;
    }
    Jet& operator+=(T s)
    {
        c[0] += s;
        return *this;
    }
    Jet& operator-=(T s)
    {
        c[0] -= s;
        return *this;
    }
    Jet& operator*=(T s)
    {
        for (auto& v : c)
            v *= s;
        return *this;
    }
};

template <class T, int N>
Jet<T, N> operator+(Jet<T, N> a, const Jet<T, N>& b) { return a += b; }
template <class T, int N>
Jet<T, N> operator-(Jet<T, N> a, const Jet<T, N>& b) { return a -= b; }
template <class T, int N>
Jet<T, N> operator+(Jet<T, N> a, T s) { return a += s; }
template <class T, int N>
Jet<T, N> operator+(T s, Jet<T, N> a) { return a += s; }
template <class T, int N>
Jet<T, N> operator-(Jet<T, N> a, T s) { return a -= s; }
template <class T, int N>
Jet<T, N> operator-(T s, const Jet<T, N>& a) { return (-a) += s; }
template <class T, int N>
Jet<T, N> operator*(Jet<T, N> a, T s) { return a *= s; }
template <class T, int N>
Jet<T, N> operator*(T s, Jet<T, N> a) { return a *= s; }

template <class T, int N>
Jet<T, N> operator*(const Jet<T, N>& a, const Jet<T, N>& b)
{
    Jet<T, N> r;
    for (int k = 0; k <= N; ++k) {
        T acc(0);
        for (int i = 0; i <= k; ++i)
            acc += a.c[i] * b.c[k - i];
        r.c[k] = acc;
    }
    return r;
}

template <class T, int N>
Jet<T, N> operator/(const Jet<T, N>& a, const Jet<T, N>& b)
{
    Jet<T, N> r;
    const T inv = T(1) / b.c[0];
    for (int k = 0; k <= N; ++k) {
        T acc = a.c[k];
        for (int i = 1; i <= k; ++i)
            acc -= b.c[i] * r.c[k - i];
        r.c[k] = acc * inv;
    }
    return r;
}

template <class T, int N>
Jet<T, N> operator/(T s, const Jet<T, N>& b) { return Jet<T, N>::constant(s) / b; }
template <class T, int N>
Jet<T, N> operator/(Jet<T, N> a, T s) { return a *= (T(1) / s); }

template <class T, int N>
Jet<T, N> sqrt(const Jet<T, N>& a)
{
    using std::sqrt;
    Jet<T, N> r;
    r.c[0] = sqrt(a.c[0]);
    const T inv2 = T(1) / (T(2) * r.c[0]);
    for (int k = 1; k <= N; ++k) {
        T acc = a.c[k];
        for (int i = 1; i < k; ++i)
            acc -= r.c[i] * r.c[k - i];
        r.c[k] = acc * inv2;
    }
    return r;
}

template <class T, int N>
Jet<T, N> log(const Jet<T, N>& a)
{
    using std::log;
    Jet<T, N> r;
    r.c[0] = log(a.c[0]);
    const T inv = T(1) / a.c[0];
    for (int k = 1; k <= N; ++k) {
        T acc = a.c[k];
        for (int i = 1; i < k; ++i)
            acc -= (T(i) / T(k)) * r.c[i] * a.c[k - i];
        r.c[k] = acc * inv;
    }
    return r;
}

/// Real arctangent: b' = a' / (1 + a^2).
template <int N>
Jet<double, N> atan(const Jet<double, N>& a)
{
    const auto d = Jet<double, N>::constant(1.0) + a * a;
    Jet<double, N> r;
    r.c[0] = std::atan(a.c[0]);
    const double inv = 1.0 / d.c[0];
    for (int k = 1; k <= N; ++k) {
        double acc = a.c[k];
        for (int i = 1; i < k; ++i)
            acc -= (double(i) / double(k)) * r.c[i] * d.c[k - i];
        r.c[k] = acc * inv;
    }
    return r;
}

template <int N>
Jet<double, N> real(const Jet<std::complex<double>, N>& a)
{
    Jet<double, N> r;
    for (int k = 0; k <= N; ++k)
        r.c[k] = a.c[k].real();
    return r;
}

template <int N>
Jet<double, N> imag(const Jet<std::complex<double>, N>& a)
{
    Jet<double, N> r;
    for (int k = 0; k <= N; ++k)
        r.c[k] = a.c[k].imag();
    return r;
}

template <int N>
Jet<std::complex<double>, N> to_complex(const Jet<double, N>& a)
{
    Jet<std::complex<double>, N> r;
    for (int k = 0; k <= N; ++k)
        r.c[k] = a.c[k];
    return r;
}

} // namespace groundsound

#endif
