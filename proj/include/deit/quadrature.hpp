#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace deit {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};

/// Composite-trapezoid weights for n uniformly spaced nodes with spacing h.
inline std::vector<double> trapezoid_weights(std::size_t n, double h)
{
    std::vector<double> w(n, h);
    if (n == 1) {
        w[0] = 0.0;
        return w;
    }
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
}

template <class T>
T trapezoid(std::span<const T> f, double h)
{
    T s{};
    if (f.size() < 2)
        return s;
    for (std::size_t i = 1; i + 1 < f.size(); ++i)
        s += f[i];
    return h * (s + 0.5 * (f.front() + f.back()));
}

/// Running trapezoid integral: out[0] = 0, out[i] = int_0^{x_i} f.
template <class T>
std::vector<T> cumulative_trapezoid(std::span<const T> f, double h)
{
    std::vector<T> out(f.size(), T{});
    for (std::size_t i = 1; i < f.size(); ++i)
        out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return out;
}

inline std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> x(n);
    if (n == 1) {
        x[0] = a;
        return x;
    }
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = a + h * static_cast<double>(i);
    x.back() = b;
    return x;
}

} // namespace deit
