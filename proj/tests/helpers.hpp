#pragma once
#include <cmath>
#include <functional>
#include <vector>

// Central finite differences. These act as oracles independent of the jet
// recurrences, so a bug in the Taylor arithmetic cannot hide in the tests.

using scalar_fn = std::function<double(const std::vector<double>&)>;

inline double fd1(const scalar_fn& f, std::vector<double> x, int i, double h = 1e-5) {
    x[i] += h;
    double fp = f(x);
    x[i] -= 2 * h;
    double fm = f(x);
    return (fp - fm) / (2 * h);
}

inline double fd2(const scalar_fn& f, std::vector<double> x, int i, int j, double h = 1e-4) {
    if (i == j) {
        double f0 = f(x);
        x[i] += h;
        double fp = f(x);
        x[i] -= 2 * h;
        double fm = f(x);
        return (fp - 2 * f0 + fm) / (h * h);
    }
    std::vector<double> p = x;
    p[i] += h; p[j] += h; double fpp = f(p);
    p = x; p[i] += h; p[j] -= h; double fpm = f(p);
    p = x; p[i] -= h; p[j] += h; double fmp = f(p);
    p = x; p[i] -= h; p[j] -= h; double fmm = f(p);
    return (fpp - fpm - fmp + fmm) / (4 * h * h);
}

inline double fd3(const scalar_fn& f, std::vector<double> x, int i, int j, int k, double h = 1e-3) {
    auto g = [&](const std::vector<double>& y) { return fd2(f, y, j, k, h); };
    return fd1(g, x, i, h);
}

inline double rel_err(double got, double want, double floor = 1.0) {
    return std::abs(got - want) / std::max(std::abs(want), floor);
}
