#include "cprojlab/quad.hpp"

#include <cmath>

namespace cpl {

glrule gauss_legendre01(int n) {
    glrule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; i++) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 1.0;
        for (int it = 0; it < 100; it++) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; j++) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = 0.5 * (1.0 - z);
        r.x[n - 1 - i] = 0.5 * (1.0 + z);
        r.w[i] = r.w[n - 1 - i] = 1.0 / ((1.0 - z * z) * pp * pp);
    }
    return r;
}

jet radial_scale(const jet& a, double t) {
    jet r = a;
    const int m = a.dim();
    if (a.order() >= 1)
        for (int i = 0; i < m; i++) r.d1(i) = t * a.d1(i);
    if (a.order() >= 2)
        for (int i = 0; i < m; i++)
            for (int j = i; j < m; j++) r.d2(i, j) = t * t * a.d2(i, j);
    if (a.order() >= 3)
        for (int i = 0; i < m; i++)
            for (int j = i; j < m; j++)
                for (int k = j; k < m; k++) r.d3(i, j, k) = t * t * t * a.d3(i, j, k);
    return r;
}

} // namespace cpl
