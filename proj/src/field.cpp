#include "cprojlab/field.hpp"

namespace cpl {

point box::center() const {
    point c(dim());
    for (int i = 0; i < dim(); i++) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
}

bool box::contains(const point& p, double pad) const {
    for (int i = 0; i < dim(); i++)
        if (p[i] < lo[i] - pad || p[i] > hi[i] + pad) return false;
    return true;
}

box box::shrunk(double frac) const {
    box b = *this;
    for (int i = 0; i < dim(); i++) {
        double c = 0.5 * (lo[i] + hi[i]), h = 0.5 * (hi[i] - lo[i]) * frac;
        b.lo[i] = c - h;
        b.hi[i] = c + h;
    }
    return b;
}

namespace {

constexpr int primes[jet::max_dim] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(int base, long long i) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

} // namespace

std::vector<point> halton_points(const box& b, int count, int offset) {
    const int m = b.dim();
    std::vector<point> pts(count, point(m));
    for (int c = 0; c < count; c++)
        for (int d = 0; d < m; d++) {
            double u = radical_inverse(primes[d], offset + c + 1);
            pts[c][d] = b.lo[d] + (b.hi[d] - b.lo[d]) * u;
        }
    return pts;
}

tensor_field constant_field(int dim, int nup, int ndn, std::vector<double> comps) {
    tensor_field f;
    f.dim = dim;
    f.nup = nup;
    f.ndn = ndn;
    f.eval = [dim, comps = std::move(comps)](const point&, int order, std::vector<jet>& out) {
        out.assign(comps.size(), jet(dim, order, 0.0));
        for (size_t i = 0; i < comps.size(); i++) out[i].value() = comps[i];
    };
    return f;
}

tensor_field field_lin(double a, const tensor_field& F, double b, const tensor_field& G) {
    tensor_field r;
    r.dim = F.dim;
    r.nup = F.nup;
    r.ndn = F.ndn;
    r.eval = [a, F, b, G](const point& p, int order, std::vector<jet>& out) {
        F.eval(p, order, out);
        std::vector<jet> tmp;
        G.eval(p, order, tmp);
        for (size_t i = 0; i < out.size(); i++) {
            out[i] *= a;
            out[i] += tmp[i] * b;
        }
    };
    return r;
}

std::vector<double> values_of(const std::vector<jet>& comps) {
    std::vector<double> v(comps.size());
    for (size_t i = 0; i < comps.size(); i++) v[i] = comps[i].value();
    return v;
}

std::vector<jet> mat_mul(const std::vector<jet>& a, const std::vector<jet>& b, int n) {
    const int m = a[0].dim(), ord = a[0].order();
    std::vector<jet> r(n * n, jet(m, ord, 0.0));
    for (int i = 0; i < n; i++)
        for (int k = 0; k < n; k++)
            for (int j = 0; j < n; j++)
                r[i * n + j] += jet::mul(a[i * n + k], b[k * n + j]);
    return r;
}

} // namespace cpl
