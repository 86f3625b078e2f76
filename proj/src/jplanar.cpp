#include "cprojlab/jplanar.hpp"
#include "cprojlab/chart.hpp"

#include <cmath>
#include <random>

namespace cpl {

namespace {

double poly_at(const std::vector<double>& coeffs, double t) {
    double v = 0.0;
    for (size_t i = coeffs.size(); i > 0; i--) v = v * t + coeffs[i - 1];
    return v;
}

double norm2(const point& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// acceleration of the reparametrized geodesic flow at (x, v, t)
point flow_rhs(const kahler_structure& K, const point& x, const point& v, double t,
               const std::vector<double>& alpha, const std::vector<double>& beta) {
    int m = K.g.dim;
    std::vector<double> G(m * m * m);
    christoffel_vals(K.g.at(x, 1), m, G.data());
    std::vector<double> J = values_of(K.J.at(x, 0));
    double a = poly_at(alpha, t), b = poly_at(beta, t);
    point out(m, 0.0);
    for (int i = 0; i < m; i++) {
        double s = 0.0;
        for (int j = 0; j < m; j++) {
            double gv = 0.0;
            for (int k = 0; k < m; k++) gv += G[(i * m + j) * m + k] * v[k];
            s -= gv * v[j];
            s += (i == j ? a : 0.0) * v[j] + b * J[i * m + j] * v[j];
        }
        out[i] = s;
    }
    return out;
}

jplanar_curve integrate_core(const kahler_structure& K, const box& domain, const point& p,
                             const point& X, const std::vector<double>& alpha,
                             const std::vector<double>& beta, double T, int steps, bool clip) {
    int m = K.g.dim;
    if ((int)p.size() != m || (int)X.size() != m || domain.dim() != m)
        throw error(errc::bad_dimension, "curve start must match the chart");
    if (steps < 8 || T <= 0.0) throw error(errc::bad_params, "need a positive horizon");
    if (norm2(X) < 1e-12) throw error(errc::zero_velocity, "vanishing start vector");
    if (!domain.contains(p)) throw error(errc::path_leaves_domain, "start outside the domain");

    jplanar_curve c;
    c.dt = T / steps;
    c.samples.push_back(p);
    c.velocities.push_back(X);
    point x = p, v = X;
    for (int s = 0; s < steps; s++) {
        double t = s * c.dt, h = c.dt;
        point k1 = flow_rhs(K, x, v, t, alpha, beta);
        point x2(m), v2(m);
        for (int i = 0; i < m; i++) {
            x2[i] = x[i] + 0.5 * h * v[i];
            v2[i] = v[i] + 0.5 * h * k1[i];
        }
        point k2 = flow_rhs(K, x2, v2, t + 0.5 * h, alpha, beta);
        point x3(m), v3(m);
        for (int i = 0; i < m; i++) {
            x3[i] = x[i] + 0.5 * h * v2[i];
            v3[i] = v[i] + 0.5 * h * k2[i];
        }
        point k3 = flow_rhs(K, x3, v3, t + 0.5 * h, alpha, beta);
        point x4(m), v4(m);
        for (int i = 0; i < m; i++) {
            x4[i] = x[i] + h * v3[i];
            v4[i] = v[i] + h * k3[i];
        }
        point k4 = flow_rhs(K, x4, v4, t + h, alpha, beta);
        for (int i = 0; i < m; i++) {
            x[i] += h / 6.0 * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
            v[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if (!domain.contains(x)) {
            if (clip) return c;
            throw error(errc::path_leaves_domain, "curve leaves the chart domain");
        }
        c.samples.push_back(x);
        c.velocities.push_back(v);
    }
    return c;
}

} // namespace

jplanar_curve integrate_jplanar(const kahler_structure& K, const box& domain, const point& p,
                                const point& X, const std::vector<double>& alpha,
                                const std::vector<double>& beta, double T, int steps) {
    return integrate_core(K, domain, p, X, alpha, beta, T, steps, false);
}

jplanar_curve integrate_jplanar_clipped(const kahler_structure& K, const box& domain,
                                        const point& p, const point& X,
                                        const std::vector<double>& alpha,
                                        const std::vector<double>& beta, double T, int steps) {
    return integrate_core(K, domain, p, X, alpha, beta, T, steps, true);
}

jplanar_fit jplanar_residual(const kahler_structure& K, const jplanar_curve& c) {
    int m = K.g.dim;
    int n = c.size();
    if (n < 7) throw error(errc::bad_params, "curve too short for the difference stencil");

    jplanar_fit fit;
    for (int i = 2; i < n - 2; i++) {
        const point& x = c.samples[i];
        const point& v = c.velocities[i];
        if (norm2(v) < 1e-12 * (1.0 + norm2(x)))
            throw error(errc::zero_velocity, "curve velocity vanishes at a sample");

        std::vector<double> G(m * m * m);
        christoffel_vals(K.g.at(x, 1), m, G.data());
        std::vector<double> J = values_of(K.J.at(x, 0));

        point acc(m, 0.0), jv(m, 0.0);
        for (int a = 0; a < m; a++) {
            acc[a] = (-c.velocities[i + 2][a] + 8.0 * c.velocities[i + 1][a] -
                      8.0 * c.velocities[i - 1][a] + c.velocities[i - 2][a]) /
                     (12.0 * c.dt);
            for (int j = 0; j < m; j++) {
                for (int k = 0; k < m; k++) acc[a] += G[(a * m + j) * m + k] * v[j] * v[k];
                jv[a] += J[a * m + j] * v[j];
            }
        }

        // least squares coefficients of acc against v and Jv
        double vv = 0.0, vj = 0.0, jj = 0.0, av = 0.0, aj = 0.0;
        for (int a = 0; a < m; a++) {
            vv += v[a] * v[a];
            vj += v[a] * jv[a];
            jj += jv[a] * jv[a];
            av += acc[a] * v[a];
            aj += acc[a] * jv[a];
        }
        double det = vv * jj - vj * vj;
        fit.alpha.push_back((av * jj - aj * vj) / det);
        fit.beta.push_back((aj * vv - av * vj) / det);

        // defect of acc off span{v, Jv}, in curvature units so that plain
        // geodesics score near zero; on two dimensional charts the span is
        // everything and the residual stays zero
        if (m > 2) {
            double nv = norm2(v);
            point u1(m), u2(m);
            for (int a = 0; a < m; a++) u1[a] = v[a] / nv;
            double ju1 = 0.0;
            for (int a = 0; a < m; a++) ju1 += jv[a] * u1[a];
            for (int a = 0; a < m; a++) u2[a] = jv[a] - ju1 * u1[a];
            double nw = norm2(u2); // positive: J has no real eigenvalue
            for (int a = 0; a < m; a++) u2[a] /= nw;
            double a1 = 0.0, a2 = 0.0;
            for (int a = 0; a < m; a++) {
                a1 += acc[a] * u1[a];
                a2 += acc[a] * u2[a];
            }
            double off = 0.0;
            for (int a = 0; a < m; a++) {
                double r = acc[a] - a1 * u1[a] - a2 * u2[a];
                off += r * r;
            }
            off = std::sqrt(off);
            fit.residual = std::max(fit.residual, off / std::max(norm2(acc), nv * nv));
        }
    }
    return fit;
}

equivalence_report equivalence_probe(const kahler_structure& K, const tensor_field& gt,
                                     const box& domain, int trials, unsigned seed, double T,
                                     int steps) {
    int m = K.g.dim;
    kahler_structure Kt;
    Kt.g = gt;
    Kt.J = K.J;

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0), u11(-1.0, 1.0);
    box inner = domain.shrunk(0.7);

    equivalence_report rep;
    for (int trial = 0; trial < trials; trial++) {
        for (int dir = 0; dir < 2; dir++) {
            const kahler_structure& drive = dir == 0 ? Kt : K;
            const kahler_structure& meter = dir == 0 ? K : Kt;
            jplanar_curve c;
            for (int attempt = 0;; attempt++) {
                if (attempt >= 100)
                    throw error(errc::path_leaves_domain, "no usable geodesic in the domain");
                point p(m), X(m);
                for (int i = 0; i < m; i++) {
                    p[i] = inner.lo[i] + u01(rng) * (inner.hi[i] - inner.lo[i]);
                    X[i] = u11(rng);
                }
                std::vector<jet> g0 = drive.g.at(p, 0);
                double e = 0.0;
                for (int i = 0; i < m; i++)
                    for (int j = 0; j < m; j++) e += g0[i * m + j].value() * X[i] * X[j];
                if (e <= 0.0) continue;
                for (int i = 0; i < m; i++) X[i] /= std::sqrt(e);
                c = integrate_jplanar_clipped(drive, domain, p, X, {}, {}, T, steps);
                if (c.size() >= 16) break;
            }
            double r = jplanar_residual(meter, c).residual;
            (dir == 0 ? rep.forward : rep.backward).push_back(r);
            rep.worst = std::max(rep.worst, r);
        }
    }
    return rep;
}

} // namespace cpl
