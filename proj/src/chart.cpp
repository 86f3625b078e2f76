#include "cprojlab/chart.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace cpl {

namespace {

using emat = Eigen::MatrixXd;

emat value_matrix(const std::vector<jet>& g, int m) {
    emat G(m, m);
    for (int i = 0; i < m; i++)
        for (int j = 0; j < m; j++) G(i, j) = g[i * m + j].value();
    return G;
}

emat inverse_checked(const emat& G) {
    Eigen::PartialPivLU<emat> lu(G);
    double det = lu.determinant();
    if (!std::isfinite(det) || std::abs(det) < 1e-14)
        throw error(errc::degenerate_metric, "metric value matrix is singular");
    return lu.inverse();
}

} // namespace

void christoffel_vals(const std::vector<jet>& g, int m, double* out) {
    emat gi = inverse_checked(value_matrix(g, m));
    // dg[k][i*m+j] = d_k g_ij
    for (int j = 0; j < m; j++)
        for (int k = j; k < m; k++) {
            // w_s = (d_j g_sk + d_k g_sj - d_s g_jk) / 2
            double w[jet::max_dim];
            for (int s = 0; s < m; s++)
                w[s] = 0.5 * (g[s * m + k].d1(j) + g[s * m + j].d1(k) - g[j * m + k].d1(s));
            for (int i = 0; i < m; i++) {
                double acc = 0.0;
                for (int s = 0; s < m; s++) acc += gi(i, s) * w[s];
                out[(i * m + j) * m + k] = acc;
                out[(i * m + k) * m + j] = acc;
            }
        }
}

std::vector<jet> christoffel_jets(const std::vector<jet>& g, int m) {
    const int ord = g[0].order();
    if (ord < 1) throw error(errc::jet_order, "christoffel_jets needs metric order >= 1");
    std::vector<jet> gi = jet_mat_inverse(g, m);
    std::vector<jet> G(m * m * m, jet(g[0].dim(), ord - 1, 0.0));
    for (int j = 0; j < m; j++)
        for (int k = j; k < m; k++) {
            for (int i = 0; i < m; i++) {
                jet acc(g[0].dim(), ord - 1, 0.0);
                for (int s = 0; s < m; s++) {
                    jet w = (g[s * m + k].partial(j) + g[s * m + j].partial(k) -
                             g[j * m + k].partial(s)) * 0.5;
                    acc += jet::mul(gi[i * m + s].truncated(ord - 1), w);
                }
                G[(i * m + j) * m + k] = acc;
                G[(i * m + k) * m + j] = acc;
            }
        }
    return G;
}

std::vector<double> riemann_vals(const std::vector<jet>& g, int m) {
    if (g[0].order() < 2) throw error(errc::jet_order, "riemann_vals needs metric order >= 2");
    std::vector<jet> G = christoffel_jets(g, m); // order >= 1
    auto at = [&](int i, int j, int k) -> const jet& { return G[(i * m + j) * m + k]; };
    std::vector<double> R(m * m * m * m);
    for (int i = 0; i < m; i++)
        for (int j = 0; j < m; j++)
            for (int k = 0; k < m; k++)
                for (int l = 0; l < m; l++) {
                    double r = at(i, l, j).d1(k) - at(i, k, j).d1(l);
                    for (int s = 0; s < m; s++)
                        r += at(i, k, s).value() * at(s, l, j).value() -
                             at(i, l, s).value() * at(s, k, j).value();
                    R[((i * m + j) * m + k) * m + l] = r;
                }
    return R;
}

std::vector<double> ricci_from_riemann(const std::vector<double>& R, int m) {
    std::vector<double> ric(m * m, 0.0);
    for (int a = 0; a < m; a++)
        for (int b = 0; b < m; b++) {
            double r = 0.0;
            for (int i = 0; i < m; i++) r += R[((i * m + b) * m + i) * m + a];
            ric[a * m + b] = r;
        }
    return ric;
}

std::vector<double> metric_inverse_vals(const std::vector<jet>& g, int m) {
    emat gi = inverse_checked(value_matrix(g, m));
    std::vector<double> out(m * m);
    for (int i = 0; i < m; i++)
        for (int j = 0; j < m; j++) out[i * m + j] = gi(i, j);
    return out;
}

double scalar_curvature(const std::vector<jet>& g, int m) {
    std::vector<double> ric = ricci_from_riemann(riemann_vals(g, m), m);
    std::vector<double> gi = metric_inverse_vals(g, m);
    double s = 0.0;
    for (int a = 0; a < m; a++)
        for (int b = 0; b < m; b++) s += gi[a * m + b] * ric[a * m + b];
    return s;
}

tensor_field covd(const tensor_field& T, const tensor_field& g) {
    tensor_field r;
    r.dim = T.dim;
    r.nup = T.nup;
    r.ndn = T.ndn + 1;
    const int m = T.dim, p = T.nup, q = T.ndn;
    r.eval = [T, g, m, p, q](const point& pt, int order, std::vector<jet>& out) {
        std::vector<jet> tj, gj;
        T.eval(pt, order + 1, tj);
        g.eval(pt, order + 1, gj);
        std::vector<jet> G = christoffel_jets(gj, m); // order == order
        const int rank = p + q;
        int nin = 1;
        for (int i = 0; i < rank; i++) nin *= m;
        out.assign(nin * m, jet(m, order, 0.0));

        std::vector<int> idx(rank + 1, 0); // output tuple: up[0..p), k, down[0..q)
        const int nout = nin * m;
        for (int flat = 0; flat < nout; flat++) {
            int rem = flat;
            for (int s = rank; s >= 0; s--) {
                idx[s] = rem % m;
                rem /= m;
            }
            const int k = idx[p];
            // input tuple without the derivative slot
            auto in_flat = [&](int slot, int repl) {
                int f = 0;
                for (int s = 0; s <= rank; s++) {
                    if (s == p) continue;
                    int v = (s == slot) ? repl : idx[s];
                    f = f * m + v;
                }
                return f;
            };
            jet acc = tj[in_flat(-1, 0)].partial(k);
            for (int a = 0; a < p; a++) {
                const int ia = idx[a];
                for (int s = 0; s < m; s++)
                    acc += jet::mul(G[(ia * m + k) * m + s], tj[in_flat(a, s)].truncated(order));
            }
            for (int b = 0; b < q; b++) {
                const int jb = idx[p + 1 + b];
                for (int s = 0; s < m; s++)
                    acc -= jet::mul(G[(s * m + k) * m + jb],
                                    tj[in_flat(p + 1 + b, s)].truncated(order));
            }
            out[flat] = acc;
        }
    };
    return r;
}

double polyline::length() const {
    double L = 0.0;
    for (size_t s = 0; s + 1 < verts.size(); s++) {
        double d2 = 0.0;
        for (size_t i = 0; i < verts[s].size(); i++) {
            double d = verts[s + 1][i] - verts[s][i];
            d2 += d * d;
        }
        L += std::sqrt(d2);
    }
    return L;
}

polyline coord_rectangle(const point& p, int a, int b, double sa, double sb) {
    polyline pl;
    point q = p;
    pl.verts.push_back(q);
    q[a] += sa;
    pl.verts.push_back(q);
    q[b] += sb;
    pl.verts.push_back(q);
    q[a] -= sa;
    pl.verts.push_back(q);
    q[b] -= sb;
    pl.verts.push_back(q);
    return pl;
}

namespace {

// M^i_k = -Gamma^i_{jk} u^j at the given point
void transport_matrix(const tensor_field& g, const point& x, const double* u, int m, double* M,
                      std::vector<jet>& buf) {
    g.eval(x, 1, buf);
    double G[jet::max_dim * jet::max_dim * jet::max_dim];
    christoffel_vals(buf, m, G);
    for (int i = 0; i < m; i++)
        for (int k = 0; k < m; k++) {
            double acc = 0.0;
            for (int j = 0; j < m; j++) acc += G[(i * m + j) * m + k] * u[j];
            M[i * m + k] = -acc;
        }
}

} // namespace

void transport_frame(const tensor_field& g, const polyline& path, std::vector<double>& frame,
                     int ncols, int steps_per_unit) {
    const int m = g.dim;
    std::vector<jet> buf;
    std::vector<double> M0(m * m), Mh(m * m), M1(m * m);
    std::vector<double> k1(m * ncols), k2(m * ncols), k3(m * ncols), k4(m * ncols), tmp(m * ncols);
    auto apply = [&](const double* M, const double* v, double* out) {
        for (int c = 0; c < ncols; c++)
            for (int i = 0; i < m; i++) {
                double acc = 0.0;
                for (int k = 0; k < m; k++) acc += M[i * m + k] * v[k * ncols + c];
                out[i * ncols + c] = acc;
            }
    };
    for (size_t s = 0; s + 1 < path.verts.size(); s++) {
        const point& a = path.verts[s];
        const point& b = path.verts[s + 1];
        double len2 = 0.0;
        point u(m);
        for (int i = 0; i < m; i++) {
            u[i] = b[i] - a[i];
            len2 += u[i] * u[i];
        }
        double len = std::sqrt(len2);
        if (len == 0.0) continue;
        int nsteps = std::max(1, (int)std::ceil(len * steps_per_unit));
        double h = 1.0 / nsteps;
        point x(m);
        for (int st = 0; st < nsteps; st++) {
            double t0 = st * h;
            auto pos = [&](double t) {
                for (int i = 0; i < m; i++) x[i] = a[i] + t * u[i];
                return x;
            };
            transport_matrix(g, pos(t0), u.data(), m, M0.data(), buf);
            transport_matrix(g, pos(t0 + 0.5 * h), u.data(), m, Mh.data(), buf);
            transport_matrix(g, pos(t0 + h), u.data(), m, M1.data(), buf);
            apply(M0.data(), frame.data(), k1.data());
            for (size_t i = 0; i < tmp.size(); i++) tmp[i] = frame[i] + 0.5 * h * k1[i];
            apply(Mh.data(), tmp.data(), k2.data());
            for (size_t i = 0; i < tmp.size(); i++) tmp[i] = frame[i] + 0.5 * h * k2[i];
            apply(Mh.data(), tmp.data(), k3.data());
            for (size_t i = 0; i < tmp.size(); i++) tmp[i] = frame[i] + h * k3[i];
            apply(M1.data(), tmp.data(), k4.data());
            for (size_t i = 0; i < frame.size(); i++)
                frame[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        }
    }
}

std::vector<double> parallel_transport(const tensor_field& g, const polyline& path,
                                       std::vector<double> v, int steps_per_unit) {
    transport_frame(g, path, v, 1, steps_per_unit);
    return v;
}

geodesic_result geodesic_shoot(const tensor_field& g, const point& x0, const point& v0,
                               double time, int steps_per_unit) {
    const int m = g.dim;
    std::vector<jet> buf;
    double G[jet::max_dim * jet::max_dim * jet::max_dim];
    auto accel = [&](const point& x, const point& v, point& a) {
        g.eval(x, 1, buf);
        christoffel_vals(buf, m, G);
        for (int i = 0; i < m; i++) {
            double acc = 0.0;
            for (int j = 0; j < m; j++)
                for (int k = 0; k < m; k++) acc += G[(i * m + j) * m + k] * v[j] * v[k];
            a[i] = -acc;
        }
    };
    auto energy = [&](const point& x, const point& v) {
        g.eval(x, 0, buf);
        double e = 0.0;
        for (int i = 0; i < m; i++)
            for (int j = 0; j < m; j++) e += buf[i * m + j].value() * v[i] * v[j];
        return e;
    };

    double speed = 0.0;
    for (double c : v0) speed += c * c;
    speed = std::sqrt(speed);
    int nsteps = std::max(1, (int)std::ceil(std::abs(time) * std::max(speed, 1.0) * steps_per_unit));
    double h = time / nsteps;

    point x = x0, v = v0;
    point kx1(m), kv1(m), kx2(m), kv2(m), kx3(m), kv3(m), kx4(m), kv4(m), xt(m), vt(m);
    const double e0 = energy(x, v);
    double drift = 0.0;
    for (int st = 0; st < nsteps; st++) {
        kx1 = v;
        accel(x, v, kv1);
        for (int i = 0; i < m; i++) { xt[i] = x[i] + 0.5 * h * kx1[i]; vt[i] = v[i] + 0.5 * h * kv1[i]; }
        kx2 = vt;
        accel(xt, vt, kv2);
        for (int i = 0; i < m; i++) { xt[i] = x[i] + 0.5 * h * kx2[i]; vt[i] = v[i] + 0.5 * h * kv2[i]; }
        kx3 = vt;
        accel(xt, vt, kv3);
        for (int i = 0; i < m; i++) { xt[i] = x[i] + h * kx3[i]; vt[i] = v[i] + h * kv3[i]; }
        kx4 = vt;
        accel(xt, vt, kv4);
        for (int i = 0; i < m; i++) {
            x[i] += h / 6.0 * (kx1[i] + 2 * kx2[i] + 2 * kx3[i] + kx4[i]);
            v[i] += h / 6.0 * (kv1[i] + 2 * kv2[i] + 2 * kv3[i] + kv4[i]);
        }
        drift = std::max(drift, std::abs(energy(x, v) - e0) / std::max(std::abs(e0), 1e-300));
    }
    return {x, v, drift};
}

} // namespace cpl
