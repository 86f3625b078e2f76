#include "cprojlab/kahler.hpp"

#include <algorithm>
#include <cmath>

namespace cpl {

tensor_field omega_field(const kahler_structure& K) {
    tensor_field om;
    om.dim = K.g.dim;
    om.nup = 0;
    om.ndn = 2;
    const tensor_field g = K.g, J = K.J;
    om.eval = [g, J](const point& p, int order, std::vector<jet>& out) {
        const int m = g.dim;
        std::vector<jet> gj, Jj;
        g.eval(p, order, gj);
        J.eval(p, order, Jj);
        out.assign(m * m, jet(m, order, 0.0));
        for (int i = 0; i < m; i++)
            for (int j = 0; j < m; j++)
                for (int s = 0; s < m; s++)
                    out[i * m + j] += jet::mul(gj[i * m + s], Jj[s * m + j]);
    };
    return om;
}

double kahler_residuals_t::worst() const {
    return std::max({hermitian, jsq, nijenhuis, nabla_j, domega, dtau});
}

kahler_residuals_t kahler_residuals(const kahler_structure& K, const point& p) {
    const int m = K.g.dim;
    std::vector<jet> g = K.g.at(p, 1);
    std::vector<jet> J = K.J.at(p, 1);
    kahler_residuals_t r{0, 0, 0, 0, 0, 0};

    for (int i = 0; i < m; i++)
        for (int j = 0; j < m; j++) {
            double herm = -g[i * m + j].value();
            double jsq = (i == j) ? 1.0 : 0.0;
            for (int s = 0; s < m; s++) {
                jsq += J[i * m + s].value() * J[s * m + j].value();
                for (int t = 0; t < m; t++)
                    herm += J[s * m + i].value() * g[s * m + t].value() * J[t * m + j].value();
            }
            r.hermitian = std::max(r.hermitian, std::abs(herm));
            r.jsq = std::max(r.jsq, std::abs(jsq));
        }

    // Nijenhuis tensor N^i_{ab}
    for (int i = 0; i < m; i++)
        for (int a = 0; a < m; a++)
            for (int b = a + 1; b < m; b++) {
                double n = 0.0;
                for (int s = 0; s < m; s++)
                    n += J[s * m + a].value() * J[i * m + b].d1(s) -
                         J[s * m + b].value() * J[i * m + a].d1(s) -
                         J[i * m + s].value() * (J[s * m + b].d1(a) - J[s * m + a].d1(b));
                r.nijenhuis = std::max(r.nijenhuis, std::abs(n));
            }

    // (nabla_k J)^i_j
    double G[jet::max_dim * jet::max_dim * jet::max_dim];
    christoffel_vals(g, m, G);
    for (int k = 0; k < m; k++)
        for (int i = 0; i < m; i++)
            for (int j = 0; j < m; j++) {
                double v = J[i * m + j].d1(k);
                for (int s = 0; s < m; s++)
                    v += G[(i * m + k) * m + s] * J[s * m + j].value() -
                         G[(s * m + k) * m + j] * J[i * m + s].value();
                r.nabla_j = std::max(r.nabla_j, std::abs(v));
            }

    // omega_ij = g_is J^s_j and its exterior derivative
    std::vector<jet> om(m * m, jet(m, 1, 0.0));
    for (int i = 0; i < m; i++)
        for (int j = 0; j < m; j++)
            for (int s = 0; s < m; s++) om[i * m + j] += jet::mul(g[i * m + s], J[s * m + j]);
    for (int a = 0; a < m; a++)
        for (int b = a + 1; b < m; b++)
            for (int c = b + 1; c < m; c++) {
                double d = om[b * m + c].d1(a) + om[c * m + a].d1(b) + om[a * m + b].d1(c);
                r.domega = std::max(r.domega, std::abs(d));
            }

    if (K.has_tau()) {
        std::vector<jet> tau = K.tau.at(p, 1);
        for (int i = 0; i < m; i++)
            for (int j = i + 1; j < m; j++) {
                double d = tau[j].d1(i) - tau[i].d1(j) - om[i * m + j].value();
                r.dtau = std::max(r.dtau, std::abs(d));
            }
    }
    return r;
}

einstein_fit einstein_residual(const std::vector<jet>& g2, int m) {
    std::vector<double> ric = ricci_from_riemann(riemann_vals(g2, m), m);
    std::vector<double> gi = metric_inverse_vals(g2, m);
    double scal = 0.0;
    for (int a = 0; a < m; a++)
        for (int b = 0; b < m; b++) scal += gi[a * m + b] * ric[a * m + b];
    einstein_fit f{scal / m, 0.0};
    for (int a = 0; a < m; a++)
        for (int b = 0; b < m; b++)
            f.residual = std::max(f.residual,
                                  std::abs(ric[a * m + b] - f.c * g2[a * m + b].value()));
    return f;
}

hol_curv_fit holomorphic_curvature_residual(const std::vector<jet>& g2,
                                            const std::vector<jet>& J0, int m) {
    std::vector<double> R = riemann_vals(g2, m);
    std::vector<double> om(m * m, 0.0);
    for (int i = 0; i < m; i++)
        for (int j = 0; j < m; j++)
            for (int s = 0; s < m; s++)
                om[i * m + j] += g2[i * m + s].value() * J0[s * m + j].value();

    std::vector<double> H(m * m * m * m);
    auto gv = [&](int i, int j) { return g2[i * m + j].value(); };
    auto Jv = [&](int i, int j) { return J0[i * m + j].value(); };
    for (int i = 0; i < m; i++)
        for (int j = 0; j < m; j++)
            for (int k = 0; k < m; k++)
                for (int l = 0; l < m; l++)
                    H[((i * m + j) * m + k) * m + l] =
                        0.25 * (gv(j, l) * (i == k ? 1.0 : 0.0) - gv(j, k) * (i == l ? 1.0 : 0.0) +
                                om[j * m + l] * Jv(i, k) - om[j * m + k] * Jv(i, l) +
                                2.0 * om[k * m + l] * Jv(i, j));

    double hh = 0.0, rh = 0.0, rmax = 0.0;
    for (size_t s = 0; s < R.size(); s++) {
        hh += H[s] * H[s];
        rh += R[s] * H[s];
        rmax = std::max(rmax, std::abs(R[s]));
    }
    hol_curv_fit f{hh > 0.0 ? rh / hh : 0.0, 0.0};
    double scale = std::max(1.0, rmax);
    for (size_t s = 0; s < R.size(); s++)
        f.residual = std::max(f.residual, std::abs(R[s] - f.c * H[s]) / scale);
    return f;
}

} // namespace cpl
