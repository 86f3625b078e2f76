#include "cprojlab/catalog.hpp"
#include "cprojlab/conify.hpp"

#include "json.hpp"

#include <cmath>

namespace cpl {

namespace {

// block complex structure for coordinates (x_1..x_n, y_1..y_n)
std::vector<double> std_J_vals(int n) {
    const int m = 2 * n;
    std::vector<double> J(m * m, 0.0);
    for (int a = 0; a < n; a++) {
        J[(n + a) * m + a] = 1.0;
        J[a * m + (n + a)] = -1.0;
    }
    return J;
}

tensor_field linear_tau(int m, const std::vector<double>& om) {
    tensor_field tau;
    tau.dim = m;
    tau.nup = 0;
    tau.ndn = 1;
    tau.eval = [m, om](const point& p, int order, std::vector<jet>& out) {
        out.assign(m, jet(m, order, 0.0));
        for (int j = 0; j < m; j++)
            for (int i = 0; i < m; i++)
                if (om[i * m + j] != 0.0)
                    out[j] += jet::variable(m, order, i, p[i]) * (0.5 * om[i * m + j]);
    };
    return tau;
}

} // namespace

example make_flat(int n) {
    if (n < 1 || 2 * n > jet::max_dim)
        throw error(errc::bad_params, "flat example needs 1 <= n <= 6");
    const int m = 2 * n;
    example e;
    e.name = "flat(n=" + std::to_string(n) + ")";
    e.n = n;
    e.dim = m;
    e.einstein = true;
    e.scal = 0.0;
    e.hol_c = 0.0;

    std::vector<double> id(m * m, 0.0);
    for (int i = 0; i < m; i++) id[i * m + i] = 1.0;
    std::vector<double> J = std_J_vals(n);
    e.K.g = constant_field(m, 0, 2, id);
    e.K.J = constant_field(m, 1, 1, J);
    e.K.tau = linear_tau(m, J); // omega_ij = J^i_j for the euclidean metric
    e.domain.lo.assign(m, -0.8);
    e.domain.hi.assign(m, 0.8);

    // identity solution A = g
    {
        csolution s;
        s.tag = "identity";
        s.A = e.K.g;
        s.lambda = constant_field(m, 0, 1, std::vector<double>(m, 0.0));
        s.mu = constant_field(m, 0, 0, {0.0});
        s.B = 0.0;
        s.mu_zero = true;
        e.solutions.push_back(s);
    }
    // constant hermitian symmetric S = C + J^T C J
    {
        // S = C + J^T C J with C = diag((1+i)/m) is symmetric and hermitian
        std::vector<double> S(m * m, 0.0);
        for (int i = 0; i < m; i++) S[i * m + i] = (1.0 + i) / m;
        for (int i = 0; i < m; i++)
            for (int j = 0; j < m; j++)
                for (int a = 0; a < m; a++)
                    S[i * m + j] += J[a * m + i] * ((1.0 + a) / m) * J[a * m + j];
        csolution s;
        s.tag = "const";
        s.A = constant_field(m, 0, 2, S);
        s.lambda = constant_field(m, 0, 1, std::vector<double>(m, 0.0));
        s.mu = constant_field(m, 0, 0, {0.0});
        s.B = 0.0;
        s.mu_zero = true;
        e.solutions.push_back(s);
    }
    // translation solution with covector c
    {
        std::vector<double> c(m);
        for (int i = 0; i < m; i++) c[i] = 0.4 + 0.3 * std::cos(1.0 + i);
        csolution s;
        s.tag = "translation";
        s.lambda = constant_field(m, 0, 1, c);
        s.mu = constant_field(m, 0, 0, {0.0});
        s.B = 0.0;
        s.mu_zero = true;
        s.A.dim = m;
        s.A.nup = 0;
        s.A.ndn = 2;
        s.A.eval = [m, c, J](const point& p, int order, std::vector<jet>& out) {
            std::vector<jet> x(m);
            for (int i = 0; i < m; i++) x[i] = jet::variable(m, order, i, p[i]);
            std::vector<jet> Jx(m, jet(m, order, 0.0));
            std::vector<double> Jc(m, 0.0);
            for (int i = 0; i < m; i++)
                for (int s2 = 0; s2 < m; s2++) {
                    Jx[i] += x[s2] * J[s2 * m + i];
                    Jc[i] += J[s2 * m + i] * c[s2];
                }
            out.assign(m * m, jet(m, order, 0.0));
            for (int i = 0; i < m; i++)
                for (int j = 0; j < m; j++)
                    out[i * m + j] = x[i] * c[j] + x[j] * c[i] + Jx[i] * Jc[j] + Jx[j] * Jc[i];
        };
        e.solutions.push_back(s);
    }
    // quadratic solution, lambda = x flat, mu = 1
    {
        csolution s;
        s.tag = "quadratic";
        s.B = 0.0;
        s.mu = constant_field(m, 0, 0, {1.0});
        s.lambda.dim = m;
        s.lambda.nup = 0;
        s.lambda.ndn = 1;
        s.lambda.eval = [m](const point& p, int order, std::vector<jet>& out) {
            out.resize(m);
            for (int i = 0; i < m; i++) out[i] = jet::variable(m, order, i, p[i]);
        };
        s.A.dim = m;
        s.A.nup = 0;
        s.A.ndn = 2;
        s.A.eval = [m, J](const point& p, int order, std::vector<jet>& out) {
            std::vector<jet> x(m), Jx(m, jet(m, order, 0.0));
            for (int i = 0; i < m; i++) x[i] = jet::variable(m, order, i, p[i]);
            for (int i = 0; i < m; i++)
                for (int s2 = 0; s2 < m; s2++) Jx[i] += x[s2] * J[s2 * m + i];
            out.assign(m * m, jet(m, order, 0.0));
            for (int i = 0; i < m; i++)
                for (int j = 0; j < m; j++) out[i * m + j] = x[i] * x[j] + Jx[i] * Jx[j];
        };
        e.solutions.push_back(s);
    }
    return e;
}

namespace {

// mu_H = Re(conj(zeta)^T H zeta)/q on CP^n affine chart, zeta = (1, z),
// H = Hr + i Hi hermitian, q = 1 + |z|^2
tensor_field fs_mu_field(int n, std::vector<double> Hr, std::vector<double> Hi) {
    const int m = 2 * n, d = n + 1;
    tensor_field mu;
    mu.dim = m;
    mu.nup = 0;
    mu.ndn = 0;
    mu.eval = [n, m, d, Hr, Hi](const point& p, int order, std::vector<jet>& out) {
        std::vector<jet> u(d, jet(m, order, 0.0)), v(d, jet(m, order, 0.0));
        u[0] = jet(m, order, 1.0);
        for (int a = 0; a < n; a++) {
            u[1 + a] = jet::variable(m, order, a, p[a]);
            v[1 + a] = jet::variable(m, order, n + a, p[n + a]);
        }
        jet q(m, order, 1.0);
        for (int a = 0; a < n; a++) q += u[1 + a] * u[1 + a] + v[1 + a] * v[1 + a];
        jet num(m, order, 0.0);
        for (int j = 0; j < d; j++)
            for (int k = 0; k < d; k++) {
                if (Hr[j * d + k] != 0.0)
                    num += (u[j] * u[k] + v[j] * v[k]) * Hr[j * d + k];
                if (Hi[j * d + k] != 0.0)
                    num -= (u[j] * v[k] - v[j] * u[k]) * Hi[j * d + k];
            }
        out.assign(1, num / q);
    };
    return mu;
}

} // namespace

example make_fubini_study(int n) {
    if (n < 1 || 2 * n > jet::max_dim)
        throw error(errc::bad_params, "fubini_study example needs 1 <= n <= 6");
    const int m = 2 * n;
    example e;
    e.name = "fubini_study(n=" + std::to_string(n) + ")";
    e.n = n;
    e.dim = m;
    e.einstein = true;
    e.scal = 4.0 * n * (n + 1);
    e.hol_c = 4.0;

    e.K.g.dim = m;
    e.K.g.nup = 0;
    e.K.g.ndn = 2;
    e.K.g.eval = [n, m](const point& p, int order, std::vector<jet>& out) {
        std::vector<jet> x(n), y(n);
        for (int a = 0; a < n; a++) {
            x[a] = jet::variable(m, order, a, p[a]);
            y[a] = jet::variable(m, order, n + a, p[n + a]);
        }
        jet q(m, order, 1.0);
        for (int a = 0; a < n; a++) q += x[a] * x[a] + y[a] * y[a];
        jet iq2 = jet::recip(q * q);
        out.assign(m * m, jet(m, order, 0.0));
        for (int a = 0; a < n; a++)
            for (int b = 0; b < n; b++) {
                jet aa = ((a == b ? q : jet(m, order, 0.0)) - x[a] * x[b] - y[a] * y[b]) * iq2;
                jet bb = (y[a] * x[b] - x[a] * y[b]) * iq2;
                out[a * m + b] = aa;
                out[(n + a) * m + (n + b)] = aa;
                out[a * m + (n + b)] = bb;
                out[(n + a) * m + b] = -bb;
            }
    };
    e.K.J = constant_field(m, 1, 1, std_J_vals(n));
    e.K.tau.dim = m;
    e.K.tau.nup = 0;
    e.K.tau.ndn = 1;
    e.K.tau.eval = [n, m](const point& p, int order, std::vector<jet>& out) {
        std::vector<jet> x(n), y(n);
        for (int a = 0; a < n; a++) {
            x[a] = jet::variable(m, order, a, p[a]);
            y[a] = jet::variable(m, order, n + a, p[n + a]);
        }
        jet q(m, order, 1.0);
        for (int a = 0; a < n; a++) q += x[a] * x[a] + y[a] * y[a];
        jet iq = jet::recip(q * 2.0);
        out.assign(m, jet(m, order, 0.0));
        for (int a = 0; a < n; a++) {
            out[a] = y[a] * iq;
            out[n + a] = -(x[a] * iq);
        }
    };
    e.domain.lo.assign(m, -0.8);
    e.domain.hi.assign(m, 0.8);

    const int d = n + 1;
    std::vector<double> Z(d * d, 0.0);
    auto sym = [&](int i, int j) {
        std::vector<double> H(d * d, 0.0);
        H[i * d + j] += 1.0;
        H[j * d + i] += 1.0;
        if (i == j) H[i * d + j] = 1.0;
        return H;
    };
    auto skew = [&](int i, int j) {
        std::vector<double> H(d * d, 0.0);
        H[i * d + j] = 1.0;
        H[j * d + i] = -1.0;
        return H;
    };
    std::vector<std::pair<std::string, std::pair<std::vector<double>, std::vector<double>>>> Hs;
    {
        std::vector<double> id(d * d, 0.0);
        for (int i = 0; i < d; i++) id[i * d + i] = 1.0;
        Hs.push_back({"identity", {id, Z}});
    }
    Hs.push_back({"pole", {sym(0, 0), Z}});
    Hs.push_back({"re01", {sym(0, 1), Z}});
    Hs.push_back({"im01", {Z, skew(0, 1)}});
    {
        std::vector<double> Hr(d * d, 0.0), Hi(d * d, 0.0);
        for (int i = 0; i < d; i++) Hr[i * d + i] = 0.5 * (1.0 + i);
        Hr[0 * d + 1] += 0.3;
        Hr[1 * d + 0] += 0.3;
        Hi[0 * d + 1] += 0.2;
        Hi[1 * d + 0] -= 0.2;
        if (d > 2) {
            Hi[1 * d + 2] += 0.15;
            Hi[2 * d + 1] -= 0.15;
        }
        Hs.push_back({"generic", {Hr, Hi}});
    }
    for (auto& h : Hs) {
        tensor_field mu = fs_mu_field(n, h.second.first, h.second.second);
        e.solutions.push_back(solution_from_potential(e.K, mu, -1.0, h.first));
    }
    return e;
}

example make_ricciflat4d() {
    example e;
    e.name = "ricciflat4d";
    e.n = 2;
    e.dim = 4;
    e.einstein = true;
    e.scal = 0.0;

    // coords (x, y, s, t); the metric degenerates at x = y
    const int m = 4;
    e.K.g.dim = m;
    e.K.g.nup = 0;
    e.K.g.ndn = 2;
    e.K.g.eval = [](const point& p, int order, std::vector<jet>& out) {
        jet x = jet::variable(4, order, 0, p[0]);
        jet y = jet::variable(4, order, 1, p[1]);
        jet dd = x - y;
        jet idd = jet::recip(dd);
        out.assign(16, jet(4, order, 0.0));
        out[0 * 4 + 0] = dd;
        out[1 * 4 + 1] = dd;
        out[2 * 4 + 2] = idd * 2.0;
        out[2 * 4 + 3] = (x + y) * idd;
        out[3 * 4 + 2] = out[2 * 4 + 3];
        out[3 * 4 + 3] = (x * x + y * y) * idd;
    };
    e.K.J.dim = m;
    e.K.J.nup = 1;
    e.K.J.ndn = 1;
    const tensor_field gfield = e.K.g;
    e.K.J.eval = [gfield](const point& p, int order, std::vector<jet>& out) {
        jet x = jet::variable(4, order, 0, p[0]);
        jet y = jet::variable(4, order, 1, p[1]);
        jet zero(4, order, 0.0);
        // W = dx wedge (ds + y dt) + dy wedge (ds + x dt)
        std::vector<jet> W(16, zero);
        W[0 * 4 + 2] = jet(4, order, 1.0);
        W[0 * 4 + 3] = y;
        W[1 * 4 + 2] = jet(4, order, 1.0);
        W[1 * 4 + 3] = x;
        for (int i = 0; i < 4; i++)
            for (int j = 0; j < i; j++) W[i * 4 + j] = -W[j * 4 + i];
        std::vector<jet> g;
        gfield.eval(p, order, g);
        std::vector<jet> gi = jet_mat_inverse(g, 4);
        out.assign(16, zero);
        for (int i = 0; i < 4; i++)
            for (int j = 0; j < 4; j++)
                for (int s = 0; s < 4; s++) out[i * 4 + j] -= jet::mul(gi[i * 4 + s], W[s * 4 + j]);
    };
    e.K.tau.dim = m;
    e.K.tau.nup = 0;
    e.K.tau.ndn = 1;
    e.K.tau.eval = [](const point& p, int order, std::vector<jet>& out) {
        jet x = jet::variable(4, order, 0, p[0]);
        jet y = jet::variable(4, order, 1, p[1]);
        out.assign(4, jet(4, order, 0.0));
        out[2] = -(x + y);
        out[3] = -(x * y);
    };
    e.domain.lo = {1.5, 0.5, -1.0, -1.0};
    e.domain.hi = {2.5, 1.0, 1.0, 1.0};

    csolution s;
    s.tag = "pencil";
    s.A.dim = m;
    s.A.nup = 0;
    s.A.ndn = 2;
    s.A.eval = [gfield](const point& p, int order, std::vector<jet>& out) {
        jet x = jet::variable(4, order, 0, p[0]);
        jet y = jet::variable(4, order, 1, p[1]);
        jet zero(4, order, 0.0);
        std::vector<jet> M(16, zero);
        M[0 * 4 + 0] = x;
        M[1 * 4 + 1] = y;
        M[2 * 4 + 2] = x + y;
        M[2 * 4 + 3] = x * y;
        M[3 * 4 + 2] = jet(4, order, -1.0);
        std::vector<jet> g;
        gfield.eval(p, order, g);
        out.assign(16, zero);
        for (int i = 0; i < 4; i++)
            for (int j = 0; j < 4; j++)
                for (int k = 0; k < 4; k++) out[i * 4 + j] += jet::mul(g[i * 4 + k], M[k * 4 + j]);
    };
    s.lambda = constant_field(m, 0, 1, {0.5, 0.5, 0.0, 0.0});
    s.mu.dim = m;
    s.mu.nup = 0;
    s.mu.ndn = 0;
    s.mu.eval = [](const point& p, int order, std::vector<jet>& out) {
        jet x = jet::variable(4, order, 0, p[0]);
        jet y = jet::variable(4, order, 1, p[1]);
        out.assign(1, (x + y) * 0.5);
    };
    e.solutions.push_back(s);
    return e;
}

namespace {

tensor_field block_field(const tensor_field& a, const tensor_field& b, int which_layout) {
    // which_layout: 0 = (0,2) block diag, 1 = (1,1) block diag, 2 = (0,1) concat,
    // 3 = scalar from factor a only
    tensor_field r;
    const int m1 = a.dim, m2 = b.dim, m = m1 + m2;
    r.dim = m;
    r.nup = (which_layout == 1) ? 1 : 0;
    r.ndn = (which_layout == 0) ? 2 : (which_layout == 1 ? 1 : (which_layout == 2 ? 1 : 0));
    r.eval = [a, b, m1, m2, m, which_layout](const point& p, int order, std::vector<jet>& out) {
        point p1(p.begin(), p.begin() + m1), p2(p.begin() + m1, p.end());
        std::vector<jet> ja, jb;
        a.eval(p1, order, ja);
        b.eval(p2, order, jb);
        for (jet& c : ja) c = c.embedded(m, 0);
        for (jet& c : jb) c = c.embedded(m, m1);
        if (which_layout == 3) {
            out = ja;
            return;
        }
        if (which_layout == 2) {
            out.assign(m, jet(m, order, 0.0));
            for (int i = 0; i < m1; i++) out[i] = ja[i];
            for (int i = 0; i < m2; i++) out[m1 + i] = jb[i];
            return;
        }
        out.assign(m * m, jet(m, order, 0.0));
        for (int i = 0; i < m1; i++)
            for (int j = 0; j < m1; j++) out[i * m + j] = ja[i * m1 + j];
        for (int i = 0; i < m2; i++)
            for (int j = 0; j < m2; j++) out[(m1 + i) * m + (m1 + j)] = jb[i * m2 + j];
    };
    return r;
}

tensor_field zero_field(int m, int nup, int ndn) {
    tensor_field z;
    z.dim = m;
    z.nup = nup;
    z.ndn = ndn;
    int nc = 1;
    for (int i = 0; i < nup + ndn; i++) nc *= m;
    z.eval = [nc, m](const point&, int order, std::vector<jet>& out) {
        out.assign(nc, jet(m, order, 0.0));
    };
    return z;
}

} // namespace

example make_product(const example& a, const example& b) {
    const int m = a.dim + b.dim;
    if (m > jet::max_dim) throw error(errc::bad_dimension, "product chart exceeds 12 dimensions");
    example e;
    e.name = "product(" + a.name + "," + b.name + ")";
    e.n = a.n + b.n;
    e.dim = m;
    e.K.g = block_field(a.K.g, b.K.g, 0);
    e.K.J = block_field(a.K.J, b.K.J, 1);
    if (a.K.has_tau() && b.K.has_tau()) e.K.tau = block_field(a.K.tau, b.K.tau, 2);
    e.domain.lo = a.domain.lo;
    e.domain.hi = a.domain.hi;
    e.domain.lo.insert(e.domain.lo.end(), b.domain.lo.begin(), b.domain.lo.end());
    e.domain.hi.insert(e.domain.hi.end(), b.domain.hi.begin(), b.domain.hi.end());
    bool both_scal = std::isfinite(a.scal) && std::isfinite(b.scal);
    e.einstein = a.einstein && b.einstein && both_scal &&
                 std::abs(a.scal / a.dim - b.scal / b.dim) < 1e-12;
    if (both_scal) e.scal = a.scal + b.scal;
    if (a.hol_c == 0.0 && b.hol_c == 0.0) e.hol_c = 0.0;

    auto extend = [&](const example& src, int offset_dim, const tensor_field& other_g,
                      bool first) {
        for (const csolution& s : src.solutions) {
            csolution t;
            t.tag = src.name + ":" + s.tag;
            t.mu_zero = s.mu_zero;
            t.B = (s.mu_zero && s.B == 0.0) ? 0.0 : qnan;
            tensor_field zg = zero_field(other_g.dim, 0, 2);
            tensor_field zl = zero_field(other_g.dim, 0, 1);
            tensor_field zm = zero_field(other_g.dim, 0, 0);
            if (first) {
                t.A = block_field(s.A, zg, 0);
                t.lambda = block_field(s.lambda, zl, 2);
                t.mu = block_field(s.mu, zm, 3);
            } else {
                t.A = block_field(zg, s.A, 0);
                t.lambda = block_field(zl, s.lambda, 2);
                tensor_field muf;
                const tensor_field smu = s.mu;
                const int m1 = other_g.dim, mm = m;
                muf.dim = mm;
                muf.nup = 0;
                muf.ndn = 0;
                muf.eval = [smu, m1, mm](const point& p, int order, std::vector<jet>& out) {
                    point p2(p.begin() + m1, p.end());
                    smu.eval(p2, order, out);
                    out[0] = out[0].embedded(mm, m1);
                };
                t.mu = muf;
            }
            e.solutions.push_back(t);
        }
    };
    extend(a, 0, b.K.g, true);
    extend(b, a.dim, a.K.g, false);
    return e;
}

example rescale_example(const example& e, double s) {
    example r = e;
    r.name = "rescale(" + e.name + ")";
    r.K.g = field_lin(s, e.K.g, 0.0, e.K.g);
    if (e.K.has_tau()) r.K.tau = field_lin(s, e.K.tau, 0.0, e.K.tau);
    if (std::isfinite(e.scal)) r.scal = e.scal / s;
    if (std::isfinite(e.hol_c)) r.hol_c = e.hol_c / s;
    r.solutions.clear();
    for (const csolution& sol : e.solutions) {
        csolution t = sol;
        t.A = field_lin(s, sol.A, 0.0, sol.A);
        t.mu = field_lin(1.0 / s, sol.mu, 0.0, sol.mu);
        if (std::isfinite(sol.B)) t.B = sol.B / s;
        r.solutions.push_back(t);
    }
    return r;
}

csolution solution_from_potential(const kahler_structure& K, const tensor_field& mu, double B,
                                  const std::string& tag) {
    if (B == 0.0) throw error(errc::b_zero, "potential construction needs B != 0");
    csolution s;
    s.tag = tag;
    s.B = B;
    s.mu = mu;
    const int m = K.g.dim;
    tensor_field lam;
    lam.dim = m;
    lam.nup = 0;
    lam.ndn = 1;
    lam.eval = [mu, m, B](const point& p, int order, std::vector<jet>& out) {
        std::vector<jet> mj;
        mu.eval(p, order + 1, mj);
        out.resize(m);
        for (int i = 0; i < m; i++) out[i] = mj[0].partial(i) / (2.0 * B);
    };
    s.lambda = lam;
    tensor_field g = K.g;
    tensor_field A;
    A.dim = m;
    A.nup = 0;
    A.ndn = 2;
    A.eval = [lam, g, mu, m, B](const point& p, int order, std::vector<jet>& out) {
        std::vector<jet> lj, gj, mj;
        lam.eval(p, order + 1, lj);
        g.eval(p, order + 1, gj);
        mu.eval(p, order, mj);
        std::vector<jet> G = christoffel_jets(gj, m);
        out.assign(m * m, jet(m, order, 0.0));
        for (int k = 0; k < m; k++)
            for (int i = 0; i < m; i++) {
                jet dl = lj[i].partial(k);
                for (int s2 = 0; s2 < m; s2++)
                    dl -= jet::mul(G[(s2 * m + k) * m + i], lj[s2].truncated(order));
                out[k * m + i] = (dl - jet::mul(mj[0], gj[k * m + i].truncated(order))) / B;
            }
    };
    s.A = A;
    return s;
}

std::vector<std::string> catalog_keys() {
    return {"flat", "fubini_study", "ricciflat4d", "product", "conify"};
}

namespace {

example example_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("construct"))
        throw error(errc::schema_error, "example spec needs a construct key");
    std::string c = j.at("construct").get<std::string>();
    if (c == "catalog") {
        std::string name = j.value("name", "");
        if (name == "flat") return make_flat(j.value("n", 1));
        if (name == "fubini_study") return make_fubini_study(j.value("n", 1));
        if (name == "ricciflat4d") return make_ricciflat4d();
        throw error(errc::unknown_key, "unknown catalog example '" + name + "'");
    }
    if (c == "product") {
        if (!j.contains("factors") || !j.at("factors").is_array() || j.at("factors").size() < 2)
            throw error(errc::schema_error, "product needs a factors array with >= 2 entries");
        example acc = example_from_json(j.at("factors")[0]);
        for (size_t i = 1; i < j.at("factors").size(); i++)
            acc = make_product(acc, example_from_json(j.at("factors")[i]));
        return acc;
    }
    if (c == "conify") {
        if (!j.contains("base")) throw error(errc::schema_error, "conify needs a base spec");
        return conify_example(example_from_json(j.at("base")));
    }
    throw error(errc::unknown_key, "unknown construct '" + c + "'");
}

} // namespace

example example_from_spec(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw error(errc::schema_error, "example spec is not valid JSON");
    return example_from_json(j);
}

} // namespace cpl
