#include "cprojlab/conify.hpp"

#include "cprojlab/chart.hpp"
#include "cprojlab/quad.hpp"

#include <algorithm>
#include <cmath>

namespace cpl {

namespace {

std::vector<jet> embed_all(const std::vector<jet>& v, int new_dim, int offset) {
    std::vector<jet> r(v.size());
    for (size_t i = 0; i < v.size(); i++) r[i] = v[i].embedded(new_dim, offset);
    return r;
}

point base_part(const point& cone_pt) { return point(cone_pt.begin() + 2, cone_pt.end()); }

// base data evaluated at the base part of a cone point, embedded into the
// cone chart together with the radial coordinate jet
struct cone_eval {
    int m, mc;
    jet jr, r2;
    std::vector<jet> g, J, tau;
};

cone_eval eval_base_on_cone(const kahler_structure& base, const point& cone_pt, int order,
                            bool need_g, bool need_j) {
    cone_eval ce;
    ce.m = base.g.dim;
    ce.mc = ce.m + 2;
    point x = base_part(cone_pt);
    ce.jr = jet::variable(ce.mc, order, 0, cone_pt[0]);
    ce.r2 = ce.jr * ce.jr;
    if (need_g) ce.g = embed_all(base.g.at(x, order), ce.mc, 2);
    if (need_j) ce.J = embed_all(base.J.at(x, order), ce.mc, 2);
    ce.tau = embed_all(base.tau.at(x, order), ce.mc, 2);
    return ce;
}

} // namespace

kahler_structure conify_structure(const kahler_structure& base) {
    if (!base.tau.eval) throw error(errc::bad_params, "conify needs a potential with d tau = omega");
    const int m = base.g.dim, mc = m + 2;
    if (mc > jet::max_dim) throw error(errc::bad_dimension, "cone chart exceeds the jet dimension cap");

    kahler_structure ks;
    ks.g.dim = mc;
    ks.g.nup = 0;
    ks.g.ndn = 2;
    ks.g.eval = [base, m, mc](const point& p, int order, std::vector<jet>& out) {
        cone_eval ce = eval_base_on_cone(base, p, order, true, false);
        out.assign(mc * mc, jet(mc, order, 0.0));
        out[0 * mc + 0] = jet(mc, order, 1.0);
        out[1 * mc + 1] = ce.r2;
        for (int i = 0; i < m; i++) {
            jet v = -2.0 * (ce.r2 * ce.tau[i]);
            out[1 * mc + (2 + i)] = v;
            out[(2 + i) * mc + 1] = v;
        }
        for (int i = 0; i < m; i++)
            for (int j = i; j < m; j++) {
                jet v = ce.r2 * (ce.g[i * m + j] + 4.0 * (ce.tau[i] * ce.tau[j]));
                out[(2 + i) * mc + (2 + j)] = v;
                out[(2 + j) * mc + (2 + i)] = v;
            }
    };

    ks.J.dim = mc;
    ks.J.nup = 1;
    ks.J.ndn = 1;
    ks.J.eval = [base, m, mc](const point& p, int order, std::vector<jet>& out) {
        cone_eval ce = eval_base_on_cone(base, p, order, false, true);
        out.assign(mc * mc, jet(mc, order, 0.0));
        out[1 * mc + 0] = jet::recip(ce.jr);
        out[0 * mc + 1] = -ce.jr;
        for (int i = 0; i < m; i++) {
            out[0 * mc + (2 + i)] = 2.0 * (ce.jr * ce.tau[i]);
            jet tj(mc, order, 0.0);
            for (int s = 0; s < m; s++) tj += ce.tau[s] * ce.J[s * m + i];
            out[1 * mc + (2 + i)] = 2.0 * tj;
            for (int k = 0; k < m; k++) out[(2 + k) * mc + (2 + i)] = ce.J[k * m + i];
        }
    };

    ks.tau.dim = mc;
    ks.tau.nup = 0;
    ks.tau.ndn = 1;
    ks.tau.eval = [base, m, mc](const point& p, int order, std::vector<jet>& out) {
        cone_eval ce = eval_base_on_cone(base, p, order, false, false);
        out.assign(mc, jet(mc, order, 0.0));
        out[1] = -0.5 * ce.r2;
        for (int i = 0; i < m; i++) out[2 + i] = ce.r2 * ce.tau[i];
    };

    return ks;
}

tensor_field sasaki_metric(const kahler_structure& base) {
    if (!base.tau.eval) throw error(errc::bad_params, "level metric needs a potential");
    const int m = base.g.dim, mp = m + 1;
    tensor_field h;
    h.dim = mp;
    h.nup = 0;
    h.ndn = 2;
    h.eval = [base, m, mp](const point& p, int order, std::vector<jet>& out) {
        point x(p.begin() + 1, p.end());
        std::vector<jet> g = embed_all(base.g.at(x, order), mp, 1);
        std::vector<jet> tau = embed_all(base.tau.at(x, order), mp, 1);
        out.assign(mp * mp, jet(mp, order, 0.0));
        out[0] = jet(mp, order, 1.0);
        for (int i = 0; i < m; i++) {
            jet v = -2.0 * tau[i];
            out[0 * mp + (1 + i)] = v;
            out[(1 + i) * mp + 0] = v;
        }
        for (int i = 0; i < m; i++)
            for (int j = i; j < m; j++) {
                jet v = g[i * m + j] + 4.0 * (tau[i] * tau[j]);
                out[(1 + i) * mp + (1 + j)] = v;
                out[(1 + j) * mp + (1 + i)] = v;
            }
    };
    return h;
}

tensor_field potential_from_omega(const kahler_structure& K, const point& base_pt, int nodes) {
    if (nodes < 4 || nodes > 256)
        throw error(errc::quadrature_failure, "homotopy quadrature needs 4..256 nodes");
    const int m = K.g.dim;
    glrule rule = gauss_legendre01(nodes);
    tensor_field om = omega_field(K);

    tensor_field tau;
    tau.dim = m;
    tau.nup = 0;
    tau.ndn = 1;
    tau.eval = [m, rule, om, base_pt](const point& p, int order, std::vector<jet>& out) {
        out.assign(m, jet(m, order, 0.0));
        std::vector<jet> xi(m);
        for (int i = 0; i < m; i++) xi[i] = jet::variable(m, order, i, p[i] - base_pt[i]);
        for (size_t q = 0; q < rule.x.size(); q++) {
            double t = rule.x[q], w = rule.w[q] * t;
            point c(m);
            for (int i = 0; i < m; i++) c[i] = base_pt[i] + t * (p[i] - base_pt[i]);
            std::vector<jet> omv = om.at(c, order);
            for (int j = 0; j < m; j++)
                for (int i = 0; i < m; i++)
                    out[j] += w * (xi[i] * radial_scale(omv[i * m + j], t));
        }
    };
    return tau;
}

namespace {

// spot-check of d mu = 2B lambda and covd lambda = mu g + B A on the base
void check_triple(const example& base, const csolution& s, double tol) {
    std::vector<point> pts = halton_points(base.domain, 3);
    const int m = base.dim;
    for (const point& p : pts) {
        std::vector<jet> g1 = base.K.g.at(p, 1);
        std::vector<jet> lam = s.lambda.at(p, 1);
        std::vector<jet> A0 = s.A.at(p, 0);
        std::vector<jet> mu = s.mu.at(p, 1);
        std::vector<double> G(m * m * m);
        christoffel_vals(g1, m, G.data());
        double worst = 0.0;
        for (int k = 0; k < m; k++) {
            worst = std::max(worst, std::abs(mu[0].d1(k) - 2.0 * s.B * lam[k].value()));
            for (int i = 0; i < m; i++) {
                double c = lam[i].d1(k);
                for (int t = 0; t < m; t++) c -= G[(t * m + k) * m + i] * lam[t].value();
                c -= mu[0].value() * g1[k * m + i].value() + s.B * A0[k * m + i].value();
                worst = std::max(worst, std::abs(c));
            }
        }
        if (worst > tol)
            throw error(errc::degenerate_solution, "triple relations fail at a sample point");
    }
}

} // namespace

tensor_field lift_solution(const example& base, const csolution& s, double tol) {
    if (!(std::abs(s.B + 1.0) <= 1e-9))
        throw error(errc::wrong_b, "lift needs a solution with B = -1");
    if (tol > 0.0) check_triple(base, s, tol);

    const int m = base.dim, mc = m + 2;
    kahler_structure K = base.K;
    csolution sol = s;

    tensor_field Ah;
    Ah.dim = mc;
    Ah.nup = 0;
    Ah.ndn = 2;
    Ah.eval = [K, sol, m, mc](const point& p, int order, std::vector<jet>& out) {
        cone_eval ce = eval_base_on_cone(K, p, order, true, true);
        point x = base_part(p);
        std::vector<jet> A = embed_all(sol.A.at(x, order), mc, 2);
        std::vector<jet> lam = embed_all(sol.lambda.at(x, order), mc, 2);
        jet mu = sol.mu.at(x, order)[0].embedded(mc, 2);

        std::vector<jet> lj(m, jet(mc, order, 0.0)); // lambda(J.)_i
        for (int i = 0; i < m; i++)
            for (int s2 = 0; s2 < m; s2++) lj[i] += lam[s2] * ce.J[s2 * m + i];

        out.assign(mc * mc, jet(mc, order, 0.0));
        out[0 * mc + 0] = mu;
        out[1 * mc + 1] = ce.r2 * mu;
        for (int i = 0; i < m; i++) {
            jet ri = -(ce.jr * lam[i]);
            out[0 * mc + (2 + i)] = ri;
            out[(2 + i) * mc + 0] = ri;
            jet ti = ce.r2 * (lj[i] - 2.0 * (mu * ce.tau[i]));
            out[1 * mc + (2 + i)] = ti;
            out[(2 + i) * mc + 1] = ti;
        }
        for (int i = 0; i < m; i++)
            for (int j = i; j < m; j++) {
                jet v = A[i * m + j] + 4.0 * (mu * (ce.tau[i] * ce.tau[j])) -
                        2.0 * (ce.tau[i] * lj[j]) - 2.0 * (ce.tau[j] * lj[i]);
                v = ce.r2 * v;
                out[(2 + i) * mc + (2 + j)] = v;
                out[(2 + j) * mc + (2 + i)] = v;
            }
    };
    return Ah;
}

cone_readoff solution_from_cone(const example& base, const tensor_field& Ahat,
                                const point& cone_pt) {
    const int m = base.dim, mc = m + 2;
    const double r = cone_pt[0];
    std::vector<jet> Av = Ahat.at(cone_pt, 0);
    std::vector<jet> tauv = base.K.tau.at(base_part(cone_pt), 0);

    cone_readoff ro;
    ro.mu = Av[0].value();
    ro.lambda.resize(m);
    for (int i = 0; i < m; i++) ro.lambda[i] = -Av[0 * mc + (2 + i)].value() / r;
    ro.A.resize(m * m);
    for (int i = 0; i < m; i++)
        for (int j = 0; j < m; j++) {
            double ti = tauv[i].value(), tj = tauv[j].value();
            double v = Av[(2 + i) * mc + (2 + j)].value() +
                       2.0 * ti * Av[1 * mc + (2 + j)].value() +
                       2.0 * tj * Av[1 * mc + (2 + i)].value() +
                       4.0 * ti * tj * Av[1 * mc + 1].value();
            ro.A[i * m + j] = v / (r * r);
        }
    return ro;
}

double sasaki_residuals_t::worst() const {
    return std::max(std::max(tensor_eq, oneform_eq), std::max(scalar_eq, invariance));
}

sasaki_residuals_t sasaki_system_residual(const example& base, const csolution& s,
                                          const point& base_pt) {
    const int m = base.dim, mp = m + 1;
    kahler_structure K = base.K;
    csolution sol = s;

    tensor_field h = sasaki_metric(K);

    tensor_field L;
    L.dim = mp;
    L.nup = 0;
    L.ndn = 2;
    L.eval = [K, sol, m, mp](const point& p, int order, std::vector<jet>& out) {
        point x(p.begin() + 1, p.end());
        std::vector<jet> A = embed_all(sol.A.at(x, order), mp, 1);
        std::vector<jet> lam = embed_all(sol.lambda.at(x, order), mp, 1);
        std::vector<jet> J = embed_all(K.J.at(x, order), mp, 1);
        std::vector<jet> tau = embed_all(K.tau.at(x, order), mp, 1);
        jet mu = sol.mu.at(x, order)[0].embedded(mp, 1);
        std::vector<jet> lj(m, jet(mp, order, 0.0));
        for (int i = 0; i < m; i++)
            for (int s2 = 0; s2 < m; s2++) lj[i] += lam[s2] * J[s2 * m + i];
        out.assign(mp * mp, jet(mp, order, 0.0));
        out[0] = mu;
        for (int i = 0; i < m; i++) {
            jet v = lj[i] - 2.0 * (mu * tau[i]);
            out[0 * mp + (1 + i)] = v;
            out[(1 + i) * mp + 0] = v;
        }
        for (int i = 0; i < m; i++)
            for (int j = i; j < m; j++) {
                jet v = A[i * m + j] + 4.0 * (mu * (tau[i] * tau[j])) - 2.0 * (tau[i] * lj[j]) -
                        2.0 * (tau[j] * lj[i]);
                out[(1 + i) * mp + (1 + j)] = v;
                out[(1 + j) * mp + (1 + i)] = v;
            }
    };

    tensor_field sig;
    sig.dim = mp;
    sig.nup = 0;
    sig.ndn = 1;
    sig.eval = [sol, m, mp](const point& p, int order, std::vector<jet>& out) {
        point x(p.begin() + 1, p.end());
        std::vector<jet> lam = embed_all(sol.lambda.at(x, order), mp, 1);
        out.assign(mp, jet(mp, order, 0.0));
        for (int i = 0; i < m; i++) out[1 + i] = lam[i];
    };

    tensor_field rho;
    rho.dim = mp;
    rho.nup = 0;
    rho.ndn = 0;
    rho.eval = [sol, mp](const point& p, int order, std::vector<jet>& out) {
        point x(p.begin() + 1, p.end());
        out.assign(1, sol.mu.at(x, order)[0].embedded(mp, 1));
    };

    point pp(mp);
    pp[0] = 0.3;
    for (int i = 0; i < m; i++) pp[1 + i] = base_pt[i];

    std::vector<jet> hv = h.at(pp, 0);
    std::vector<jet> Lv = L.at(pp, 0);
    std::vector<jet> sv = sig.at(pp, 0);
    std::vector<jet> rv = rho.at(pp, 1);
    std::vector<jet> dl = covd(L, h).at(pp, 0);
    std::vector<jet> ds = covd(sig, h).at(pp, 0);

    sasaki_residuals_t res{0.0, 0.0, 0.0, 0.0};
    for (int k = 0; k < mp; k++) {
        for (int i = 0; i < mp; i++) {
            for (int j = 0; j < mp; j++) {
                double want = hv[k * mp + i].value() * sv[j].value() +
                              hv[k * mp + j].value() * sv[i].value();
                res.tensor_eq = std::max(
                    res.tensor_eq, std::abs(dl[(k * mp + i) * mp + j].value() - want));
            }
            double want = rv[0].value() * hv[k * mp + i].value() - Lv[k * mp + i].value();
            res.oneform_eq =
                std::max(res.oneform_eq, std::abs(ds[k * mp + i].value() - want));
        }
        res.scalar_eq = std::max(res.scalar_eq, std::abs(rv[0].d1(k) + 2.0 * sv[k].value()));
    }

    // eta-invariance identities at the same point
    std::vector<jet> Jv = K.J.at(base_pt, 0);
    std::vector<jet> tv = K.tau.at(base_pt, 0);
    res.invariance = std::abs(sv[0].value());
    res.invariance = std::max(res.invariance, std::abs(rv[0].value() - Lv[0].value()));
    for (int a = 0; a < m; a++) {
        double lhs = 0.0, tjx = 0.0;
        for (int j = 0; j < m; j++) {
            lhs += sv[1 + j].value() * Jv[j * m + a].value();
            tjx += tv[j].value() * Jv[j * m + a].value();
        }
        lhs += 2.0 * tjx * sv[0].value();
        double rhs = Lv[0 * mp + (1 + a)].value() + 2.0 * tv[a].value() * Lv[0].value();
        res.invariance = std::max(res.invariance, std::abs(lhs - rhs));
    }
    return res;
}

double cone_curvature_residuals_t::worst() const {
    double w = std::max(connection, radial);
    w = std::max(w, std::max(level, horizontal));
    return std::max(w, ricci);
}

cone_curvature_residuals_t cone_curvature_closed_form(const example& base, const point& cone_pt) {
    const int m = base.dim, mc = m + 2, mp = m + 1, n = m / 2;
    const double r = cone_pt[0];
    const point x = base_part(cone_pt);

    kahler_structure coneK = conify_structure(base.K);
    std::vector<jet> gh2 = coneK.g.at(cone_pt, 2);
    std::vector<double> Rh = riemann_vals(gh2, mc);
    std::vector<double> Rich = ricci_from_riemann(Rh, mc);
    std::vector<double> Gh(mc * mc * mc);
    christoffel_vals(gh2, mc, Gh.data());
    std::vector<jet> Jh = coneK.J.at(cone_pt, 0);

    std::vector<jet> g2 = base.K.g.at(x, 2);
    std::vector<double> R = riemann_vals(g2, m);
    std::vector<double> Ric = ricci_from_riemann(R, m);
    std::vector<double> G(m * m * m);
    christoffel_vals(g2, m, G.data());
    std::vector<jet> J0 = base.K.J.at(x, 0);
    std::vector<jet> tau1 = base.K.tau.at(x, 1);

    std::vector<double> om(m * m, 0.0); // omega_ij = g_is J^s_j
    for (int i = 0; i < m; i++)
        for (int j = 0; j < m; j++)
            for (int s = 0; s < m; s++)
                om[i * m + j] += g2[i * m + s].value() * J0[s * m + j].value();

    point pp(mp);
    pp[0] = cone_pt[1];
    for (int i = 0; i < m; i++) pp[1 + i] = x[i];
    tensor_field h = sasaki_metric(base.K);
    std::vector<jet> h2 = h.at(pp, 2);
    std::vector<double> RP = riemann_vals(h2, mp);

    double rscale = 1.0;
    for (double v : Rh) rscale = std::max(rscale, std::abs(v));

    cone_curvature_residuals_t res{0.0, 0.0, 0.0, 0.0, 0.0};

    // nabla_hat xi = Id and nabla_hat eta = J_hat
    for (int i = 0; i < mc; i++)
        for (int k = 0; k < mc; k++) {
            double a = (i == 0 && k == 0 ? 1.0 : 0.0) + r * Gh[(i * mc + k) * mc + 0] -
                       (i == k ? 1.0 : 0.0);
            double b = Gh[(i * mc + k) * mc + 1] - Jh[i * mc + k].value();
            res.connection = std::max(res.connection, std::max(std::abs(a), std::abs(b)));
        }
    // lift rules for constant base directions
    for (int a = 0; a < m; a++) {
        std::vector<double> X(mc, 0.0);
        X[1] = 2.0 * tau1[a].value();
        X[2 + a] = 1.0;
        for (int i = 0; i < mc; i++) {
            double cr = 0.0, ce = 0.0;
            for (int s = 0; s < mc; s++) {
                cr += Gh[(i * mc + 0) * mc + s] * X[s];
                ce += Gh[(i * mc + 1) * mc + s] * X[s] - Jh[i * mc + s].value() * X[s];
            }
            res.connection = std::max(res.connection, std::abs(r * cr - X[i]));
            res.connection = std::max(res.connection, std::abs(ce));
        }
        for (int b = 0; b < m; b++) {
            std::vector<double> Y(mc, 0.0);
            Y[1] = 2.0 * tau1[b].value();
            Y[2 + b] = 1.0;
            for (int i = 0; i < mc; i++) {
                double lhs = (i == 1 ? 2.0 * tau1[b].d1(a) : 0.0);
                for (int k = 0; k < mc; k++)
                    for (int s = 0; s < mc; s++) lhs += X[k] * Gh[(i * mc + k) * mc + s] * Y[s];
                double rhs = 0.0;
                if (i == 0) rhs = -g2[a * m + b].value() * r;
                if (i == 1) {
                    rhs = om[a * m + b];
                    for (int s = 0; s < m; s++)
                        rhs += 2.0 * tau1[s].value() * G[(s * m + a) * m + b];
                }
                if (i >= 2) rhs = G[((i - 2) * m + a) * m + b];
                res.connection = std::max(res.connection, std::abs(lhs - rhs));
            }
        }
    }

    // R_hat(.,.) xi = R_hat(.,.) eta = 0
    for (int i = 0; i < mc; i++)
        for (int j = 0; j < 2; j++)
            for (int k = 0; k < mc; k++)
                for (int l = 0; l < mc; l++)
                    res.radial =
                        std::max(res.radial, std::abs(Rh[((i * mc + j) * mc + k) * mc + l]));
    res.radial /= rscale;

    // cone curvature from the level metric h
    for (int b = 0; b < mp; b++)
        for (int c = 0; c < mp; c++)
            for (int d = 0; d < mp; d++) {
                res.level = std::max(
                    res.level, std::abs(Rh[((0 * mc + (1 + b)) * mc + (1 + c)) * mc + (1 + d)]));
                for (int a = 0; a < mp; a++) {
                    double want = RP[((a * mp + b) * mp + c) * mp + d] -
                                  (h2[b * mp + d].value() * (a == c ? 1.0 : 0.0) -
                                   h2[b * mp + c].value() * (a == d ? 1.0 : 0.0));
                    double got = Rh[(((1 + a) * mc + (1 + b)) * mc + (1 + c)) * mc + (1 + d)];
                    res.level = std::max(res.level, std::abs(got - want));
                }
            }
    res.level /= rscale;

    // R_hat on horizontal lifts vs R - 4H downstairs
    for (int z = 0; z < m; z++)
        for (int a = 0; a < m; a++)
            for (int b = 0; b < m; b++) {
                std::vector<double> Z(mc, 0.0), X(mc, 0.0), Y(mc, 0.0);
                Z[1] = 2.0 * tau1[z].value();
                Z[2 + z] = 1.0;
                X[1] = 2.0 * tau1[a].value();
                X[2 + a] = 1.0;
                Y[1] = 2.0 * tau1[b].value();
                Y[2 + b] = 1.0;
                std::vector<double> W(m);
                for (int i = 0; i < m; i++) {
                    double Hv = 0.25 * (g2[z * m + b].value() * (i == a ? 1.0 : 0.0) -
                                        g2[z * m + a].value() * (i == b ? 1.0 : 0.0) +
                                        om[z * m + b] * J0[i * m + a].value() -
                                        om[z * m + a] * J0[i * m + b].value() +
                                        2.0 * om[a * m + b] * J0[i * m + z].value());
                    W[i] = R[((i * m + z) * m + a) * m + b] - 4.0 * Hv;
                }
                for (int i = 0; i < mc; i++) {
                    double lhs = 0.0;
                    for (int j = 0; j < mc; j++)
                        for (int k = 0; k < mc; k++)
                            for (int l = 0; l < mc; l++)
                                lhs += Rh[((i * mc + j) * mc + k) * mc + l] * Z[j] * X[k] * Y[l];
                    double rhs = 0.0;
                    if (i == 1)
                        for (int s = 0; s < m; s++) rhs += 2.0 * tau1[s].value() * W[s];
                    if (i >= 2) rhs = W[i - 2];
                    res.horizontal = std::max(res.horizontal, std::abs(lhs - rhs));
                }
            }
    res.horizontal /= rscale;

    // horizontal Ricci block vs Ric(g) - 2(n+1) g, independent of r
    double ricscale = 1.0;
    for (double v : Ric) ricscale = std::max(ricscale, std::abs(v));
    for (int a = 0; a < m; a++)
        for (int b = 0; b < m; b++) {
            double ta = tau1[a].value(), tb = tau1[b].value();
            double lhs = Rich[(2 + a) * mc + (2 + b)] + 2.0 * tb * Rich[(2 + a) * mc + 1] +
                         2.0 * ta * Rich[1 * mc + (2 + b)] + 4.0 * ta * tb * Rich[1 * mc + 1];
            double rhs = Ric[a * m + b] - 2.0 * (n + 1) * g2[a * m + b].value();
            res.ricci = std::max(res.ricci, std::abs(lhs - rhs));
        }
    res.ricci /= ricscale;

    return res;
}

example conify_example(const example& base) {
    example b = base;
    if (!b.K.has_tau()) throw error(errc::bad_params, "conify needs a base with a potential");
    if (b.dim + 2 > jet::max_dim)
        throw error(errc::bad_dimension, "cone chart exceeds the jet dimension cap");

    // a Ricci flat cone needs Scal = 4n(n+1) on the base
    bool ricci_flat = b.einstein && std::isfinite(b.scal) && b.scal > 0.0;
    if (ricci_flat) {
        double target = 4.0 * b.n * (b.n + 1);
        double sfac = b.scal / target;
        if (std::abs(sfac - 1.0) > 1e-12) b = rescale_example(b, sfac);
    }

    example e;
    e.name = "conify(" + b.name + ")";
    e.n = b.n + 1;
    e.dim = b.dim + 2;
    e.K = conify_structure(b.K);
    e.domain.lo = {0.5, -1.0};
    e.domain.hi = {2.0, 1.0};
    for (int i = 0; i < b.dim; i++) {
        e.domain.lo.push_back(b.domain.lo[i]);
        e.domain.hi.push_back(b.domain.hi[i]);
    }
    e.einstein = ricci_flat;
    if (ricci_flat) e.scal = 0.0;
    if (ricci_flat && std::isfinite(b.hol_c) && std::abs(b.hol_c - 4.0) < 1e-12) e.hol_c = 0.0;

    std::vector<double> zl(e.dim, 0.0);
    csolution ident;
    ident.A = e.K.g;
    ident.lambda = constant_field(e.dim, 0, 1, zl);
    ident.mu = constant_field(e.dim, 0, 0, {0.0});
    ident.B = 0.0;
    ident.mu_zero = true;
    ident.tag = "identity";
    e.solutions.push_back(ident);

    for (const csolution& s : b.solutions) {
        if (std::isfinite(s.B) && s.B > 0.0) {
            e.notes.push_back("solution " + s.tag +
                              " has B > 0; its lift would have signature (2,2n) and is skipped");
            continue;
        }
        if (!(std::abs(s.B + 1.0) <= 1e-9)) continue;
        if (s.tag == "identity") continue; // lifts to the cone metric itself
        csolution t;
        t.A = lift_solution(b, s, 1e-7);
        t.lambda = constant_field(e.dim, 0, 1, zl);
        t.mu = constant_field(e.dim, 0, 0, {0.0});
        t.B = 0.0;
        t.mu_zero = true;
        t.tag = "lift:" + s.tag;
        e.solutions.push_back(t);
    }
    return e;
}

} // namespace cpl
