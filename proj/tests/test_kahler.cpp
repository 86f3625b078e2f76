#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "cprojlab/kahler.hpp"

#include "doctest.h"
#include "helpers.hpp"

#include <cmath>

using namespace cpl;

namespace {

// flat hermitian chart on R^{2n}: g = id, J the standard block rotation
kahler_structure flat_structure(int n) {
    int m = 2 * n;
    std::vector<double> J(m * m, 0.0);
    for (int a = 0; a < n; a++) {
        J[(n + a) * m + a] = 1.0;
        J[a * m + (n + a)] = -1.0;
    }
    std::vector<double> I(m * m, 0.0);
    for (int i = 0; i < m; i++) I[i * m + i] = 1.0;

    kahler_structure K;
    K.g = constant_field(m, 0, 2, I);
    K.J = constant_field(m, 1, 1, J);
    // omega_ij = J^i_j numerically, so tau_j = 1/2 sum_i p_i omega_ij
    K.tau.dim = m;
    K.tau.nup = 0;
    K.tau.ndn = 1;
    K.tau.eval = [m, J](const point& p, int order, std::vector<jet>& out) {
        out.assign(m, jet(m, order, 0.0));
        for (int j = 0; j < m; j++)
            for (int i = 0; i < m; i++)
                out[j] += 0.5 * J[i * m + j] * jet::variable(m, order, i, p[i]);
    };
    return K;
}

} // namespace

TEST_CASE("flat hermitian chart has vanishing residuals") {
    for (int n : {1, 2, 3}) {
        kahler_structure K = flat_structure(n);
        box bx;
        bx.lo.assign(2 * n, -0.8);
        bx.hi.assign(2 * n, 0.8);
        for (const point& p : halton_points(bx, 6)) {
            kahler_residuals_t r = kahler_residuals(K, p);
            CHECK(r.worst() < 1e-12);
        }
    }
}

TEST_CASE("hermitian residual flags a non-hermitian metric") {
    kahler_structure K = flat_structure(1);
    std::vector<double> g = {1.0, 0.0, 0.0, 2.0};
    K.g = constant_field(2, 0, 2, g);
    kahler_residuals_t r = kahler_residuals(K, {0.1, 0.2});
    CHECK(r.hermitian > 0.5);
}

TEST_CASE("jsq residual flags a scaled almost complex structure") {
    kahler_structure K = flat_structure(1);
    std::vector<double> J = {0.0, -1.3, 1.0, 0.0};
    K.J = constant_field(2, 1, 1, J);
    kahler_residuals_t r = kahler_residuals(K, {0.1, -0.2});
    CHECK(r.jsq > 0.2);
}

TEST_CASE("nijenhuis residual flags a non-integrable structure") {
    // conjugate the standard J by the position-dependent shear I + x0 E_23
    kahler_structure K = flat_structure(2);
    int m = 4;
    tensor_field J;
    J.dim = m;
    J.nup = 1;
    J.ndn = 1;
    J.eval = [m](const point& p, int order, std::vector<jet>& out) {
        jet s = jet::variable(m, order, 0, p[0]);
        std::vector<jet> S(m * m, jet(m, order, 0.0)), Si(m * m, jet(m, order, 0.0));
        for (int i = 0; i < m; i++) {
            S[i * m + i] = jet(m, order, 1.0);
            Si[i * m + i] = jet(m, order, 1.0);
        }
        S[2 * m + 3] = s;
        Si[2 * m + 3] = -s;
        std::vector<double> J0(m * m, 0.0);
        J0[2 * m + 0] = 1.0;
        J0[3 * m + 1] = 1.0;
        J0[0 * m + 2] = -1.0;
        J0[1 * m + 3] = -1.0;
        out.assign(m * m, jet(m, order, 0.0));
        for (int i = 0; i < m; i++)
            for (int j = 0; j < m; j++)
                for (int a = 0; a < m; a++)
                    for (int b = 0; b < m; b++)
                        out[i * m + j] += S[i * m + a] * (J0[a * m + b] * Si[b * m + j]);
    };
    K.J = J;
    kahler_residuals_t r = kahler_residuals(K, {0.3, 0.1, -0.2, 0.4});
    CHECK(r.jsq < 1e-12); // still squares to -id
    CHECK(r.nijenhuis > 1e-3);
}

TEST_CASE("domega residual flags a conformally scaled form") {
    kahler_structure K = flat_structure(2);
    int m = 4;
    tensor_field g;
    g.dim = m;
    g.nup = 0;
    g.ndn = 2;
    g.eval = [m](const point& p, int order, std::vector<jet>& out) {
        jet f = exp(jet::variable(m, order, 0, p[0]));
        out.assign(m * m, jet(m, order, 0.0));
        for (int i = 0; i < m; i++) out[i * m + i] = f;
    };
    K.g = g;
    K.tau = tensor_field{}; // no potential claim for this control
    kahler_residuals_t r = kahler_residuals(K, {0.3, 0.1, -0.2, 0.4});
    CHECK(r.hermitian < 1e-12);
    CHECK(r.domega > 0.3);
    CHECK(r.dtau == 0.0); // skipped without tau
}

TEST_CASE("dtau residual flags a wrong potential") {
    kahler_structure K = flat_structure(1);
    K.tau = constant_field(2, 0, 1, {0.0, 0.0});
    kahler_residuals_t r = kahler_residuals(K, {0.4, -0.3});
    CHECK(r.dtau > 0.9);
}

TEST_CASE("einstein fit on a round sphere metric") {
    // 2-sphere of radius a in polar coordinates: Ric = (1/a^2) g
    double a = 1.7;
    tensor_field g;
    g.dim = 2;
    g.nup = 0;
    g.ndn = 2;
    g.eval = [a](const point& p, int order, std::vector<jet>& out) {
        jet th = jet::variable(2, order, 0, p[0]);
        jet s = sin(th);
        out.assign(4, jet(2, order, 0.0));
        out[0] = jet(2, order, a * a);
        out[3] = (a * a) * (s * s);
    };
    einstein_fit f = einstein_residual(g.at({1.1, 0.7}, 2), 2);
    CHECK(rel_err(f.c, 1.0 / (a * a)) < 1e-9);
    CHECK(f.residual < 1e-9);

    // flat chart is einstein with c = 0
    kahler_structure K = flat_structure(2);
    einstein_fit f2 = einstein_residual(K.g.at({0.1, 0.2, 0.3, 0.4}, 2), 4);
    CHECK(std::abs(f2.c) < 1e-12);
    CHECK(f2.residual < 1e-12);
}

TEST_CASE("einstein fit rejects a non-einstein metric") {
    tensor_field g;
    g.dim = 3;
    g.nup = 0;
    g.ndn = 2;
    g.eval = [](const point& p, int order, std::vector<jet>& out) {
        jet x = jet::variable(3, order, 0, p[0]);
        jet y = jet::variable(3, order, 1, p[1]);
        out.assign(9, jet(3, order, 0.0));
        out[0] = 1.0 + 0.3 * (x * x);
        out[4] = 1.0 + 0.2 * (y * y) + 0.1 * (x * y);
        out[8] = jet(3, order, 1.0);
        out[1] = out[3] = 0.05 * (x * y);
    };
    einstein_fit f = einstein_residual(g.at({0.4, 0.3, 0.2}, 2), 3);
    CHECK(f.residual > 1e-3);
}

TEST_CASE("holomorphic curvature fit on the flat chart") {
    kahler_structure K = flat_structure(2);
    point p = {0.1, -0.2, 0.3, 0.2};
    hol_curv_fit f = holomorphic_curvature_residual(K.g.at(p, 2), K.J.at(p, 0), 4);
    CHECK(std::abs(f.c) < 1e-12);
    CHECK(f.residual < 1e-12);
}

TEST_CASE("omega field is the composition g J") {
    kahler_structure K = flat_structure(2);
    std::vector<jet> om = omega_field(K).at({0.1, 0.2, -0.1, 0.3}, 1);
    // standard block J gives omega_ij = J^i_j numerically
    std::vector<jet> J = K.J.at({0.1, 0.2, -0.1, 0.3}, 1);
    for (int i = 0; i < 16; i++) CHECK(std::abs(om[i].value() - J[i].value()) < 1e-14);
    // antisymmetry
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++)
            CHECK(std::abs(om[i * 4 + j].value() + om[j * 4 + i].value()) < 1e-14);
}
