#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cprojlab/jet.hpp"
#include "helpers.hpp"

#include <cmath>
#include <vector>

using cpl::jet;

namespace {

// test expression with nontrivial third derivatives in every slot
double expr(const std::vector<double>& p) {
    double x = p[0], y = p[1], z = p[2];
    return std::exp(0.3 * x) * std::log(y + 2.0) + std::pow(z + 3.0, 1.7) * x * y +
           std::sqrt(x + y + z + 5.0) / (1.0 + x * x);
}

jet expr_jet(const std::vector<double>& p, int order) {
    jet x = jet::variable(3, order, 0, p[0]);
    jet y = jet::variable(3, order, 1, p[1]);
    jet z = jet::variable(3, order, 2, p[2]);
    return exp(x * 0.3) * log(y + 2.0) + pow(z + 3.0, 1.7) * x * y +
           sqrt(x + y + z + 5.0) / (x * x + 1.0);
}

} // namespace

TEST_CASE("jet derivatives match central differences") {
    std::vector<double> p = {0.4, -0.2, 0.7};
    jet f = expr_jet(p, 3);
    CHECK(f.value() == doctest::Approx(expr(p)).epsilon(1e-12));
    for (int i = 0; i < 3; i++)
        CHECK(rel_err(f.d1(i), fd1(expr, p, i)) < 1e-5);
    for (int i = 0; i < 3; i++)
        for (int j = i; j < 3; j++)
            CHECK(rel_err(f.d2(i, j), fd2(expr, p, i, j)) < 1e-5);
    for (int i = 0; i < 3; i++)
        for (int j = i; j < 3; j++)
            for (int k = j; k < 3; k++)
                CHECK(rel_err(f.d3(i, j, k), fd3(expr, p, i, j, k)) < 1e-3);
}

TEST_CASE("symmetric accessors ignore index order") {
    std::vector<double> p = {0.4, -0.2, 0.7};
    jet f = expr_jet(p, 3);
    CHECK(f.d2(0, 2) == f.d2(2, 0));
    CHECK(f.d3(0, 1, 2) == f.d3(2, 0, 1));
    CHECK(f.d3(1, 1, 0) == f.d3(0, 1, 1));
}

TEST_CASE("partial extracts the derivative jet") {
    std::vector<double> p = {0.4, -0.2, 0.7};
    jet f = expr_jet(p, 3);
    for (int k = 0; k < 3; k++) {
        jet g = f.partial(k);
        CHECK(g.order() == 2);
        CHECK(g.value() == f.d1(k));
        for (int i = 0; i < 3; i++) {
            CHECK(g.d1(i) == f.d2(i, k));
            for (int j = i; j < 3; j++)
                CHECK(g.d2(i, j) == f.d3(i, j, k));
        }
    }
}

TEST_CASE("composition identities hold on jets") {
    std::vector<double> p = {1.3, 0.5, -0.1};
    jet x = expr_jet(p, 3) + 2.0; // keep value positive
    jet back = exp(log(x));
    jet sq = sqrt(x) * sqrt(x);
    jet rr = jet::recip(jet::recip(x));
    jet pw = pow(x, 2.0) - x * x;
    const auto& xr = x.raw();
    for (size_t i = 0; i < xr.size(); i++) {
        CHECK(back.raw()[i] == doctest::Approx(xr[i]).epsilon(1e-11));
        CHECK(sq.raw()[i] == doctest::Approx(xr[i]).epsilon(1e-11));
        CHECK(rr.raw()[i] == doctest::Approx(xr[i]).epsilon(1e-11));
        CHECK(std::abs(pw.raw()[i]) < 1e-10);
    }
}

TEST_CASE("order and dimension limits are enforced") {
    CHECK_THROWS_AS(jet(3, 4, 0.0), cpl::error);
    CHECK_THROWS_AS(jet(13, 2, 0.0), cpl::error);
    jet f(2, 0, 1.0);
    CHECK_THROWS_AS(f.partial(0), cpl::error);
    jet a(2, 2, 1.0), b(3, 2, 1.0);
    CHECK_THROWS_AS(a + b, cpl::error);
    CHECK_THROWS_AS(a.truncated(3), cpl::error);
}

TEST_CASE("truncated keeps lower-order coefficients") {
    std::vector<double> p = {0.4, -0.2, 0.7};
    jet f = expr_jet(p, 3);
    jet t = f.truncated(1);
    CHECK(t.order() == 1);
    CHECK(t.value() == f.value());
    for (int i = 0; i < 3; i++) CHECK(t.d1(i) == f.d1(i));
}

TEST_CASE("jet matrix inverse and determinant") {
    const int n = 3, m = 2, ord = 2;
    std::vector<double> p = {0.3, 0.8};
    jet u = jet::variable(m, ord, 0, p[0]);
    jet v = jet::variable(m, ord, 1, p[1]);
    std::vector<jet> a = {
        u + 2.0,        u * v,          jet(m, ord, 0.1),
        u * v,          v + 3.0,        u * 0.5,
        jet(m, ord, 0.1), u * 0.5,      exp(v * 0.2) + 1.0,
    };
    std::vector<jet> inv = cpl::jet_mat_inverse(a, n);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            jet s(m, ord, 0.0);
            for (int k = 0; k < n; k++) s += a[i * n + k] * inv[k * n + j];
            if (i == j) s -= 1.0;
            for (double c : s.raw()) CHECK(std::abs(c) < 1e-12);
        }

    // determinant against the cofactor expansion
    jet det = cpl::jet_mat_det(a, n);
    jet ref = a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
              a[2] * (a[3] * a[7] - a[4] * a[6]);
    for (size_t i = 0; i < det.raw().size(); i++)
        CHECK(det.raw()[i] == doctest::Approx(ref.raw()[i]).epsilon(1e-12));

    std::vector<jet> sing = {u, u, u, u};
    CHECK_THROWS_AS(cpl::jet_mat_inverse(sing, 2), cpl::error);
}
