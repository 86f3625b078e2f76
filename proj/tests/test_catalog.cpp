#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "cprojlab/catalog.hpp"

#include "cprojlab/chart.hpp"
#include "doctest.h"
#include "helpers.hpp"

#include <cmath>

using namespace cpl;

namespace {

std::vector<example> core_entries() {
    std::vector<example> v;
    v.push_back(make_flat(1));
    v.push_back(make_flat(2));
    v.push_back(make_flat(3));
    v.push_back(make_fubini_study(1));
    v.push_back(make_fubini_study(2));
    v.push_back(make_fubini_study(3));
    v.push_back(make_ricciflat4d());
    v.push_back(make_product(make_flat(1), make_fubini_study(1)));
    v.push_back(make_product(make_fubini_study(1), make_flat(2)));
    return v;
}

// max residual of d mu = 2B lambda and covd lambda = mu g + B A at p
double triple_check(const example& e, const csolution& s, const point& p) {
    const int m = e.dim;
    std::vector<jet> g1 = e.K.g.at(p, 1);
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
    return worst;
}

double max_abs(const std::vector<double>& v) {
    double r = 0.0;
    for (double x : v) r = std::max(r, std::abs(x));
    return r;
}

} // namespace

TEST_CASE("every catalog entry satisfies the kahler identities") {
    for (const example& e : core_entries()) {
        CAPTURE(e.name);
        for (const point& p : halton_points(e.domain, 10)) {
            kahler_residuals_t r = kahler_residuals(e.K, p);
            CHECK(r.worst() < 1e-9);
        }
    }
}

TEST_CASE("every catalog solution is symmetric and hermitian") {
    for (const example& e : core_entries()) {
        CAPTURE(e.name);
        const int m = e.dim;
        for (const csolution& s : e.solutions) {
            CAPTURE(s.tag);
            for (const point& p : halton_points(e.domain, 4)) {
                std::vector<jet> A = s.A.at(p, 0);
                std::vector<jet> J = e.K.J.at(p, 0);
                for (int i = 0; i < m; i++)
                    for (int j = 0; j < m; j++) {
                        CHECK(std::abs(A[i * m + j].value() - A[j * m + i].value()) < 1e-10);
                        double ajj = 0.0; // A(J e_i, J e_j)
                        for (int a = 0; a < m; a++)
                            for (int b = 0; b < m; b++)
                                ajj += J[a * m + i].value() * A[a * m + b].value() *
                                       J[b * m + j].value();
                        CHECK(std::abs(ajj - A[i * m + j].value()) < 1e-9);
                    }
            }
        }
    }
}

TEST_CASE("solutions with a finite constant satisfy the prolonged relations") {
    int checked = 0;
    for (const example& e : core_entries()) {
        CAPTURE(e.name);
        for (const csolution& s : e.solutions) {
            if (!std::isfinite(s.B)) continue;
            CAPTURE(s.tag);
            for (const point& p : halton_points(e.domain, 5)) CHECK(triple_check(e, s, p) < 1e-9);
            checked++;
        }
    }
    CHECK(checked >= 15);
}

TEST_CASE("flat charts are flat and einstein") {
    example e = make_flat(2);
    for (const point& p : halton_points(e.domain, 4)) {
        std::vector<jet> g2 = e.K.g.at(p, 2);
        CHECK(max_abs(riemann_vals(g2, e.dim)) < 1e-12);
        einstein_fit f = einstein_residual(g2, e.dim);
        CHECK(std::abs(f.c) < 1e-12);
        CHECK(f.residual < 1e-12);
    }
}

TEST_CASE("fubini study is einstein with the normalized scalar curvature") {
    for (int n : {1, 2, 3}) {
        example e = make_fubini_study(n);
        CAPTURE(n);
        for (const point& p : halton_points(e.domain, 5)) {
            std::vector<jet> g2 = e.K.g.at(p, 2);
            CHECK(rel_err(scalar_curvature(g2, e.dim), 4.0 * n * (n + 1)) < 1e-9);
            einstein_fit f = einstein_residual(g2, e.dim);
            CHECK(rel_err(f.c, 2.0 * (n + 1)) < 1e-9);
            CHECK(f.residual < 1e-9);
            hol_curv_fit h = holomorphic_curvature_residual(g2, e.K.J.at(p, 0), e.dim);
            CHECK(rel_err(h.c, 4.0) < 1e-8);
            CHECK(h.residual < 1e-8);
        }
    }
}

TEST_CASE("the 4d ricci flat example is ricci flat but curved") {
    example e = make_ricciflat4d();
    CHECK(e.dim == 4);
    CHECK(e.solutions.size() == 1);
    for (const point& p : halton_points(e.domain, 6)) {
        std::vector<jet> g2 = e.K.g.at(p, 2);
        einstein_fit f = einstein_residual(g2, 4);
        CHECK(std::abs(f.c) < 1e-9);
        CHECK(f.residual < 1e-9);
        CHECK(max_abs(riemann_vals(g2, 4)) > 1e-2);
    }
    // the pencil solution has no global constant: the triple relations fail
    CHECK(!std::isfinite(e.solutions[0].B));
    csolution forced = e.solutions[0];
    forced.B = 0.0;
    double worst = 0.0;
    for (const point& p : halton_points(e.domain, 4))
        worst = std::max(worst, triple_check(e, forced, p));
    CHECK(worst > 1e-2);
}

TEST_CASE("products combine dimensions, curvature and solutions") {
    example a = make_flat(1), b = make_fubini_study(1);
    example e = make_product(a, b);
    CHECK(e.dim == 4);
    CHECK(e.n == 2);
    CHECK(e.solutions.size() == a.solutions.size() + b.solutions.size());
    CHECK(!e.einstein); // einstein constants 0 and 4 differ
    CHECK(rel_err(e.scal, b.scal) < 1e-14);

    // scalar curvature of the product is the sum over the factors
    for (const point& p : halton_points(e.domain, 3)) {
        std::vector<jet> g2 = e.K.g.at(p, 2);
        CHECK(rel_err(scalar_curvature(g2, 4), 8.0) < 1e-9);
    }

    // extended solutions: factor tags survive with a prefix
    bool found = false;
    for (const csolution& s : e.solutions)
        if (s.tag == a.name + ":quadratic") found = true;
    CHECK(found);

    example ee = make_product(make_fubini_study(1), make_fubini_study(1));
    CHECK(ee.einstein); // equal einstein constants
    CHECK(rel_err(ee.scal, 16.0) < 1e-14);
}

TEST_CASE("product of too high dimension is rejected") {
    example a = make_flat(3), b = make_flat(3);
    example p = make_product(a, b); // 12 is exactly the cap
    CHECK(p.dim == 12);
    CHECK_THROWS_AS(make_product(p, make_flat(1)), error);
    try {
        make_product(p, make_flat(1));
    } catch (const error& err) {
        CHECK(err.code == errc::bad_dimension);
    }
}

TEST_CASE("rescaling maps curvature and solutions consistently") {
    example e = rescale_example(make_fubini_study(2), 2.0);
    for (const point& p : halton_points(e.domain, 4)) {
        std::vector<jet> g2 = e.K.g.at(p, 2);
        CHECK(rel_err(scalar_curvature(g2, 4), 12.0) < 1e-9);
        kahler_residuals_t r = kahler_residuals(e.K, p);
        CHECK(r.worst() < 1e-9);
    }
    for (const csolution& s : e.solutions) {
        CAPTURE(s.tag);
        CHECK(rel_err(s.B, -0.5) < 1e-14);
        for (const point& p : halton_points(e.domain, 3)) CHECK(triple_check(e, s, p) < 1e-9);
    }
}

TEST_CASE("potential construction rejects a vanishing constant") {
    example e = make_fubini_study(1);
    tensor_field mu = constant_field(2, 0, 0, {1.0});
    CHECK_THROWS_AS(solution_from_potential(e.K, mu, 0.0, "bad"), error);
    try {
        solution_from_potential(e.K, mu, 0.0, "bad");
    } catch (const error& err) {
        CHECK(err.code == errc::b_zero);
    }
}

TEST_CASE("json constructs build catalog entries") {
    example e1 = example_from_spec(R"({"construct":"catalog","name":"flat","n":2})");
    CHECK(e1.dim == 4);
    CHECK(e1.name == "flat(n=2)");

    example e2 = example_from_spec(R"({"construct":"catalog","name":"fubini_study","n":1})");
    CHECK(e2.dim == 2);

    example e3 = example_from_spec(R"({"construct":"catalog","name":"ricciflat4d"})");
    CHECK(e3.dim == 4);

    example e4 = example_from_spec(
        R"({"construct":"product","factors":[
             {"construct":"catalog","name":"flat","n":1},
             {"construct":"catalog","name":"fubini_study","n":1}]})");
    CHECK(e4.dim == 4);

    example e5 = example_from_spec(
        R"({"construct":"conify","base":{"construct":"catalog","name":"flat","n":1}})");
    CHECK(e5.dim == 4);
    CHECK(e5.n == 2);
}

TEST_CASE("json construct errors carry the right codes") {
    auto code_of = [](const std::string& text) {
        try {
            example_from_spec(text);
        } catch (const error& err) {
            return err.code;
        }
        return errc::jet_order; // not reached on the error paths below
    };
    CHECK(code_of("{not json") == errc::schema_error);
    CHECK(code_of(R"({"name":"flat"})") == errc::schema_error);
    CHECK(code_of(R"({"construct":"catalog","name":"torus"})") == errc::unknown_key);
    CHECK(code_of(R"({"construct":"warp","base":{}})") == errc::unknown_key);
    CHECK(code_of(R"({"construct":"product","factors":[{"construct":"catalog","name":"flat"}]})") ==
          errc::schema_error);
    CHECK(code_of(R"({"construct":"conify"})") == errc::schema_error);
}

TEST_CASE("catalog keys list the available constructs") {
    std::vector<std::string> keys = catalog_keys();
    CHECK(keys.size() == 5);
    CHECK(keys[0] == "flat");
    CHECK(keys[1] == "fubini_study");
    CHECK(keys[2] == "ricciflat4d");
    CHECK(keys[3] == "product");
    CHECK(keys[4] == "conify");
}
