#pragma once
#include "cprojlab/catalog.hpp"

namespace cpl {

// Cone over a Kahler chart (g, J, tau) with d tau = omega. Chart coordinates
// on the cone are (r, t, x^1..x^m); the level P = R x M carries the metric
// h = theta^2 + g with theta = dt - 2 tau, and the cone metric is
// g_hat = dr^2 + r^2 h. The cone field is xi = r d_r, the Reeb field is
// eta = J_hat xi = d_t, and the horizontal lift of a base vector X is
// X^theta = X + 2 tau(X) d_t, so that theta(X^theta) = 0.

// metric, complex structure and potential of the cone chart (dim m+2);
// the cone potential is tau_hat = -r^2/2 theta, so d tau_hat = omega_hat
kahler_structure conify_structure(const kahler_structure& base);

// level metric h on P = R x M, chart coordinates (t, x), dim m+1
tensor_field sasaki_metric(const kahler_structure& base);

// catalog combinator. Einstein bases with positive scalar curvature are
// rescaled to Scal = 4n(n+1) first, which makes the cone Ricci flat.
// Solutions with constant B = -1 lift to parallel tensors on the cone and
// are stored as B = 0 solutions there.
example conify_example(const example& base);

// primitive of omega on a star-shaped chart: radial homotopy from base_pt,
// Gauss-Legendre quadrature in the homotopy parameter
tensor_field potential_from_omega(const kahler_structure& K, const point& base_pt,
                                  int nodes = 32);

// parallel hermitian tensor on the cone built from a solution with B = -1:
//   A_hat = mu dr^2 - r dr (x) lambda - r lambda (x) dr + r^2 L,
//   L = mu theta^2 + theta (x) lambda(J.) + lambda(J.) (x) theta + A.
// When tol > 0 the triple relations d mu = 2B lambda and
// covd lambda = mu g + B A are spot-checked on the base first.
tensor_field lift_solution(const example& base, const csolution& s, double tol = 1e-9);

// pointwise inverse of the lift at a cone point (r, t, x)
struct cone_readoff {
    std::vector<double> A;      // m x m row-major
    std::vector<double> lambda; // m
    double mu = 0.0;
};
cone_readoff solution_from_cone(const example& base, const tensor_field& Ahat,
                                const point& cone_pt);

// residuals of the first-order system on P solved by (L, sigma, rho) =
// (mu theta^2 + theta (x) lambda(J.) + lambda(J.) (x) theta + A, lambda, mu)
struct sasaki_residuals_t {
    double tensor_eq;  // covd L - (h (x) sigma)_sym
    double oneform_eq; // covd sigma - (rho h - L)
    double scalar_eq;  // d rho + 2 sigma
    double invariance; // sigma(eta) = 0, sigma((JX)^theta) = L(eta, X^theta), rho = L(eta,eta)
    double worst() const;
};
sasaki_residuals_t sasaki_system_residual(const example& base, const csolution& s,
                                          const point& base_pt);

// residuals of the closed-form connection and curvature identities on the
// cone, measured against chart-core numerics at one cone point
struct cone_curvature_residuals_t {
    double connection; // nabla_hat xi = Id, nabla_hat eta = J_hat, lift rules
    double radial;     // R_hat(.,.) xi = R_hat(.,.) eta = 0
    double level;      // R_hat vs R(h) - (h(Z,Y)X - h(Z,X)Y) on the level
    double horizontal; // R_hat on lifts vs R - 4H on the base
    double ricci;      // Ric(g_hat) on lifts vs Ric(g) - 2(n+1) g
    double worst() const;
};
cone_curvature_residuals_t cone_curvature_closed_form(const example& base,
                                                      const point& cone_pt);

} // namespace cpl
