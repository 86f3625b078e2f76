#pragma once
#include "cprojlab/catalog.hpp"

namespace cpl {

// The operations in this header implement the equivalence machinery between
// metrics sharing the J-planar curves of a Kahler structure (g, J):
//
//   linear system      nabla_k A_ij = lambda_i g_jk + lambda_j g_ik
//                                     + (lambda J)_i om_jk + (lambda J)_j om_ik
//   prolonged triple   nabla lambda = mu g + B A,   d mu = 2 B lambda
//
// with om_ij = g_is J^s_j and (lambda J)_j = lambda_s J^s_j. Nondegenerate
// solutions A correspond to metrics gt via the substitution below; the pair
// direction and the solution direction are mutual inverses.

// c-projectively related pair with the connecting exact 1-form:
// phi = 1/(4(n+1)) ln(det gt / det g), Phi = d phi
struct metric_pair {
    tensor_field g, gt; // (0,2)
    tensor_field phi;   // scalar
    tensor_field Phi;   // (0,1)
};

metric_pair make_metric_pair(const tensor_field& g, const tensor_field& gt);

struct pair_solution {
    metric_pair pair;
    csolution sol;            // A, lambda only; B stays NaN, mu absent
    double lambda_crosscheck; // max |lambda - 1/4 d trace_g A| over the pts
};

// A = (det gt/det g)^{1/(2(n+1))} g gt^{-1} g and lambda = -Phi g^{-1} A;
// both metrics are checked for nondegeneracy and J-compatibility at pts
pair_solution solution_from_metric_pair(const kahler_structure& K, const tensor_field& gt,
                                        const std::vector<point>& pts, double tol = 1e-7);

// inverse substitution gt = det(g^{-1}A)^{-1/2} g A^{-1} g; throws
// degenerate_solution when |det(g^{-1}A)| <= delta at one of pts
tensor_field metric_from_solution(const kahler_structure& K, const tensor_field& A,
                                  const std::vector<point>& pts, double delta = 1e-8);

// lambda = 1/4 d trace_g(A) as a field (the trace identity of the system)
tensor_field lambda_from_A(const kahler_structure& K, const tensor_field& A);

// max residual of the linear system for (A, lambda) over pts
double mobility_residual(const kahler_structure& K, const tensor_field& A,
                         const tensor_field& lambda, const std::vector<point>& pts);

// residuals of the three prolonged equations for a solution carrying mu and
// a finite constant B
struct triple_residuals_t {
    double tensor_eq = 0.0;  // linear system on A
    double oneform_eq = 0.0; // nabla lambda - (mu g + B A)
    double scalar_eq = 0.0;  // d mu - 2 B lambda
    double worst() const;
};
triple_residuals_t triple_residual(const kahler_structure& K, const csolution& s,
                                   const std::vector<point>& pts);

// pointwise least-squares extraction of (mu, B) from nabla lambda = mu g + B A.
// B is averaged over the points; the spread diagnoses whether a single
// constant exists. fit_residual is the worst pointwise LS residual, and
// degenerate is set when A is a multiple of g somewhere (B indeterminate,
// the fit then fixes B = 0 at such points).
struct mu_b_fit {
    double B = 0.0;
    double B_spread = 0.0;
    double fit_residual = 0.0;
    bool degenerate = false;
    std::vector<double> mu_values, B_values; // per point
};
mu_b_fit fit_mu_B(const kahler_structure& K, const tensor_field& A, const tensor_field& lambda,
                  const std::vector<point>& pts);

// mu = (trace_g nabla lambda - B trace_g A) / (2n) as a scalar field
tensor_field mu_field_from_lambda(const kahler_structure& K, const tensor_field& A,
                                  const tensor_field& lambda, double B);

// max residual of the connection transformation law
// Gt^i_jk - G^i_jk = d^i_j Phi_k + d^i_k Phi_j - J^i_j (Phi J)_k - J^i_k (Phi J)_j
double connection_change_residual(const kahler_structure& K, const metric_pair& pair,
                                  const std::vector<point>& pts);

// constant and 1-form of the prolonged system written for the metric of A:
//   Bt     = sqrt(det F) (lambda^T A^{-1} lambda - mu),  F = g^{-1} A
//   Lt     = -sqrt(det F) F^{-1} Lambda,                 Lambda = g^{-1} lambda
// lambda_tilde = gt(Lt, .) with gt = metric_from_solution(A)
struct transformed_constants {
    double Btilde = 0.0;
    double Btilde_spread = 0.0;
    tensor_field Lambda_tilde; // (1,0)
    tensor_field lambda_tilde; // (0,1)
};
transformed_constants transform_constants(const kahler_structure& K, const csolution& s,
                                          const std::vector<point>& pts);

// image of a solution S under the class isomorphism attached to a
// nondegenerate pivot solution A0 with metric gt: as (1,1)-tensors
// S -> S F0^{-1}, returned in (0,2) form for gt
tensor_field push_solution(const kahler_structure& K, const tensor_field& gt,
                           const tensor_field& A0, const tensor_field& S);

// specializations valid when g is Einstein; g is checked first
struct einstein_relations_t {
    double b_scal = 0.0;     // |B + Scal/(4n(n+1))|
    double ricci_law = 0.0;  // Ric(gt) = Ric(g) - 2(n+1)(nabla Phi - Phi o Phi + PhiJ o PhiJ)
    double b_pair_law = 0.0; // B g - Bt gt = -nabla Phi + Phi o Phi - PhiJ o PhiJ
    double B_spread = 0.0;   // diagnostic of the pointwise (mu, B) fit
};
einstein_relations_t einstein_relations(const kahler_structure& K, const tensor_field& gt,
                                        const csolution& s, const std::vector<point>& pts,
                                        double einstein_tol = 1e-6);

// primitive F with dF = ell, computed by Gauss-Legendre quadrature along the
// straight segment from base; exact to quadrature error when ell is closed
tensor_field scalar_primitive(const tensor_field& ell, const point& base, int nodes = 32);

// renormalization of the constant: a metric in the same class achieving
// B = -1. Nonzero B rescales in place; B = 0 runs the deformation family
// A(t) = t (lambda o lambda + lambdaJ o lambdaJ) + g built from a solution
// scaled to mu = 1 (constructed via sigma = A g^{-1} lambda - f lambda
// + f' lambda(J.) when the input has mu = 0).
struct normalized_structure {
    kahler_structure K2; // new metric with the shared J; tau left empty
    csolution sol;       // pivot solution on K2 with B = -1
    double t0 = 0.0;     // family parameter used, 0 for the rescale path
    double Btilde = 0.0; // constant of the intermediate metric
    double fprime0 = qnan; // numeric derivative at 0 of f(t) = t^2 lam A(t)^{-1} lam - t
    bool deformed = false;
};
normalized_structure normalize_b(const kahler_structure& K, const csolution& s, const box& domain,
                                 bool force_deform = false, double tol = 1e-7);

// trace-adjusted Lie-derivative image of a vector field:
// f(v) = -1/2 (L_v g - trace_g(L_v g)/(2(n+1)) g); v is c-projective
// exactly when f(v) solves the linear system
struct field_residual_t {
    tensor_field fv; // (0,2) candidate solution
    double residual; // mobility residual of (fv, 1/4 d trace fv)
};
tensor_field lie_derivative_metric(const kahler_structure& K, const tensor_field& v);
field_residual_t cproj_field_residual(const kahler_structure& K, const tensor_field& v,
                                      const std::vector<point>& pts);

// essential vector field of a solution: Lambda = g^{-1} lambda. Needs a
// nonzero constant B (taken from the solution, or predicted from the scalar
// curvature when the example is Einstein); B = 0 raises b_zero.
tensor_field essential_field_from_solution(const example& e, const csolution& s,
                                           const std::vector<point>& pts, double tol = 1e-7);

// residual of the third-order equation satisfied by the scalar of a triple:
// (nabla^3 mu)(X,Y,Z) = B [2 (nabla_X mu) g(Y,Z) + (nabla_Z mu) g(X,Y)
//   + (nabla_Y mu) g(X,Z) - (nabla_JZ mu) g(JX,Y) - (nabla_JY mu) g(JX,Z)]
double tanno_residual(const kahler_structure& K, const tensor_field& mu, double B,
                      const std::vector<point>& pts);

// ---- 2-form repackaging ----
// phi_ij = -J^s_i A_sj is antisymmetric hermitian when A is symmetric
// hermitian; the inverse direction raises with J again.
tensor_field twoform_from_solution(const kahler_structure& K, const tensor_field& A);
tensor_field solution_from_twoform(const kahler_structure& K, const tensor_field& phi);

// trace_om phi = sum_i phi(J e_i, e_i) = g^{ab} J^s_a phi_sb as a field
tensor_field omega_trace_field(const kahler_structure& K, const tensor_field& phi);

// psi = phi - (1/4 trace_om phi) om
tensor_field conformal_from_hamiltonian(const kahler_structure& K, const tensor_field& phi);
// phi = psi - (1/(2n-4) trace_om psi) om; throws dimension_too_small at dim 4
tensor_field hamiltonian_from_conformal(const kahler_structure& K, const tensor_field& psi);

// residual of nabla_X phi = X^b ^ (lambda J) + (JX)^b ^ lambda
double hamiltonian_residual(const kahler_structure& K, const tensor_field& phi,
                            const tensor_field& lambda, const std::vector<point>& pts);
// residual of nabla_X psi = X^b ^ alpha - (JX)^b ^ (alpha J) + (alpha J)(X) om
double conformal_killing_residual(const kahler_structure& K, const tensor_field& psi,
                                  const tensor_field& alpha, const std::vector<point>& pts);

} // namespace cpl
