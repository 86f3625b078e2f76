#pragma once
#include "cprojlab/kahler.hpp"

#include <vector>

namespace cpl {

// Curves whose acceleration stays complex proportional to their velocity:
// nabla_v v = alpha(t) v + beta(t) J v. On charts of real dimension two the
// defining wedge (nabla_v v) ^ v ^ Jv vanishes identically, so every curve
// passes; the notion carries content from dimension four on.

struct jplanar_curve {
    double dt = 0.0;
    std::vector<point> samples;
    std::vector<point> velocities;
    int size() const { return (int)samples.size(); }
};

// RK4 integration of the reparametrized geodesic equation from (p, X);
// alpha and beta are polynomial coefficients in t, lowest degree first.
// Throws errc::path_leaves_domain when the curve exits the box and
// errc::zero_velocity for a vanishing start vector.
jplanar_curve integrate_jplanar(const kahler_structure& K, const box& domain, const point& p,
                                const point& X, const std::vector<double>& alpha,
                                const std::vector<double>& beta, double T, int steps = 400);

// same integrator, silently truncated at the domain boundary; the curve
// keeps at least the samples produced before leaving
jplanar_curve integrate_jplanar_clipped(const kahler_structure& K, const box& domain,
                                        const point& p, const point& X,
                                        const std::vector<double>& alpha,
                                        const std::vector<double>& beta, double T,
                                        int steps = 400);

// J-planarity measure of a sampled curve: accelerations are recovered from
// the velocities by fourth order differences; at each interior sample the
// part of nabla_v v off span{v, Jv} is divided by max(|nabla_v v|, |v|^2),
// and the residual is the worst sample. The scale keeps plain geodesics
// near zero and is invariant under affine reparametrization. alpha/beta
// hold the least squares coefficients per interior sample. Throws
// errc::zero_velocity on a vanishing sample.
struct jplanar_fit {
    double residual = 0.0;
    std::vector<double> alpha, beta;
};
jplanar_fit jplanar_residual(const kahler_structure& K, const jplanar_curve& c);

// empirical equivalence probe: geodesics of one metric must be J-planar for
// the other. forward holds the residuals of gt geodesics measured against
// (g, J), backward the reverse direction.
struct equivalence_report {
    std::vector<double> forward, backward;
    double worst = 0.0;
};
equivalence_report equivalence_probe(const kahler_structure& K, const tensor_field& gt,
                                     const box& domain, int trials = 20, unsigned seed = 1,
                                     double T = 0.6, int steps = 400);

} // namespace cpl
