#pragma once
#include "cprojlab/chart.hpp"

namespace cpl {

// chart data of a Kahler metric: g (0,2), J (1,1), tau (0,1) with d tau = omega
struct kahler_structure {
    tensor_field g, J, tau;
    bool has_tau() const { return (bool)tau.eval; }
};

// omega_ij = g_is J^s_j as a field
tensor_field omega_field(const kahler_structure& K);

// pointwise max-abs residuals of the defining identities
struct kahler_residuals_t {
    double hermitian;  // g(J.,J.) - g
    double jsq;        // J^2 + id
    double nijenhuis;  // integrability torsion of J
    double nabla_j;    // covariant constancy of J
    double domega;     // closedness of the Kahler form
    double dtau;       // d tau - omega, skipped (0) when tau is absent
    double worst() const;
};

kahler_residuals_t kahler_residuals(const kahler_structure& K, const point& p);

// Einstein check at a point: c = Scal/m and max |Ric - c g|
struct einstein_fit {
    double c;
    double residual;
};
einstein_fit einstein_residual(const std::vector<jet>& g2, int m);

// least-squares fit of a constant holomorphic sectional curvature c:
// residual of R^i_{jkl} against c * H^i_{jkl} with
// H = 1/4 (g_jl d^i_k - g_jk d^i_l + om_jl J^i_k - om_jk J^i_l + 2 om_kl J^i_j)
struct hol_curv_fit {
    double c;
    double residual; // max-abs of R - cH, normalized by max(1, max|R|)
};
hol_curv_fit holomorphic_curvature_residual(const std::vector<jet>& g2,
                                            const std::vector<jet>& J0, int m);

} // namespace cpl
