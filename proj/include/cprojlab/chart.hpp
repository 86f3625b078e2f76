#pragma once
#include "cprojlab/field.hpp"

namespace cpl {

// Conventions used throughout:
//   Gamma layout      G[(i*m + j)*m + k] = Gamma^i_{jk}, symmetric in j,k
//   Riemann layout    R[((i*m + j)*m + k)*m + l] = R^i_{jkl},
//                     with R(d_k, d_l) d_j = R^i_{jkl} d_i
//   Ricci             Ric_{ab} = R^i_{b i a}
//   covd index order  (covd T)^{i...}_{k j...} = (nabla_k T)^{i...}_{j...}

// fast path: metric jets of order >= 1, plain double output
void christoffel_vals(const std::vector<jet>& g, int m, double* out);

// reference path: jet-valued symbols, order drops by one
std::vector<jet> christoffel_jets(const std::vector<jet>& g, int m);

// needs metric jets of order >= 2
std::vector<double> riemann_vals(const std::vector<jet>& g, int m);

std::vector<double> ricci_from_riemann(const std::vector<double>& R, int m);

// inverse of the metric value matrix, row-major
std::vector<double> metric_inverse_vals(const std::vector<jet>& g, int m);

double scalar_curvature(const std::vector<jet>& g, int m);

// Levi-Civita covariant derivative; the new covariant slot comes first
// among the lower indices. Evaluable at order <= T's max order - 1.
tensor_field covd(const tensor_field& T, const tensor_field& g);

struct polyline {
    std::vector<point> verts;
    double length() const; // chart-coordinate length
};

// closed coordinate rectangle in the (a,b) plane through p, sides sa, sb
polyline coord_rectangle(const point& p, int a, int b, double sa, double sb);

// RK4 parallel transport of ncols vectors (frame columns, row-major m x ncols)
// along the polyline. steps_per_unit counts RK4 steps per unit coordinate length.
void transport_frame(const tensor_field& g, const polyline& path, std::vector<double>& frame,
                     int ncols, int steps_per_unit = 1000);

std::vector<double> parallel_transport(const tensor_field& g, const polyline& path,
                                       std::vector<double> v, int steps_per_unit = 1000);

struct geodesic_result {
    point x, v;
    double energy_drift; // max relative change of g(v,v) along the run
};

geodesic_result geodesic_shoot(const tensor_field& g, const point& x0, const point& v0,
                               double time, int steps_per_unit = 1000);

} // namespace cpl
