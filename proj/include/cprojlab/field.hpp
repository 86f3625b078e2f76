#pragma once
#include "cprojlab/jet.hpp"

#include <functional>
#include <vector>

namespace cpl {

using point = std::vector<double>;

// axis-aligned sampling domain for a chart
struct box {
    std::vector<double> lo, hi;

    int dim() const { return (int)lo.size(); }
    point center() const;
    bool contains(const point& p, double pad = 0.0) const;
    // box scaled toward its center, frac in (0,1]
    box shrunk(double frac) const;
};

// Halton low-discrepancy points in the box, bases = first primes per axis.
// offset shifts the start index so callers can draw disjoint deterministic
// batches from the same sequence.
std::vector<point> halton_points(const box& b, int count, int offset = 0);

// Tensor field on a chart. eval fills the packed component array with jets
// truncated at the requested order; layout is row-major over the index
// tuple, contravariant slots first. All components share dim and order.
struct tensor_field {
    int dim = 0;
    int nup = 0, ndn = 0;
    std::function<void(const point&, int, std::vector<jet>&)> eval;

    int rank() const { return nup + ndn; }
    int ncomp() const {
        int n = 1;
        for (int r = 0; r < rank(); r++) n *= dim;
        return n;
    }
    std::vector<jet> at(const point& p, int order) const {
        std::vector<jet> out;
        eval(p, order, out);
        return out;
    }
};

tensor_field constant_field(int dim, int nup, int ndn, std::vector<double> comps);

// pointwise linear combination a*F + b*G of fields with equal signature
tensor_field field_lin(double a, const tensor_field& F, double b, const tensor_field& G);

std::vector<double> values_of(const std::vector<jet>& comps);

// n x n jet matrix product, row-major
std::vector<jet> mat_mul(const std::vector<jet>& a, const std::vector<jet>& b, int n);

} // namespace cpl
