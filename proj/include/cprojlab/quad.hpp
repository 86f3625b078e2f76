#pragma once
#include "cprojlab/jet.hpp"

#include <vector>

namespace cpl {

struct glrule {
    std::vector<double> x, w; // nodes and weights on [0,1]
};

glrule gauss_legendre01(int n);

// jet of f(b + t(x-b)) at x, given the jet of f at the scaled point
jet radial_scale(const jet& a, double t);

} // namespace cpl
