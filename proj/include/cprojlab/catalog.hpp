#pragma once
#include "cprojlab/kahler.hpp"

#include <limits>
#include <string>
#include <vector>

namespace cpl {

constexpr double qnan = std::numeric_limits<double>::quiet_NaN();

// compatible solution of the mobility equation on an example: A (0,2)
// hermitian symmetric, lambda (0,1), mu scalar. B is the constant of the
// prolonged system when the solution satisfies it globally, NaN otherwise.
struct csolution {
    tensor_field A, lambda, mu;
    double B = qnan;
    bool mu_zero = false;
    std::string tag;
};

struct example {
    std::string name;
    int n = 0;   // complex dimension
    int dim = 0; // real chart dimension, always 2n
    kahler_structure K;
    box domain;
    bool einstein = false;
    double scal = qnan;  // constant scalar curvature when known
    double hol_c = qnan; // constant holomorphic sectional curvature when known
    std::vector<csolution> solutions;
    std::vector<std::string> notes;
};

example make_flat(int n);
example make_fubini_study(int n);
example make_ricciflat4d();
example make_product(const example& a, const example& b);

// g -> s*g with solutions mapped along (A,lambda,mu,B) -> (sA,lambda,mu/s,B/s)
example rescale_example(const example& e, double s);

// builds (lambda, A) from a scalar potential via lambda = -d mu / (2|B|)
// ... precisely: lambda = d mu / (2B), A = (covd lambda - mu g)/B
csolution solution_from_potential(const kahler_structure& K, const tensor_field& mu, double B,
                                  const std::string& tag);

// JSON construct spec, e.g.
//   {"construct":"catalog","name":"fubini_study","n":2}
//   {"construct":"product","factors":[...,...]}
//   {"construct":"conify","base":...}
example example_from_spec(const std::string& json_text);

std::vector<std::string> catalog_keys();

} // namespace cpl
