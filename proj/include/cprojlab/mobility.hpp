#pragma once
#include "cprojlab/catalog.hpp"
#include "cprojlab/holonomy.hpp"

#include <string>
#include <vector>

namespace cpl {

// Closed-form value lists for the dimension of the solution space of the
// mobility equation on simply connected charts of real dimension 2n >= 4,
// plus planners that build product-cone charts realizing each listed value
// through the parallel tensor count of the holonomy module.

enum class mobility_mode { general, einstein, affine, essential_general, essential_einstein };

const char* mobility_mode_name(mobility_mode mode);
mobility_mode mobility_mode_from(const std::string& name); // errc::unknown_key

struct mobility_list {
    int n = 0;
    mobility_mode mode = mobility_mode::general;
    std::vector<int> values;     // ascending, no duplicates
    std::vector<bool> attainable; // realizable with a non affine equivalent pair
};

// raw theorem sets:
//   general              2, k^2+l (k=0..n-1, l=1..[(n+1-k)/2]), (n+1)^2
//   einstein             2, k^2+l (k=0..n-2, l=1..[(n+1-k)/3]), (n+1)^2
//   affine               k^2+l (k=0..n-1, l=1..n-k), n^2
//   essential modes      0, 1, the matching family shifted by -1, (n+1)^2-1
// attainability: >= 2 for general/einstein, everything for the other modes
mobility_list enumerate_mobility(int n, mobility_mode mode); // errc::bad_dimension for n < 2

// product-cone construction for the value k^2 + l: a flat factor R^{2k} and
// l cone factors conify(flat C^{k_i - 1}) with k_i >= 2 (>= 3 when the base
// must stay Einstein) and sum k_i = n+1-k. The fully flat plan l = 0 with
// k = n+1 realizes the top value (n+1)^2.
struct realization_plan {
    int n = 0, k = 0, ell = 0;
    bool einstein = false;
    std::vector<int> factor_half_dims;
    int expected() const { return k * k + ell; }
};

// greedy partition: all k_i at the minimum, remainder added to the first;
// errc::infeasible when l is out of range for the mode
realization_plan make_realization_plan(int n, int k, int ell, bool einstein = false);

// every feasible plan for the dimension, fully flat one included
std::vector<realization_plan> all_realization_plans(int n, bool einstein = false);

// catalog product named by the plan; cone charts cap at jet::max_dim
example realization_example(const realization_plan& plan);

struct realization_report {
    realization_plan plan;
    int expected = 0;
    int measured = 0;
    parallel_report holonomy;
};

realization_report realize_and_verify(const realization_plan& plan,
                                      const holonomy_config& cfg = {});

} // namespace cpl
