#pragma once
#include "cprojlab/kahler.hpp"

#include <vector>

namespace cpl {

// Holonomy sampling on a chart. Generators of the holonomy algebra at a base
// point are curvature endomorphisms R(X,Y) at remote points, conjugated back
// to the base along the transport of a random piecewise straight path. On a
// Kahler chart every generator is skew with respect to g(base) and commutes
// with J(base); the span is cut with a relative SVD threshold.

// sampler and threshold knobs; reported alongside any dimension estimate
struct holonomy_config {
    int n_loops = 16;        // closed 4 segment loops through the base
    unsigned seed = 1;       // rng stream for vertices and curvature arguments
    double delta_span = 1e-6; // relative SVD cut for the generator span
    double delta_null = 1e-6; // relative SVD cut for invariant null spaces
    double sigma_floor = 1e-9; // below this the whole span is transport noise
    int steps_per_unit = 250; // RK4 resolution of the parallel transports
    double margin = 0.9;      // loop vertices stay in the box shrunk by this
};

struct holonomy_sample {
    point base;
    int m = 0;
    std::vector<std::vector<double>> generators; // m x m row-major, at base
    std::vector<std::vector<double>> span_basis; // orthonormal span, row-major
    int span_dim = 0;
    bool indefinite = false; // g(base) not positive definite; best effort only
    std::vector<double> sing_vals; // singular values behind the span cut
};

holonomy_sample holonomy_algebra(const kahler_structure& K, const box& domain,
                                 const point& base, const holonomy_config& cfg = {});

// recompute the span of the first n_gen generators (prefix of the sample);
// used for stabilization diagnostics without re-transporting anything
holonomy_sample span_of_prefix(const holonomy_sample& hs, int n_gen,
                               const holonomy_config& cfg = {});

// symmetric matrices S at the base with S(h.,.) + S(.,h.) = 0 for every span
// generator h and S(J.,J.) = S; these are the candidates for values of
// parallel hermitian symmetric (0,2) tensor fields
struct invariant_tensor_space {
    int dimension = 0;
    std::vector<std::vector<double>> basis; // m x m row-major, symmetric
};

invariant_tensor_space invariant_tensors(const holonomy_sample& hs,
                                         const kahler_structure& K,
                                         double delta_null = 1e-6);

// dims of a maximal orthogonal invariant decomposition of the tangent space:
// the common kernel of the span first (omitted when zero), then the blocks
// cut out by a generic symmetric element of the commutant, ascending. Blocks
// are checked to be J invariant and even dimensional.
std::vector<int> block_decomposition(const holonomy_sample& hs, const kahler_structure& K,
                                     unsigned seed = 7, double delta = 1e-6);

// composite estimate with a stabilization check: the invariant dimension is
// computed from loop prefixes of sizes n_loops, 2 n_loops and 4 n_loops and
// must agree across the two doublings, else errc::non_stabilized. span_dims
// is non decreasing and dims non increasing by construction.
struct parallel_report {
    int dimension = 0;
    std::vector<int> stages;    // loop counts per stage
    std::vector<int> span_dims; // span dimension per stage
    std::vector<int> dims;      // invariant dimension per stage
    holonomy_sample sample;     // largest stage
    invariant_tensor_space space;
};

parallel_report parallel_tensor_dim(const kahler_structure& K, const box& domain,
                                    const holonomy_config& cfg = {});

} // namespace cpl
