#include "cprojlab/mobility.hpp"
#include "cprojlab/conify.hpp"

#include <algorithm>
#include <set>

namespace cpl {

const char* mobility_mode_name(mobility_mode mode) {
    switch (mode) {
    case mobility_mode::general: return "general";
    case mobility_mode::einstein: return "einstein";
    case mobility_mode::affine: return "affine";
    case mobility_mode::essential_general: return "essential_general";
    case mobility_mode::essential_einstein: return "essential_einstein";
    }
    return "general";
}

mobility_mode mobility_mode_from(const std::string& name) {
    for (mobility_mode m : {mobility_mode::general, mobility_mode::einstein, mobility_mode::affine,
                            mobility_mode::essential_general, mobility_mode::essential_einstein})
        if (name == mobility_mode_name(m)) return m;
    throw error(errc::unknown_key, "unknown mobility mode: " + name);
}

namespace {

// k^2 + l over the family ranges of the degree theorems
std::set<int> family_values(int n, bool einstein) {
    std::set<int> vals;
    int kmax = einstein ? n - 2 : n - 1;
    int div = einstein ? 3 : 2;
    for (int k = 0; k <= kmax; k++)
        for (int l = 1; l <= (n + 1 - k) / div; l++) vals.insert(k * k + l);
    return vals;
}

} // namespace

mobility_list enumerate_mobility(int n, mobility_mode mode) {
    if (n < 2) throw error(errc::bad_dimension, "mobility lists need n >= 2");
    std::set<int> vals;
    switch (mode) {
    case mobility_mode::general:
    case mobility_mode::einstein:
        vals = family_values(n, mode == mobility_mode::einstein);
        vals.insert(2);
        vals.insert((n + 1) * (n + 1));
        break;
    case mobility_mode::affine:
        for (int k = 0; k <= n - 1; k++)
            for (int l = 1; l <= n - k; l++) vals.insert(k * k + l);
        vals.insert(n * n);
        break;
    case mobility_mode::essential_general:
    case mobility_mode::essential_einstein: {
        for (int v : family_values(n, mode == mobility_mode::essential_einstein))
            vals.insert(v - 1);
        vals.insert(0);
        vals.insert(1);
        vals.insert((n + 1) * (n + 1) - 1);
        break;
    }
    }
    mobility_list out;
    out.n = n;
    out.mode = mode;
    bool filter = mode == mobility_mode::general || mode == mobility_mode::einstein;
    for (int v : vals) {
        out.values.push_back(v);
        out.attainable.push_back(!filter || v >= 2);
    }
    return out;
}

realization_plan make_realization_plan(int n, int k, int ell, bool einstein) {
    if (n < 2) throw error(errc::bad_dimension, "realization plans need n >= 2");
    realization_plan plan;
    plan.n = n;
    plan.k = k;
    plan.ell = ell;
    plan.einstein = einstein;
    if (ell == 0) {
        // fully flat cone realizing the top value (n+1)^2
        if (k != n + 1) throw error(errc::infeasible, "l = 0 needs the fully flat plan k = n+1");
        return plan;
    }
    int kmax = einstein ? n - 2 : n - 1;
    int kmin = einstein ? 3 : 2;
    if (k < 0 || k > kmax || ell < 1 || ell > (n + 1 - k) / kmin)
        throw error(errc::infeasible, "no cone product with these factor counts");
    plan.factor_half_dims.assign(ell, kmin);
    plan.factor_half_dims[0] += (n + 1 - k) - kmin * ell;
    return plan;
}

std::vector<realization_plan> all_realization_plans(int n, bool einstein) {
    std::vector<realization_plan> plans;
    int kmax = einstein ? n - 2 : n - 1;
    int kmin = einstein ? 3 : 2;
    for (int k = 0; k <= kmax; k++)
        for (int l = 1; l <= (n + 1 - k) / kmin; l++)
            plans.push_back(make_realization_plan(n, k, l, einstein));
    plans.push_back(make_realization_plan(n, n + 1, 0, einstein));
    return plans;
}

example realization_example(const realization_plan& plan) {
    if (2 * (plan.n + 1) > jet::max_dim)
        throw error(errc::bad_dimension, "cone product exceeds the jet dimension cap");
    example acc;
    bool have = false;
    if (plan.k > 0) {
        acc = make_flat(plan.k);
        have = true;
    }
    for (int ki : plan.factor_half_dims) {
        example cone = conify_example(make_flat(ki - 1));
        acc = have ? make_product(acc, cone) : cone;
        have = true;
    }
    return acc;
}

realization_report realize_and_verify(const realization_plan& plan, const holonomy_config& cfg) {
    example e = realization_example(plan);
    realization_report rep;
    rep.plan = plan;
    rep.expected = plan.expected();
    rep.holonomy = parallel_tensor_dim(e.K, e.domain, cfg);
    rep.measured = rep.holonomy.dimension;
    return rep;
}

} // namespace cpl
