#include "cprojlab/holonomy.hpp"
#include "cprojlab/batch.hpp"
#include "cprojlab/chart.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace cpl {

namespace {

using emat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

emat as_mat(const std::vector<double>& v, int rows, int cols) {
    emat a(rows, cols);
    for (int i = 0; i < rows; i++)
        for (int j = 0; j < cols; j++) a(i, j) = v[i * cols + j];
    return a;
}

std::vector<double> as_vec(const emat& a) {
    std::vector<double> v(a.rows() * a.cols());
    for (int i = 0; i < a.rows(); i++)
        for (int j = 0; j < a.cols(); j++) v[i * a.cols() + j] = a(i, j);
    return v;
}

// one closed 4 segment loop through the base: three interior vertices and a
// unit curvature argument pair (X, Y) for the base and for each vertex
struct loop_spec {
    std::vector<point> verts;          // q1, q2, q3
    std::vector<std::vector<double>> X; // 4 of m
    std::vector<std::vector<double>> Y;
};

std::vector<double> unit_vector(std::mt19937& rng, int m) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(m);
    double nrm = 0.0;
    do {
        nrm = 0.0;
        for (int i = 0; i < m; i++) {
            v[i] = u(rng);
            nrm += v[i] * v[i];
        }
    } while (nrm < 1e-4);
    nrm = std::sqrt(nrm);
    for (int i = 0; i < m; i++) v[i] /= nrm;
    return v;
}

std::vector<loop_spec> draw_loops(const box& inner, int n_loops, unsigned seed, int m) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<loop_spec> loops(n_loops);
    for (loop_spec& L : loops) {
        L.verts.resize(3, point(m, 0.0));
        for (int k = 0; k < 3; k++)
            for (int i = 0; i < m; i++)
                L.verts[k][i] = inner.lo[i] + u01(rng) * (inner.hi[i] - inner.lo[i]);
        for (int k = 0; k < 4; k++) {
            L.X.push_back(unit_vector(rng, m));
            L.Y.push_back(unit_vector(rng, m));
        }
    }
    return loops;
}

// curvature endomorphism (R(X,Y))^i_j = R^i_{jkl} X^k Y^l at p
std::vector<double> curvature_endo(const kahler_structure& K, const point& p,
                                   const std::vector<double>& X, const std::vector<double>& Y) {
    int m = K.g.dim;
    std::vector<double> R = riemann_vals(K.g.at(p, 2), m);
    std::vector<double> E(m * m, 0.0);
    for (int i = 0; i < m; i++)
        for (int j = 0; j < m; j++) {
            double s = 0.0;
            for (int k = 0; k < m; k++)
                for (int l = 0; l < m; l++) s += R[((i * m + j) * m + k) * m + l] * X[k] * Y[l];
            E[i * m + j] = s;
        }
    return E;
}

// span of the generator list: SVD of the stacked flattened matrices. The cut
// is relative to the top singular value, with an absolute floor below which
// the whole collection counts as transport noise.
void span_from_generators(holonomy_sample& hs, double delta, double floor) {
    int m = hs.m;
    int ng = (int)hs.generators.size();
    hs.span_basis.clear();
    hs.sing_vals.clear();
    hs.span_dim = 0;
    if (ng == 0) return;
    emat G(ng, m * m);
    for (int r = 0; r < ng; r++)
        for (int c = 0; c < m * m; c++) G(r, c) = hs.generators[r][c];
    Eigen::JacobiSVD<emat> svd(G, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    for (int i = 0; i < sv.size(); i++) hs.sing_vals.push_back(sv(i));
    if (sv.size() == 0 || sv(0) <= floor) return;
    int rank = 0;
    while (rank < sv.size() && sv(rank) > delta * sv(0)) rank++;
    hs.span_dim = rank;
    for (int r = 0; r < rank; r++) {
        std::vector<double> h(m * m);
        for (int c = 0; c < m * m; c++) h[c] = svd.matrixV()(c, r);
        hs.span_basis.push_back(h);
    }
}

} // namespace

holonomy_sample holonomy_algebra(const kahler_structure& K, const box& domain,
                                 const point& base, const holonomy_config& cfg) {
    int m = K.g.dim;
    if (domain.dim() != m || (int)base.size() != m)
        throw error(errc::bad_dimension, "holonomy base and domain must match the chart");
    if (!domain.contains(base)) throw error(errc::bad_params, "holonomy base outside the domain");
    if (cfg.n_loops < 1) throw error(errc::bad_params, "holonomy needs at least one loop");

    holonomy_sample hs;
    hs.base = base;
    hs.m = m;

    emat g0 = as_mat(values_of(K.g.at(base, 0)), m, m);
    g0 = 0.5 * (g0 + g0.transpose()).eval();
    Eigen::LLT<emat> llt(g0);
    hs.indefinite = llt.info() != Eigen::Success;

    std::vector<loop_spec> loops = draw_loops(domain.shrunk(cfg.margin), cfg.n_loops, cfg.seed, m);

    // loop transports are independent of one another; every loop fills its
    // own four generator slots, so the schedule cannot change the result
    hs.generators.assign(4 * (size_t)cfg.n_loops, std::vector<double>());
    parallel_for(cfg.n_loops, [&](int li) {
        const loop_spec& L = loops[li];
        hs.generators[4 * li] = curvature_endo(K, base, L.X[0], L.Y[0]);
        std::vector<double> frame(m * m, 0.0);
        for (int i = 0; i < m; i++) frame[i * m + i] = 1.0;
        point prev = base;
        for (int k = 0; k < 3; k++) {
            polyline seg;
            seg.verts = {prev, L.verts[k]};
            transport_frame(K.g, seg, frame, m, cfg.steps_per_unit);
            prev = L.verts[k];
            emat T = as_mat(frame, m, m);
            emat E = as_mat(curvature_endo(K, L.verts[k], L.X[k + 1], L.Y[k + 1]), m, m);
            hs.generators[4 * li + 1 + k] = as_vec(T.partialPivLu().solve(E * T).eval());
        }
    });

    span_from_generators(hs, cfg.delta_span, cfg.sigma_floor);
    return hs;
}

holonomy_sample span_of_prefix(const holonomy_sample& hs, int n_gen, const holonomy_config& cfg) {
    if (n_gen < 0 || n_gen > (int)hs.generators.size())
        throw error(errc::bad_params, "prefix length exceeds the sampled generators");
    holonomy_sample out = hs;
    out.generators.resize(n_gen);
    span_from_generators(out, cfg.delta_span, cfg.sigma_floor);
    return out;
}

invariant_tensor_space invariant_tensors(const holonomy_sample& hs, const kahler_structure& K,
                                         double delta_null) {
    int m = hs.m;
    std::vector<double> Jv = values_of(K.J.at(hs.base, 0));
    emat J = as_mat(Jv, m, m);

    // parametrize S by its upper triangle; rows are the entries of
    // h^T S + S h per span generator plus J^T S J - S
    int ms = m * (m + 1) / 2;
    int nh = hs.span_dim;
    emat C((nh + 1) * m * m, ms);
    int col = 0;
    for (int i = 0; i < m; i++)
        for (int j = i; j < m; j++, col++) {
            emat S = emat::Zero(m, m);
            S(i, j) = 1.0;
            S(j, i) = 1.0;
            int row = 0;
            for (int h = 0; h < nh; h++) {
                emat H = as_mat(hs.span_basis[h], m, m);
                emat Q = H.transpose() * S + S * H;
                for (int a = 0; a < m; a++)
                    for (int b = 0; b < m; b++) C(row++, col) = Q(a, b);
            }
            emat Q = J.transpose() * S * J - S;
            for (int a = 0; a < m; a++)
                for (int b = 0; b < m; b++) C(row++, col) = Q(a, b);
        }

    Eigen::JacobiSVD<emat> svd(C, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    while (rank < sv.size() && sv(rank) > delta_null * sv(0)) rank++;

    invariant_tensor_space out;
    out.dimension = ms - rank;
    for (int r = rank; r < ms; r++) {
        emat S = emat::Zero(m, m);
        int c = 0;
        for (int i = 0; i < m; i++)
            for (int j = i; j < m; j++, c++) {
                S(i, j) += svd.matrixV()(c, r);
                S(j, i) = S(i, j);
            }
        out.basis.push_back(as_vec(S));
    }
    return out;
}

std::vector<int> block_decomposition(const holonomy_sample& hs, const kahler_structure& K,
                                     unsigned seed, double delta) {
    int m = hs.m;
    if (hs.span_dim == 0) return {m};

    emat g0 = as_mat(values_of(K.g.at(hs.base, 0)), m, m);
    g0 = 0.5 * (g0 + g0.transpose()).eval();
    emat J = as_mat(values_of(K.J.at(hs.base, 0)), m, m);

    // common kernel of the span
    emat stack(hs.span_dim * m, m);
    for (int h = 0; h < hs.span_dim; h++)
        stack.block(h * m, 0, m, m) = as_mat(hs.span_basis[h], m, m);
    Eigen::JacobiSVD<emat> ksvd(stack, Eigen::ComputeThinV);
    int krank = 0;
    while (krank < ksvd.singularValues().size() &&
           ksvd.singularValues()(krank) > delta * ksvd.singularValues()(0))
        krank++;
    int t0 = m - krank;
    int w = m - t0;
    emat K0 = ksvd.matrixV().rightCols(t0);

    // g orthogonal complement of the kernel, then a g orthonormal basis of it
    emat Bw;
    if (t0 == 0) {
        Bw = emat::Identity(m, m);
    } else {
        Eigen::JacobiSVD<emat> csvd((K0.transpose() * g0).eval(), Eigen::ComputeFullV);
        Bw = csvd.matrixV().rightCols(w);
    }
    if (!hs.indefinite) {
        for (int c = 0; c < w; c++) {
            for (int d = 0; d < c; d++)
                Bw.col(c) -= (Bw.col(d).dot(g0 * Bw.col(c))) * Bw.col(d);
            double nrm = std::sqrt(Bw.col(c).dot(g0 * Bw.col(c)));
            Bw.col(c) /= nrm;
        }
    }

    // restrictions to the complement; with a g orthonormal basis the metric
    // there is the identity, so self adjoint means symmetric
    emat proj = hs.indefinite ? emat(Bw.transpose()) : emat(Bw.transpose() * g0);
    emat Jw = proj * J * Bw;
    std::vector<emat> Hw;
    for (int h = 0; h < hs.span_dim; h++) Hw.push_back(proj * as_mat(hs.span_basis[h], m, m) * Bw);

    // commutant of the span on the complement, symmetric and J commuting
    int q = w * w;
    emat C((hs.span_dim + 2) * q, q);
    for (int cc = 0; cc < q; cc++) {
        emat Z = emat::Zero(w, w);
        Z(cc / w, cc % w) = 1.0;
        int row = 0;
        for (const emat& H : Hw) {
            emat Q = H * Z - Z * H;
            for (int a = 0; a < w; a++)
                for (int b = 0; b < w; b++) C(row++, cc) = Q(a, b);
        }
        emat Q = Jw * Z - Z * Jw;
        for (int a = 0; a < w; a++)
            for (int b = 0; b < w; b++) C(row++, cc) = Q(a, b);
        Q = Z - Z.transpose();
        for (int a = 0; a < w; a++)
            for (int b = 0; b < w; b++) C(row++, cc) = Q(a, b);
    }
    Eigen::JacobiSVD<emat> csvd(C, Eigen::ComputeThinV);
    int crank = 0;
    while (crank < csvd.singularValues().size() &&
           csvd.singularValues()(crank) > delta * csvd.singularValues()(0))
        crank++;
    int ncom = q - crank;
    if (ncom <= 0) throw error(errc::degenerate_solution, "commutant of the span is empty");

    // generic symmetric element of the commutant; its eigenspaces are the
    // invariant blocks and inherit J invariance from [Z, J] = 0
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    emat Z = emat::Zero(w, w);
    for (int r = crank; r < q; r++) {
        double c = u(rng);
        for (int a = 0; a < w; a++)
            for (int b = 0; b < w; b++) Z(a, b) += c * csvd.matrixV()(a * w + b, r);
    }
    Z = 0.5 * (Z + Z.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<emat> eig(Z);
    const auto& ev = eig.eigenvalues();
    double scale = std::max(1.0, ev(w - 1) - ev(0));
    std::vector<int> blocks;
    int start = 0;
    for (int i = 1; i <= w; i++) {
        if (i == w || ev(i) - ev(i - 1) > 1e-5 * scale) {
            blocks.push_back(i - start);
            emat Vc = eig.eigenvectors().middleCols(start, i - start);
            emat P = Vc * Vc.transpose();
            double r = (Jw * P - P * Jw).cwiseAbs().maxCoeff();
            if ((i - start) % 2 != 0 || r > 1e-5)
                throw error(errc::not_hermitian, "invariant block is not J invariant");
            start = i;
        }
    }
    std::sort(blocks.begin(), blocks.end());
    std::vector<int> out;
    if (t0 > 0) out.push_back(t0);
    for (int b : blocks) out.push_back(b);
    return out;
}

parallel_report parallel_tensor_dim(const kahler_structure& K, const box& domain,
                                    const holonomy_config& cfg) {
    holonomy_config big = cfg;
    big.n_loops = 4 * cfg.n_loops;
    parallel_report rep;
    rep.sample = holonomy_algebra(K, domain, domain.center(), big);

    for (int stage = cfg.n_loops; stage <= big.n_loops; stage *= 2) {
        holonomy_sample hs = span_of_prefix(rep.sample, 4 * stage, cfg);
        invariant_tensor_space sp = invariant_tensors(hs, K, cfg.delta_null);
        rep.stages.push_back(stage);
        rep.span_dims.push_back(hs.span_dim);
        rep.dims.push_back(sp.dimension);
        if (stage == big.n_loops) rep.space = sp;
    }
    for (size_t i = 1; i < rep.dims.size(); i++)
        if (rep.dims[i] != rep.dims[0])
            throw error(errc::non_stabilized, "invariant dimension changes under loop doubling");
    rep.dimension = rep.dims.back();
    return rep;
}

} // namespace cpl
