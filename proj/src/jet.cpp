#include "cprojlab/jet.hpp"

#include <algorithm>
#include <array>

namespace cpl {

const char* errc_name(errc c) {
    switch (c) {
        case errc::jet_order: return "JetOrder";
        case errc::jet_mismatch: return "JetMismatch";
        case errc::degenerate_metric: return "DegenerateMetric";
        case errc::degenerate_solution: return "DegenerateSolution";
        case errc::unsupported_rank: return "UnsupportedRank";
        case errc::path_leaves_domain: return "PathLeavesDomain";
        case errc::not_hermitian: return "NotHermitian";
        case errc::lambda_vanishes: return "LambdaVanishes";
        case errc::not_b_zero: return "NotBZero";
        case errc::b_zero: return "BZero";
        case errc::wrong_b: return "WrongB";
        case errc::dimension_too_small: return "DimensionTooSmall";
        case errc::quadrature_failure: return "QuadratureFailure";
        case errc::unknown_key: return "UnknownKey";
        case errc::bad_params: return "BadParams";
        case errc::bad_dimension: return "BadDimension";
        case errc::infeasible: return "Infeasible";
        case errc::non_stabilized: return "NonStabilized";
        case errc::schema_error: return "SchemaError";
        case errc::zero_velocity: return "ZeroVelocity";
        case errc::not_einstein: return "NotEinstein";
        case errc::singular_matrix: return "SingularMatrix";
    }
    return "Error";
}

namespace {

int size_for(int dim, int order) {
    int s = 1;
    if (order >= 1) s += dim;
    if (order >= 2) s += dim * (dim + 1) / 2;
    if (order >= 3) s += dim * (dim + 1) * (dim + 2) / 6;
    return s;
}

} // namespace

jet::jet(int dim, int order, double value) : dim_(dim), order_(order) {
    if (order < 0 || order > max_order)
        throw error(errc::jet_order, "jet order must be 0..3, got " + std::to_string(order));
    if (dim < 1 || dim > max_dim)
        throw error(errc::bad_dimension, "jet dimension must be 1..12, got " + std::to_string(dim));
    off2_ = 1 + dim;
    off3_ = off2_ + dim * (dim + 1) / 2;
    c_.assign(size_for(dim, order), 0.0);
    c_[0] = value;
}

jet jet::variable(int dim, int order, int k, double value) {
    jet j(dim, order, value);
    if (order >= 1) j.c_[1 + k] = 1.0;
    return j;
}

int jet::pack3(int i, int j, int k) const {
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
    // count triples (a<=b<=c) with a < i, then (b<=c) in the sub-simplex
    int m = dim_;
    int base = 0;
    for (int a = 0; a < i; a++) base += (m - a) * (m - a + 1) / 2;
    int mi = m - i;
    int jj = j - i, kk = k - i;
    return base + jj * mi - jj * (jj + 1) / 2 + kk;
}

void jet::check_pair(const jet& a, const jet& b) {
    if (a.dim_ != b.dim_ || a.order_ != b.order_)
        throw error(errc::jet_mismatch, "jet dim/order mismatch");
}

jet& jet::operator+=(const jet& b) {
    check_pair(*this, b);
    for (size_t i = 0; i < c_.size(); i++) c_[i] += b.c_[i];
    return *this;
}

jet& jet::operator-=(const jet& b) {
    check_pair(*this, b);
    for (size_t i = 0; i < c_.size(); i++) c_[i] -= b.c_[i];
    return *this;
}

jet& jet::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

jet jet::operator-() const {
    jet r = *this;
    for (double& v : r.c_) v = -v;
    return r;
}

jet jet::mul(const jet& a, const jet& b) {
    check_pair(a, b);
    const int m = a.dim_, ord = a.order_;
    jet r(m, ord, a.c_[0] * b.c_[0]);
    if (ord >= 1)
        for (int i = 0; i < m; i++)
            r.c_[1 + i] = a.c_[0] * b.c_[1 + i] + a.c_[1 + i] * b.c_[0];
    if (ord >= 2)
        for (int i = 0; i < m; i++)
            for (int j = i; j < m; j++)
                r.d2(i, j) = a.c_[0] * b.d2(i, j) + a.c_[1 + i] * b.c_[1 + j] +
                             a.c_[1 + j] * b.c_[1 + i] + a.d2(i, j) * b.c_[0];
    if (ord >= 3)
        for (int i = 0; i < m; i++)
            for (int j = i; j < m; j++)
                for (int k = j; k < m; k++)
                    r.d3(i, j, k) = a.c_[0] * b.d3(i, j, k) + a.d3(i, j, k) * b.c_[0] +
                                    a.c_[1 + i] * b.d2(j, k) + a.c_[1 + j] * b.d2(i, k) +
                                    a.c_[1 + k] * b.d2(i, j) + a.d2(j, k) * b.c_[1 + i] +
                                    a.d2(i, k) * b.c_[1 + j] + a.d2(i, j) * b.c_[1 + k];
    return r;
}

jet jet::compose(double f0, double f1, double f2, double f3) const {
    const int m = dim_, ord = order_;
    jet r(m, ord, f0);
    if (ord >= 1)
        for (int i = 0; i < m; i++) r.c_[1 + i] = f1 * c_[1 + i];
    if (ord >= 2)
        for (int i = 0; i < m; i++)
            for (int j = i; j < m; j++)
                r.d2(i, j) = f2 * c_[1 + i] * c_[1 + j] + f1 * d2(i, j);
    if (ord >= 3)
        for (int i = 0; i < m; i++)
            for (int j = i; j < m; j++)
                for (int k = j; k < m; k++)
                    r.d3(i, j, k) = f3 * c_[1 + i] * c_[1 + j] * c_[1 + k] +
                                    f2 * (d2(i, j) * c_[1 + k] + d2(i, k) * c_[1 + j] + d2(j, k) * c_[1 + i]) +
                                    f1 * d3(i, j, k);
    return r;
}

jet jet::recip(const jet& a) {
    double v = a.value();
    return a.compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v), -6.0 / (v * v * v * v));
}

jet jet::partial(int k) const {
    if (order_ < 1)
        throw error(errc::jet_order, "partial() needs order >= 1");
    jet r(dim_, order_ - 1, c_[1 + k]);
    if (order_ >= 2)
        for (int i = 0; i < dim_; i++) r.c_[1 + i] = d2(i, k);
    if (order_ >= 3)
        for (int i = 0; i < dim_; i++)
            for (int j = i; j < dim_; j++) r.d2(i, j) = d3(i, j, k);
    return r;
}

jet jet::embedded(int new_dim, int offset) const {
    if (offset + dim_ > new_dim)
        throw error(errc::bad_dimension, "embedded jet does not fit");
    jet r(new_dim, order_, c_[0]);
    if (order_ >= 1)
        for (int i = 0; i < dim_; i++) r.c_[1 + offset + i] = c_[1 + i];
    if (order_ >= 2)
        for (int i = 0; i < dim_; i++)
            for (int j = i; j < dim_; j++) r.d2(offset + i, offset + j) = d2(i, j);
    if (order_ >= 3)
        for (int i = 0; i < dim_; i++)
            for (int j = i; j < dim_; j++)
                for (int k = j; k < dim_; k++) r.d3(offset + i, offset + j, offset + k) = d3(i, j, k);
    return r;
}

jet jet::restricted(int new_dim, int offset) const {
    if (offset + new_dim > dim_)
        throw error(errc::bad_dimension, "restricted jet does not fit");
    jet r(new_dim, order_, c_[0]);
    if (order_ >= 1)
        for (int i = 0; i < new_dim; i++) r.c_[1 + i] = c_[1 + offset + i];
    if (order_ >= 2)
        for (int i = 0; i < new_dim; i++)
            for (int j = i; j < new_dim; j++) r.d2(i, j) = d2(offset + i, offset + j);
    if (order_ >= 3)
        for (int i = 0; i < new_dim; i++)
            for (int j = i; j < new_dim; j++)
                for (int k = j; k < new_dim; k++) r.d3(i, j, k) = d3(offset + i, offset + j, offset + k);
    return r;
}

jet jet::truncated(int order) const {
    if (order > order_)
        throw error(errc::jet_order, "cannot truncate upward");
    jet r(dim_, order, 0.0);
    std::copy(c_.begin(), c_.begin() + size_for(dim_, order), r.c_.begin());
    return r;
}

std::vector<jet> jet_mat_inverse(const std::vector<jet>& a, int n, double eps) {
    const int m = a[0].dim(), ord = a[0].order();
    std::vector<jet> w = a;
    std::vector<jet> inv(n * n, jet(m, ord, 0.0));
    for (int i = 0; i < n; i++) inv[i * n + i].value() = 1.0;

    double scale = 0.0;
    for (const jet& e : a) scale = std::max(scale, std::abs(e.value()));
    if (scale == 0.0) throw error(errc::singular_matrix, "zero matrix");

    for (int col = 0; col < n; col++) {
        int piv = col;
        for (int r = col + 1; r < n; r++)
            if (std::abs(w[r * n + col].value()) > std::abs(w[piv * n + col].value())) piv = r;
        if (std::abs(w[piv * n + col].value()) < eps * scale)
            throw error(errc::singular_matrix, "pivot below threshold");
        if (piv != col)
            for (int c = 0; c < n; c++) {
                std::swap(w[piv * n + c], w[col * n + c]);
                std::swap(inv[piv * n + c], inv[col * n + c]);
            }
        jet ip = jet::recip(w[col * n + col]);
        for (int c = 0; c < n; c++) {
            w[col * n + c] = jet::mul(w[col * n + c], ip);
            inv[col * n + c] = jet::mul(inv[col * n + c], ip);
        }
        for (int r = 0; r < n; r++) {
            if (r == col) continue;
            jet f = w[r * n + col];
            if (f.value() == 0.0) {
                bool zero = true;
                for (double v : f.raw())
                    if (v != 0.0) { zero = false; break; }
                if (zero) continue;
            }
            for (int c = 0; c < n; c++) {
                w[r * n + c] -= jet::mul(f, w[col * n + c]);
                inv[r * n + c] -= jet::mul(f, inv[col * n + c]);
            }
        }
    }
    return inv;
}

jet jet_mat_det(std::vector<jet> a, int n) {
    const int m = a[0].dim(), ord = a[0].order();
    jet det(m, ord, 1.0);
    double sign = 1.0;
    for (int col = 0; col < n; col++) {
        int piv = col;
        for (int r = col + 1; r < n; r++)
            if (std::abs(a[r * n + col].value()) > std::abs(a[piv * n + col].value())) piv = r;
        if (piv != col) {
            sign = -sign;
            for (int c = 0; c < n; c++) std::swap(a[piv * n + c], a[col * n + c]);
        }
        if (a[col * n + col].value() == 0.0)
            throw error(errc::singular_matrix, "singular matrix in det");
        det = jet::mul(det, a[col * n + col]);
        jet ip = jet::recip(a[col * n + col]);
        for (int r = col + 1; r < n; r++) {
            jet f = jet::mul(a[r * n + col], ip);
            for (int c = col; c < n; c++)
                a[r * n + c] -= jet::mul(f, a[col * n + c]);
        }
    }
    det *= sign;
    return det;
}

} // namespace cpl
