#pragma once
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpl {

// Error codes shared across the library. The CLI turns these into failed
// checks instead of crashing.
enum class errc {
    jet_order,
    jet_mismatch,
    degenerate_metric,
    degenerate_solution,
    unsupported_rank,
    path_leaves_domain,
    not_hermitian,
    lambda_vanishes,
    not_b_zero,
    b_zero,
    wrong_b,
    dimension_too_small,
    quadrature_failure,
    unknown_key,
    bad_params,
    bad_dimension,
    infeasible,
    non_stabilized,
    schema_error,
    zero_velocity,
    not_einstein,
    singular_matrix,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
  public:
    error(errc c, const std::string& what)
        : std::runtime_error(std::string(errc_name(c)) + ": " + what), code(c) {}
    errc code;
};

// Truncated Taylor jet in m variables, exact through order 3.
// Storage is packed canonical: value, d1[i], d2[i<=j], d3[i<=j<=k].
// Arithmetic follows the truncated Leibniz / Faa di Bruno recurrences, so a
// jet built from jet-coordinates carries exact derivatives of the expression.
class jet {
  public:
    static constexpr int max_order = 3;
    static constexpr int max_dim = 12;

    jet() = default;
    jet(int dim, int order, double value);

    static jet constant(int dim, int order, double value) { return jet(dim, order, value); }
    // coordinate jet: value p_k, first derivative e_k
    static jet variable(int dim, int order, int k, double value);

    int dim() const { return dim_; }
    int order() const { return order_; }

    double& value() { return c_[0]; }
    double value() const { return c_[0]; }
    double& d1(int i) { return c_[1 + i]; }
    double d1(int i) const { return order_ >= 1 ? c_[1 + i] : 0.0; }
    double& d2(int i, int j) { return c_[off2_ + pack2(i, j)]; }
    double d2(int i, int j) const { return order_ >= 2 ? c_[off2_ + pack2(i, j)] : 0.0; }
    double& d3(int i, int j, int k) { return c_[off3_ + pack3(i, j, k)]; }
    double d3(int i, int j, int k) const { return order_ >= 3 ? c_[off3_ + pack3(i, j, k)] : 0.0; }

    int n2() const { return dim_ * (dim_ + 1) / 2; }
    int n3() const { return dim_ * (dim_ + 1) * (dim_ + 2) / 6; }

    jet& operator+=(const jet& b);
    jet& operator-=(const jet& b);
    jet& operator+=(double s) { c_[0] += s; return *this; }
    jet& operator-=(double s) { c_[0] -= s; return *this; }
    jet& operator*=(double s);
    jet& operator/=(double s) { return (*this) *= (1.0 / s); }
    jet operator-() const;

    friend jet operator+(jet a, const jet& b) { a += b; return a; }
    friend jet operator-(jet a, const jet& b) { a -= b; return a; }
    friend jet operator+(jet a, double s) { a += s; return a; }
    friend jet operator+(double s, jet a) { a += s; return a; }
    friend jet operator-(jet a, double s) { a -= s; return a; }
    friend jet operator-(double s, const jet& a) { jet r = -a; r += s; return r; }
    friend jet operator*(jet a, double s) { a *= s; return a; }
    friend jet operator*(double s, jet a) { a *= s; return a; }
    friend jet operator/(jet a, double s) { a /= s; return a; }
    friend jet operator*(const jet& a, const jet& b) { return mul(a, b); }
    friend jet operator/(const jet& a, const jet& b) { return mul(a, recip(b)); }
    friend jet operator/(double s, const jet& b) { jet r = recip(b); r *= s; return r; }

    static jet mul(const jet& a, const jet& b);

    // f composed with this jet, given value/derivatives of f at value().
    jet compose(double f0, double f1, double f2, double f3) const;

    static jet recip(const jet& a);

    // derivative extraction: returns the jet of (d/dx_k expr), one order lower
    jet partial(int k) const;

    // truncate to a lower order (cheap view copy)
    jet truncated(int order) const;

    // same jet viewed in a larger chart; variable i becomes variable i+offset
    jet embedded(int new_dim, int offset) const;

    // restriction to variables [offset, offset+new_dim); derivatives w.r.t.
    // the dropped variables are discarded (they are held fixed)
    jet restricted(int new_dim, int offset) const;

    const std::vector<double>& raw() const { return c_; }

  private:
    int dim_ = 0;
    int order_ = 0;
    int off2_ = 0, off3_ = 0;
    std::vector<double> c_;

    int pack2(int i, int j) const {
        if (i > j) std::swap(i, j);
        return i * dim_ - i * (i + 1) / 2 + j;
    }
    int pack3(int i, int j, int k) const;
    static void check_pair(const jet& a, const jet& b);
};

inline jet sqrt(const jet& a) {
    double v = std::sqrt(a.value());
    return a.compose(v, 0.5 / v, -0.25 / (v * a.value()), 0.375 / (v * a.value() * a.value()));
}

inline jet log(const jet& a) {
    double v = a.value();
    return a.compose(std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

inline jet exp(const jet& a) {
    double e = std::exp(a.value());
    return a.compose(e, e, e, e);
}

inline jet sin(const jet& a) {
    double s = std::sin(a.value()), c = std::cos(a.value());
    return a.compose(s, c, -s, -c);
}

inline jet cos(const jet& a) {
    double s = std::sin(a.value()), c = std::cos(a.value());
    return a.compose(c, -s, -c, s);
}

inline jet pow(const jet& a, double p) {
    double v = a.value();
    double f0 = std::pow(v, p);
    return a.compose(f0, p * f0 / v, p * (p - 1) * f0 / (v * v), p * (p - 1) * (p - 2) * f0 / (v * v * v));
}

// ---- dense square matrices with jet entries (dims <= 12) ----

// Gauss-Jordan with partial pivoting on values. Throws errc::singular_matrix
// when the pivot magnitude falls below eps times the largest initial entry.
std::vector<jet> jet_mat_inverse(const std::vector<jet>& a, int n, double eps = 1e-13);
jet jet_mat_det(std::vector<jet> a, int n);

} // namespace cpl
