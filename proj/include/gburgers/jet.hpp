#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gburgers {

/// Error raised when an expression is evaluated outside its real domain
/// (log of a non-positive value, division by zero, ...).
struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A function value together with its derivatives up to `order` at one point.
/// d[k] holds the k-th derivative (d[0] is the value itself). Arithmetic
/// propagates derivatives exactly via Leibniz / Faa di Bruno rules, so the
/// only error source is floating-point rounding.
struct Jet {
    static constexpr int max_order = 4;

    int order = 0;
    std::array<double, max_order + 1> d{};

    double value() const { return d[0]; }
    double deriv(int k) const { return d[static_cast<std::size_t>(k)]; }

    static Jet constant(double v, int order) {
        Jet j;
        j.order = order;
        j.d[0] = v;
        return j;
    }

    /// The identity function evaluated at x: derivatives (x, 1, 0, ...).
    static Jet variable(double x, int order) {
        Jet j;
        j.order = order;
        j.d[0] = x;
        if (order >= 1) j.d[1] = 1.0;
        return j;
    }
};

namespace detail {

// C(n, k) for n <= 4.
inline constexpr double kBinom[5][5] = {
    {1, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 2, 1, 0, 0},
    {1, 3, 3, 1, 0},
    {1, 4, 6, 4, 1},
};

}  // namespace detail

inline Jet operator-(const Jet& a) {
    Jet r = a;
    for (int k = 0; k <= a.order; ++k) r.d[k] = -a.d[k];
    return r;
}

inline Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    r.order = std::min(a.order, b.order);
    for (int k = 0; k <= r.order; ++k) r.d[k] = a.d[k] + b.d[k];
    return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    r.order = std::min(a.order, b.order);
    for (int k = 0; k <= r.order; ++k) r.d[k] = a.d[k] - b.d[k];
    return r;
}

/// Leibniz rule: (fg)^(k) = sum_j C(k,j) f^(j) g^(k-j).
inline Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.order = std::min(a.order, b.order);
    for (int k = 0; k <= r.order; ++k) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j) s += detail::kBinom[k][j] * a.d[j] * b.d[k - j];
        r.d[k] = s;
    }
    return r;
}

/// Quotient jet by the recurrence q^(k) = (f^(k) - sum_{j<k} C(k,j) q^(j) g^(k-j)) / g.
inline Jet operator/(const Jet& a, const Jet& b) {
    if (b.d[0] == 0.0) throw EvalError("division by zero");
    Jet r;
    r.order = std::min(a.order, b.order);
    for (int k = 0; k <= r.order; ++k) {
        double s = a.d[k];
        for (int j = 0; j < k; ++j) s -= detail::kBinom[k][j] * r.d[j] * b.d[k - j];
        r.d[k] = s / b.d[0];
    }
    return r;
}

/// Integer power by repeated multiplication; exact for polynomial jets.
inline Jet jet_pow(const Jet& a, long long n) {
    Jet r = Jet::constant(1.0, a.order);
    for (long long i = 0; i < n; ++i) r = r * a;
    return r;
}

/// Composition h = w(u) where `outer` holds w, w', ..., w^(order) evaluated at
/// u.value(). Faa di Bruno up to order four.
inline Jet jet_compose(const std::array<double, Jet::max_order + 1>& outer, const Jet& u) {
    const double u1 = u.d[1], u2 = u.d[2], u3 = u.d[3], u4 = u.d[4];
    Jet r;
    r.order = u.order;
    r.d[0] = outer[0];
    if (r.order >= 1) r.d[1] = outer[1] * u1;
    if (r.order >= 2) r.d[2] = outer[2] * u1 * u1 + outer[1] * u2;
    if (r.order >= 3) r.d[3] = outer[3] * u1 * u1 * u1 + 3.0 * outer[2] * u1 * u2 + outer[1] * u3;
    if (r.order >= 4)
        r.d[4] = outer[4] * u1 * u1 * u1 * u1 + 6.0 * outer[3] * u1 * u1 * u2 +
                 outer[2] * (4.0 * u1 * u3 + 3.0 * u2 * u2) + outer[1] * u4;
    return r;
}

}  // namespace gburgers
