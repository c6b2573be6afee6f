#pragma once

// Sparse multivariate polynomials over an exact or floating coefficient ring.
// Terms are kept in graded-lex order and zero coefficients are never stored,
// so equality is structural and iteration order is canonical.

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pospres/exponent.hpp"
#include "pospres/rational.hpp"

namespace pospres {

// Total degree with a distinguished minus-infinity for the zero polynomial,
// ordered below every integer.
class Degree {
public:
    static Degree neg_infinity() { return Degree(); }
    Degree(int v) : finite_(true), value_(v) {}  // NOLINT(google-explicit-constructor)

    bool is_finite() const { return finite_; }

    int value() const {
        if (!finite_) throw std::logic_error("degree of the zero polynomial has no value");
        return value_;
    }

    bool operator==(const Degree& o) const {
        return finite_ == o.finite_ && (!finite_ || value_ == o.value_);
    }
    bool operator!=(const Degree& o) const { return !(*this == o); }
    bool operator<(const Degree& o) const {
        if (!finite_) return o.finite_;
        if (!o.finite_) return false;
        return value_ < o.value_;
    }
    bool operator<=(const Degree& o) const { return *this < o || *this == o; }
    bool operator>(const Degree& o) const { return o < *this; }
    bool operator>=(const Degree& o) const { return o <= *this; }

    std::string str() const { return finite_ ? std::to_string(value_) : "-inf"; }

private:
    Degree() : finite_(false), value_(0) {}
    bool finite_;
    int value_;
};

template <class C>
class BasicPolynomial {
public:
    using Coeff = C;
    using TermMap = std::map<Exponent, C>;

    explicit BasicPolynomial(int dimension) : n_(dimension) {
        if (dimension < 1) throw std::invalid_argument("polynomial dimension must be >= 1");
    }

    static BasicPolynomial zero(int n) { return BasicPolynomial(n); }

    static BasicPolynomial constant(int n, const C& c) {
        BasicPolynomial p(n);
        p.add_term(Exponent::zero(n), c);
        return p;
    }

    static BasicPolynomial monomial(const Exponent& a, const C& c) {
        BasicPolynomial p(a.dimension());
        p.add_term(a, c);
        return p;
    }

    static BasicPolynomial variable(int n, int i) {
        return monomial(Exponent::unit(n, i), C(1));
    }

    int dimension() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    Degree degree() const {
        if (terms_.empty()) return Degree::neg_infinity();
        return Degree(terms_.rbegin()->first.order());
    }

    C coefficient(const Exponent& a) const {
        auto it = terms_.find(a);
        return it == terms_.end() ? C(0) : it->second;
    }

    void add_term(const Exponent& a, const C& c) {
        if (a.dimension() != n_) throw DimensionMismatch("term dimension differs from polynomial");
        auto it = terms_.find(a);
        if (it == terms_.end()) {
            if (!(c == C(0))) terms_.emplace(a, c);
        } else {
            it->second += c;
            if (it->second == C(0)) terms_.erase(it);
        }
    }

    BasicPolynomial& operator+=(const BasicPolynomial& o) {
        require_compatible(o);
        for (const auto& [a, c] : o.terms_) add_term(a, c);
        return *this;
    }

    BasicPolynomial& operator-=(const BasicPolynomial& o) {
        require_compatible(o);
        for (const auto& [a, c] : o.terms_) add_term(a, -c);
        return *this;
    }

    friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
    friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }

    BasicPolynomial operator-() const {
        BasicPolynomial r(n_);
        for (const auto& [a, c] : terms_) r.terms_.emplace(a, -c);
        return r;
    }

    friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
        a.require_compatible(b);
        BasicPolynomial r(a.n_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
        return r;
    }

    BasicPolynomial& operator*=(const C& s) {
        if (s == C(0)) {
            terms_.clear();
        } else {
            for (auto& [a, c] : terms_) c *= s;
        }
        return *this;
    }

    friend BasicPolynomial operator*(BasicPolynomial p, const C& s) { return p *= s; }
    friend BasicPolynomial operator*(const C& s, BasicPolynomial p) { return p *= s; }

    BasicPolynomial& operator/=(const C& s) {
        for (auto& [a, c] : terms_) c /= s;
        return *this;
    }

    friend BasicPolynomial operator/(BasicPolynomial p, const C& s) { return p /= s; }

    bool operator==(const BasicPolynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }
    bool operator!=(const BasicPolynomial& o) const { return !(*this == o); }

    C evaluate(const std::vector<C>& y) const {
        if (static_cast<int>(y.size()) != n_)
            throw DimensionMismatch("evaluation point dimension differs from polynomial");
        C acc(0);
        for (const auto& [a, c] : terms_) {
            C term = c;
            for (int i = 0; i < n_; ++i)
                for (int k = 0; k < a[i]; ++k) term *= y[static_cast<std::size_t>(i)];
            acc += term;
        }
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!first) out << " + ";
            first = false;
            out << coeff_str(it->second);
            for (int i = 0; i < n_; ++i) {
                if (it->first[i] == 0) continue;
                out << "*x" << (i + 1);
                if (it->first[i] > 1) out << "^" << it->first[i];
            }
        }
        return out.str();
    }

private:
    void require_compatible(const BasicPolynomial& o) const {
        if (n_ != o.n_) throw DimensionMismatch("polynomial dimensions differ");
    }

    static std::string coeff_str(const Rational& c) { return c.str(); }
    static std::string coeff_str(double c) {
        std::ostringstream out;
        out << c;
        return out.str();
    }

    int n_;
    TermMap terms_;
};

using Polynomial = BasicPolynomial<Rational>;
using PolynomialD = BasicPolynomial<double>;

// d^alpha f with exact falling-factorial coefficients.
template <class C>
BasicPolynomial<C> partial(const Exponent& alpha, const BasicPolynomial<C>& f) {
    if (alpha.dimension() != f.dimension())
        throw DimensionMismatch("derivative multi-index dimension differs from polynomial");
    BasicPolynomial<C> r(f.dimension());
    for (const auto& [beta, c] : f.terms()) {
        if (!divides(alpha, beta)) continue;
        r.add_term(beta - alpha, c * CoeffTraits<C>::from_integer(falling_factorial(beta, alpha)));
    }
    return r;
}

// g with g(u) = f(u + y); the u^alpha coefficient equals (d^alpha f)(y)/alpha!.
template <class C>
BasicPolynomial<C> taylor_shift(const BasicPolynomial<C>& f, const std::vector<C>& y) {
    if (static_cast<int>(y.size()) != f.dimension())
        throw DimensionMismatch("shift point dimension differs from polynomial");
    const int n = f.dimension();
    BasicPolynomial<C> r(n);
    for (const auto& [beta, c] : f.terms()) {
        // expand prod_i (u_i + y_i)^{beta_i} one variable at a time
        std::vector<std::pair<Exponent, C>> parts{{Exponent::zero(n), c}};
        for (int i = 0; i < n; ++i) {
            if (beta[i] == 0) continue;
            // powers y_i^k for k = 0..beta_i
            std::vector<C> ypow(static_cast<std::size_t>(beta[i]) + 1, C(1));
            for (int k = 1; k <= beta[i]; ++k)
                ypow[static_cast<std::size_t>(k)] = ypow[static_cast<std::size_t>(k - 1)] * y[static_cast<std::size_t>(i)];
            std::vector<std::pair<Exponent, C>> next;
            next.reserve(parts.size() * (static_cast<std::size_t>(beta[i]) + 1));
            for (const auto& [e, pc] : parts) {
                for (int j = 0; j <= beta[i]; ++j) {
                    const C w = pc * CoeffTraits<C>::from_integer(binomial(beta[i], j)) *
                                ypow[static_cast<std::size_t>(beta[i] - j)];
                    next.emplace_back(e + Exponent::unit(n, i) * j, w);
                }
            }
            parts = std::move(next);
        }
        for (const auto& [e, pc] : parts) r.add_term(e, pc);
    }
    return r;
}

inline PolynomialD to_double(const Polynomial& f) {
    PolynomialD r(f.dimension());
    for (const auto& [a, c] : f.terms()) r.add_term(a, to_double(c));
    return r;
}

// Lossless: double coefficients are dyadic rationals.
inline Polynomial to_exact(const PolynomialD& f) {
    Polynomial r(f.dimension());
    for (const auto& [a, c] : f.terms()) r.add_term(a, rational_from_double(c));
    return r;
}

// Largest absolute coefficient difference; gauges float pipelines against
// exact references.
inline double max_coeff_deviation(const PolynomialD& a, const PolynomialD& b) {
    double dev = 0.0;
    for (const auto& [e, c] : a.terms()) dev = std::max(dev, std::abs(c - b.coefficient(e)));
    for (const auto& [e, c] : b.terms()) dev = std::max(dev, std::abs(c - a.coefficient(e)));
    return dev;
}

}  // namespace pospres
