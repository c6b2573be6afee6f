#pragma once

// Constant-coefficient operator series sum_alpha a_alpha d^alpha, truncated at
// a fixed order D. Elements with a_0 = 1 form a commutative group under
// composition; elements with a_0 = 0 are its algebra. Because an algebra
// element has no constant term, its k-th power has no terms of order < k, so
// exp and log are finite sums at order D and all group laws hold exactly.

#include <map>
#include <vector>

#include "pospres/errors.hpp"
#include "pospres/exponent.hpp"
#include "pospres/polynomial.hpp"

namespace pospres {

enum class OperatorKind { GroupElement, AlgebraElement, General };

template <class C>
class BasicConstOperator {
public:
    using TermMap = std::map<Exponent, C>;

    BasicConstOperator(int n, int max_order) : n_(n), max_order_(max_order) {
        if (n < 1) throw std::invalid_argument("operator dimension must be >= 1");
        if (max_order < 0) throw std::invalid_argument("operator order must be >= 0");
    }

    static BasicConstOperator identity(int n, int max_order) {
        BasicConstOperator op(n, max_order);
        op.add_coefficient(Exponent::zero(n), C(1));
        return op;
    }

    int dimension() const { return n_; }
    int max_order() const { return max_order_; }
    const TermMap& table() const { return table_; }

    C coefficient(const Exponent& a) const {
        auto it = table_.find(a);
        return it == table_.end() ? C(0) : it->second;
    }

    void add_coefficient(const Exponent& a, const C& c) {
        if (a.dimension() != n_) throw DimensionMismatch("table entry dimension differs from operator");
        if (a.order() > max_order_)
            throw DegreeBudgetExceeded("table entry order exceeds operator max order");
        auto it = table_.find(a);
        if (it == table_.end()) {
            if (!(c == C(0))) table_.emplace(a, c);
        } else {
            it->second += c;
            if (it->second == C(0)) table_.erase(it);
        }
    }

    OperatorKind kind() const {
        const C a0 = coefficient(Exponent::zero(n_));
        if (a0 == C(1)) return OperatorKind::GroupElement;
        if (a0 == C(0)) return OperatorKind::AlgebraElement;
        return OperatorKind::General;
    }

    // sum_{|alpha| <= deg f} a_alpha d^alpha f; exact for deg f <= max order.
    BasicPolynomial<C> apply(const BasicPolynomial<C>& f) const {
        if (f.dimension() != n_) throw DimensionMismatch("operand dimension differs from operator");
        if (Degree(max_order_) < f.degree())
            throw DegreeBudgetExceeded("operand degree exceeds operator max order");
        BasicPolynomial<C> r(n_);
        for (const auto& [a, c] : table_) r += partial(a, f) * c;
        return r;
    }

    BasicConstOperator truncated(int order) const {
        BasicConstOperator r(n_, order);
        for (const auto& [a, c] : table_)
            if (a.order() <= order) r.add_coefficient(a, c);
        return r;
    }

    BasicConstOperator& operator+=(const BasicConstOperator& o) {
        if (n_ != o.n_) throw DimensionMismatch("operator dimensions differ");
        for (const auto& [a, c] : o.table_)
            if (a.order() <= max_order_) add_coefficient(a, c);
        return *this;
    }

    friend BasicConstOperator operator+(BasicConstOperator a, const BasicConstOperator& b) {
        return a += b;
    }

    BasicConstOperator& operator*=(const C& s) {
        if (s == C(0)) {
            table_.clear();
        } else {
            for (auto& [a, c] : table_) c *= s;
        }
        return *this;
    }

    friend BasicConstOperator operator*(BasicConstOperator op, const C& s) { return op *= s; }
    friend BasicConstOperator operator*(const C& s, BasicConstOperator op) { return op *= s; }

    BasicConstOperator& operator/=(const C& s) {
        for (auto& [a, c] : table_) c /= s;
        return *this;
    }

    bool operator==(const BasicConstOperator& o) const {
        return n_ == o.n_ && max_order_ == o.max_order_ && table_ == o.table_;
    }
    bool operator!=(const BasicConstOperator& o) const { return !(*this == o); }

private:
    int n_;
    int max_order_;
    TermMap table_;
};

using ConstOperator = BasicConstOperator<Rational>;
using ConstOperatorD = BasicConstOperator<double>;

// Product series (AB)_gamma = sum_{alpha+beta=gamma} a_alpha b_beta, truncated
// to order min(D_A, D_B). Commutative.
template <class C>
BasicConstOperator<C> compose(const BasicConstOperator<C>& a, const BasicConstOperator<C>& b) {
    if (a.dimension() != b.dimension()) throw DimensionMismatch("operator dimensions differ");
    const int order = std::min(a.max_order(), b.max_order());
    BasicConstOperator<C> r(a.dimension(), order);
    for (const auto& [ea, ca] : a.table()) {
        if (ea.order() > order) continue;
        for (const auto& [eb, cb] : b.table()) {
            if (ea.order() + eb.order() > order) continue;
            r.add_coefficient(ea + eb, ca * cb);
        }
    }
    return r;
}

// exp A = sum_{k=0..D} A^k/k!, exact at order D for algebra elements.
template <class C>
BasicConstOperator<C> exp_dc(const BasicConstOperator<C>& a, int order = -1) {
    if (order < 0) order = a.max_order();
    if (a.kind() != OperatorKind::AlgebraElement)
        throw NotAlgebraElement("exp requires zero constant term");
    // re-budgeting to the target order is exact: the table is the whole operator
    const BasicConstOperator<C> base = a.truncated(order);
    BasicConstOperator<C> result = BasicConstOperator<C>::identity(a.dimension(), order);
    BasicConstOperator<C> power = BasicConstOperator<C>::identity(a.dimension(), order);
    for (int k = 1; k <= order; ++k) {
        power = compose(power, base);
        power /= C(k);
        result += power;
    }
    return result;
}

// log A = -sum_{k=1..D} (1 - A)^k/k, exact at order D for group elements.
template <class C>
BasicConstOperator<C> log_dc(const BasicConstOperator<C>& t, int order = -1) {
    if (order < 0) order = t.max_order();
    if (t.kind() != OperatorKind::GroupElement)
        throw NotGroupElement("log requires unit constant term");
    BasicConstOperator<C> nil = BasicConstOperator<C>::identity(t.dimension(), order);
    nil *= C(-1);
    nil += t.truncated(order);
    nil *= C(-1);  // nil = 1 - T, zero constant term
    BasicConstOperator<C> result(t.dimension(), order);
    BasicConstOperator<C> power = BasicConstOperator<C>::identity(t.dimension(), order);
    for (int k = 1; k <= order; ++k) {
        power = compose(power, nil);
        result += power * (C(-1) / C(k));
    }
    return result;
}

inline ConstOperatorD to_double(const ConstOperator& op) {
    ConstOperatorD r(op.dimension(), op.max_order());
    for (const auto& [a, c] : op.table()) r.add_coefficient(a, to_double(c));
    return r;
}

// Semigroup sampling at real time: the same finite series in double
// arithmetic. Agrees with the exact path to ~1e-12 relative at desk scale.
inline ConstOperatorD exp_dc_real(const ConstOperator& a, double t, int order = -1) {
    ConstOperatorD ad = to_double(a);
    ad *= t;
    return exp_dc(ad, order);
}

}  // namespace pospres
