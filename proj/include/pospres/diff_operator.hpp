#pragma once

// Canonical representation T = sum_alpha q_alpha d^alpha with polynomial
// coefficients, stored up to a fixed order D. Applying T to inputs of degree
// <= D is exact; higher-degree input is an error, never a silent truncation.

#include <functional>
#include <map>

#include "pospres/const_group.hpp"
#include "pospres/errors.hpp"
#include "pospres/exponent.hpp"
#include "pospres/polynomial.hpp"

namespace pospres {

template <class C>
class BasicDiffOperator {
public:
    using Table = std::map<Exponent, BasicPolynomial<C>>;

    BasicDiffOperator(int n, int max_order) : n_(n), max_order_(max_order) {
        if (n < 1) throw std::invalid_argument("operator dimension must be >= 1");
        if (max_order < 0) throw std::invalid_argument("operator order must be >= 0");
    }

    static BasicDiffOperator identity(int n, int max_order) {
        BasicDiffOperator op(n, max_order);
        op.set_coefficient(Exponent::zero(n), BasicPolynomial<C>::constant(n, C(1)));
        return op;
    }

    int dimension() const { return n_; }
    int max_order() const { return max_order_; }
    const Table& table() const { return table_; }

    BasicPolynomial<C> coefficient(const Exponent& a) const {
        auto it = table_.find(a);
        return it == table_.end() ? BasicPolynomial<C>::zero(n_) : it->second;
    }

    void set_coefficient(const Exponent& a, const BasicPolynomial<C>& q) {
        if (a.dimension() != n_ || q.dimension() != n_)
            throw DimensionMismatch("table entry dimension differs from operator");
        if (a.order() > max_order_)
            throw DegreeBudgetExceeded("table entry order exceeds operator max order");
        if (q.is_zero())
            table_.erase(a);
        else
            table_.insert_or_assign(a, q);
    }

    // sum_{|alpha| <= deg f} q_alpha * d^alpha f
    BasicPolynomial<C> apply(const BasicPolynomial<C>& f) const {
        if (f.dimension() != n_) throw DimensionMismatch("operand dimension differs from operator");
        if (Degree(max_order_) < f.degree())
            throw DegreeBudgetExceeded("operand degree exceeds operator max order");
        BasicPolynomial<C> r(n_);
        for (const auto& [a, q] : table_) {
            BasicPolynomial<C> d = partial(a, f);
            if (!d.is_zero()) r += q * d;
        }
        return r;
    }

    bool operator==(const BasicDiffOperator& o) const {
        return n_ == o.n_ && max_order_ == o.max_order_ && table_ == o.table_;
    }
    bool operator!=(const BasicDiffOperator& o) const { return !(*this == o); }

private:
    int n_;
    int max_order_;
    Table table_;
};

using DiffOperator = BasicDiffOperator<Rational>;
using DiffOperatorD = BasicDiffOperator<double>;

namespace detail {

inline bool table_entry_matches(const Polynomial& a, const Polynomial& b) { return a == b; }

inline bool table_entry_matches(const PolynomialD& a, const PolynomialD& b) {
    double scale = 1.0;
    for (const auto& [e, c] : a.terms()) scale = std::max(scale, std::abs(c));
    for (const auto& [e, c] : b.terms()) scale = std::max(scale, std::abs(c));
    return max_coeff_deviation(a, b) <= 1e-8 * scale;
}

}  // namespace detail

// Recovers the unique table {q_beta} with T x^alpha == action(x^alpha) for all
// |alpha| <= D, by graded triangular elimination of
//   T x^alpha = sum_{beta <= alpha} q_beta * (alpha!/(alpha-beta)!) * x^{alpha-beta}.
// A verification pass re-queries the oracle afterwards; a stateful or
// inconsistent oracle fails it.
template <class C>
BasicDiffOperator<C> canonical_from_action(
    const std::function<BasicPolynomial<C>(const Exponent&)>& action, int n, int max_order) {
    BasicDiffOperator<C> t(n, max_order);
    const MonomialBasis basis(n, max_order);
    for (const Exponent& alpha : basis.exponents()) {
        BasicPolynomial<C> residual = action(alpha);
        if (residual.dimension() != n)
            throw DimensionMismatch("action image dimension differs from operator");
        for (const auto& [beta, q] : t.table()) {
            if (!divides(beta, alpha)) continue;
            const C w = CoeffTraits<C>::from_integer(falling_factorial(alpha, beta));
            residual -= q * BasicPolynomial<C>::monomial(alpha - beta, w);
        }
        residual /= CoeffTraits<C>::from_integer(factorial(alpha));
        t.set_coefficient(alpha, residual);
    }
    for (const Exponent& alpha : basis.exponents()) {
        const auto mono = BasicPolynomial<C>::monomial(alpha, C(1));
        if (!detail::table_entry_matches(t.apply(mono), action(alpha)))
            throw InconsistentAction("recovered table does not reproduce the action on x^alpha");
    }
    return t;
}

// deg q_alpha <= |alpha| for every entry; equivalent to T preserving each
// degree block R[x]_{<=d}.
template <class C>
bool is_degree_preserving(const BasicDiffOperator<C>& t) {
    for (const auto& [a, q] : t.table())
        if (Degree(a.order()) < q.degree()) return false;
    return true;
}

// Freezes coefficients at y: T_y = sum_alpha q_alpha(y) d^alpha, which
// satisfies (T f)(y) == (T_y f)(y) for all f of degree <= D.
template <class C>
BasicConstOperator<C> specialize_at(const BasicDiffOperator<C>& t, const std::vector<C>& y) {
    if (static_cast<int>(y.size()) != t.dimension())
        throw DimensionMismatch("base point dimension differs from operator");
    BasicConstOperator<C> r(t.dimension(), t.max_order());
    for (const auto& [a, q] : t.table()) r.add_coefficient(a, q.evaluate(y));
    return r;
}

template <class C>
BasicDiffOperator<C> to_diff_operator(const BasicConstOperator<C>& op) {
    BasicDiffOperator<C> r(op.dimension(), op.max_order());
    for (const auto& [a, c] : op.table())
        r.set_coefficient(a, BasicPolynomial<C>::constant(op.dimension(), c));
    return r;
}

}  // namespace pospres
