#pragma once

// Diagonal operators x^alpha -> t_alpha x^alpha. The diagonal sequence t and
// the canonical-coefficient sequence c determine each other through the
// mutually inverse binomial transforms
//   t_alpha = sum_{beta<=alpha} binom(alpha,beta) c_beta
//   c_alpha = sum_{beta<=alpha} (-1)^{|alpha-beta|} binom(alpha,beta) t_beta
// and c gives the canonical form T = sum (c_alpha/alpha!) x^alpha d^alpha.

#include <map>

#include "pospres/diff_operator.hpp"
#include "pospres/exponent.hpp"
#include "pospres/rational.hpp"

namespace pospres {

// Dense up to order D: every |alpha| <= D has a value. Both transforms touch
// every beta <= alpha, so sparse storage would buy nothing.
class DiagonalSequence {
public:
    DiagonalSequence(int n, int order) : n_(n), order_(order) {
        if (n < 1) throw std::invalid_argument("sequence dimension must be >= 1");
        if (order < 0) throw std::invalid_argument("sequence order must be >= 0");
        const MonomialBasis basis(n, order);
        for (const Exponent& a : basis.exponents()) values_.emplace(a, Rational(0));
    }

    int dimension() const { return n_; }
    int order() const { return order_; }
    const std::map<Exponent, Rational>& values() const { return values_; }

    const Rational& at(const Exponent& a) const {
        auto it = values_.find(a);
        if (it == values_.end()) throw std::invalid_argument("index outside sequence order");
        return it->second;
    }

    void set(const Exponent& a, const Rational& v) {
        auto it = values_.find(a);
        if (it == values_.end()) throw std::invalid_argument("index outside sequence order");
        it->second = v;
    }

    bool operator==(const DiagonalSequence& o) const {
        return n_ == o.n_ && order_ == o.order_ && values_ == o.values_;
    }
    bool operator!=(const DiagonalSequence& o) const { return !(*this == o); }

private:
    int n_;
    int order_;
    std::map<Exponent, Rational> values_;
};

// alternating binomial transform, diagonal sequence -> canonical coefficients
inline DiagonalSequence t_to_c(const DiagonalSequence& t) {
    DiagonalSequence c(t.dimension(), t.order());
    for (const auto& [alpha, unused] : t.values()) {
        Rational acc = 0;
        for_each_below(alpha, [&](const Exponent& beta) {
            const Rational term = Rational(binomial(alpha, beta)) * t.at(beta);
            acc += ((alpha - beta).order() % 2 == 0) ? term : -term;
        });
        c.set(alpha, acc);
    }
    return c;
}

// binomial transform, canonical coefficients -> diagonal sequence
inline DiagonalSequence c_to_t(const DiagonalSequence& c) {
    DiagonalSequence t(c.dimension(), c.order());
    for (const auto& [alpha, unused] : c.values()) {
        Rational acc = 0;
        for_each_below(alpha,
                       [&](const Exponent& beta) { acc += Rational(binomial(alpha, beta)) * c.at(beta); });
        t.set(alpha, acc);
    }
    return t;
}

// T = sum (c_alpha/alpha!) x^alpha d^alpha; applying to x^beta yields
// t_beta x^beta with t = c_to_t(c).
inline DiffOperator diagonal_to_canonical(const DiagonalSequence& c) {
    const int n = c.dimension();
    DiffOperator t(n, c.order());
    for (const auto& [alpha, v] : c.values()) {
        if (v == 0) continue;
        t.set_coefficient(alpha, Polynomial::monomial(alpha, v / Rational(factorial(alpha))));
    }
    return t;
}

}  // namespace pospres
