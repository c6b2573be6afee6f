#pragma once

// Finite-rank maps f -> sum_i l_i(f) p_i where each l_i integrates against a
// finite atomic measure. With atoms in K and p_i in Pos(K) these are
// K-positivity preservers. The converse fails: a preserver with
// infinite-dimensional image (the identity, say) has no such finite form.

#include <utility>
#include <vector>

#include "pospres/errors.hpp"
#include "pospres/polynomial.hpp"

namespace pospres {

// l(f) = sum_i w_i f(z_i), w_i > 0
class AtomicFunctional {
public:
    using Atom = std::pair<std::vector<Rational>, Rational>;

    AtomicFunctional(int n, std::vector<Atom> atoms) : n_(n), atoms_(std::move(atoms)) {
        if (n < 1) throw std::invalid_argument("functional dimension must be >= 1");
        for (const auto& [z, w] : atoms_) {
            if (static_cast<int>(z.size()) != n_)
                throw DimensionMismatch("atom dimension differs from functional");
            if (w <= 0) throw std::invalid_argument("atom weights must be positive");
        }
    }

    int dimension() const { return n_; }
    const std::vector<Atom>& atoms() const { return atoms_; }

    Rational operator()(const Polynomial& f) const {
        if (f.dimension() != n_) throw DimensionMismatch("operand dimension differs from functional");
        Rational acc = 0;
        for (const auto& [z, w] : atoms_) acc += w * f.evaluate(z);
        return acc;
    }

private:
    int n_;
    std::vector<Atom> atoms_;
};

class FiniteRankOperator {
public:
    using Pair = std::pair<AtomicFunctional, Polynomial>;

    FiniteRankOperator(int n, std::vector<Pair> pairs) : n_(n), pairs_(std::move(pairs)) {
        if (n < 1) throw std::invalid_argument("operator dimension must be >= 1");
        for (const auto& [l, p] : pairs_)
            if (l.dimension() != n_ || p.dimension() != n_)
                throw DimensionMismatch("pair dimension differs from operator");
    }

    int dimension() const { return n_; }
    const std::vector<Pair>& pairs() const { return pairs_; }

private:
    int n_;
    std::vector<Pair> pairs_;
};

inline Polynomial finite_rank_apply(const FiniteRankOperator& op, const Polynomial& f) {
    if (f.dimension() != op.dimension())
        throw DimensionMismatch("operand dimension differs from operator");
    Polynomial r(op.dimension());
    for (const auto& [l, p] : op.pairs()) r += p * l(f);
    return r;
}

}  // namespace pospres
