#pragma once

// Exact spans over the rationals: incremental reduced-echelon insertion with
// coordinate recovery in terms of the originally inserted vectors. Backs the
// orbit stabilization search and block-matrix extraction.

#include <optional>
#include <vector>

#include "pospres/exponent.hpp"
#include "pospres/polynomial.hpp"
#include "pospres/rational.hpp"

namespace pospres {

class ExactSpan {
public:
    explicit ExactSpan(std::size_t ambient_dim) : ambient_(ambient_dim) {}

    std::size_t ambient_dimension() const { return ambient_; }
    std::size_t dim() const { return rows_.size(); }

    // true iff v enlarged the span; v then becomes basis vector dim()-1
    bool insert(const std::vector<Rational>& v) {
        auto [residual, combo] = reduce(v);
        const auto pivot = first_nonzero(residual);
        if (!pivot) return false;
        const Rational scale = residual[*pivot];
        for (auto& x : residual) x /= scale;
        // rep of the new row over inserted vectors: (e_new - combo)/scale
        for (auto& x : combo) x = -x / scale;
        combo.push_back(Rational(1) / scale);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            reps_[r].push_back(Rational(0));
            const Rational c = rows_[r][*pivot];
            if (c == 0) continue;
            axpy(rows_[r], residual, -c);
            axpy(reps_[r], combo, -c);
        }
        rows_.push_back(std::move(residual));
        reps_.push_back(std::move(combo));
        pivots_.push_back(*pivot);
        return true;
    }

    bool contains(const std::vector<Rational>& v) const {
        return !first_nonzero(reduce(v).first).has_value();
    }

    // coordinates of v over the inserted basis vectors, if v lies in the span
    std::optional<std::vector<Rational>> coordinates(const std::vector<Rational>& v) const {
        auto [residual, combo] = reduce(v);
        if (first_nonzero(residual)) return std::nullopt;
        combo.resize(rows_.size(), Rational(0));
        return combo;
    }

private:
    std::pair<std::vector<Rational>, std::vector<Rational>> reduce(std::vector<Rational> v) const {
        if (v.size() != ambient_) throw DimensionMismatch("vector length differs from ambient space");
        std::vector<Rational> combo(rows_.size(), Rational(0));
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const Rational c = v[pivots_[r]];  // rows are pivot-normalized
            if (c == 0) continue;
            axpy(v, rows_[r], -c);
            std::vector<Rational> rep = reps_[r];
            rep.resize(combo.size(), Rational(0));
            axpy(combo, rep, c);
        }
        return {std::move(v), std::move(combo)};
    }

    static void axpy(std::vector<Rational>& y, const std::vector<Rational>& x, const Rational& a) {
        for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
            if (!(x[i] == 0)) y[i] += a * x[i];
    }

    static std::optional<std::size_t> first_nonzero(const std::vector<Rational>& v) {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!(v[i] == 0)) return i;
        return std::nullopt;
    }

    std::size_t ambient_;
    std::vector<std::vector<Rational>> rows_;    // reduced echelon, pivot entries = 1
    std::vector<std::vector<Rational>> reps_;    // rows_[r] = sum reps_[r][j] * inserted[j]
    std::vector<std::size_t> pivots_;
};

inline std::vector<Rational> to_coordinates(const Polynomial& f, const MonomialBasis& basis) {
    std::vector<Rational> v(basis.size(), Rational(0));
    for (const auto& [a, c] : f.terms()) {
        auto r = basis.find(a);
        if (!r) throw DegreeBudgetExceeded("polynomial has terms outside the monomial block");
        v[*r] = c;
    }
    return v;
}

inline Polynomial from_coordinates(const std::vector<Rational>& v, const MonomialBasis& basis) {
    if (v.size() != basis.size()) throw DimensionMismatch("coordinate length differs from basis");
    Polynomial f(basis.dimension());
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!(v[i] == 0)) f.add_term(basis[i], v[i]);
    return f;
}

using RationalMatrix = std::vector<std::vector<Rational>>;

}  // namespace pospres
