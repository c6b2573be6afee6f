#pragma once

// Multi-indices alpha in N_0^n and the graded-lexicographic monomial basis
// used everywhere a canonical term/row order is required.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "pospres/errors.hpp"
#include "pospres/rational.hpp"

namespace pospres {

class Exponent {
public:
    Exponent() = default;

    explicit Exponent(std::vector<int> entries) : entries_(std::move(entries)) {
        for (int e : entries_)
            if (e < 0) throw std::invalid_argument("exponent entries must be non-negative");
    }

    static Exponent zero(int n) { return Exponent(std::vector<int>(static_cast<std::size_t>(n), 0)); }

    // e_i
    static Exponent unit(int n, int i) {
        std::vector<int> v(static_cast<std::size_t>(n), 0);
        v.at(static_cast<std::size_t>(i)) = 1;
        return Exponent(std::move(v));
    }

    int dimension() const { return static_cast<int>(entries_.size()); }

    // |alpha|
    int order() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

    int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }

    const std::vector<int>& entries() const { return entries_; }

    bool is_zero() const {
        return std::all_of(entries_.begin(), entries_.end(), [](int e) { return e == 0; });
    }

    bool operator==(const Exponent& o) const { return entries_ == o.entries_; }
    bool operator!=(const Exponent& o) const { return entries_ != o.entries_; }

    // Graded lexicographic: by total order first, then the lexicographically
    // larger vector ranks lower, so iteration yields 1, x1, x2, x1^2, x1 x2, ...
    bool operator<(const Exponent& o) const {
        const int a = order(), b = o.order();
        if (a != b) return a < b;
        return std::lexicographical_compare(o.entries_.begin(), o.entries_.end(),
                                            entries_.begin(), entries_.end());
    }

private:
    std::vector<int> entries_;
};

inline void require_same_dimension(const Exponent& a, const Exponent& b) {
    if (a.dimension() != b.dimension())
        throw DimensionMismatch("multi-index dimensions differ");
}

inline Exponent operator+(const Exponent& a, const Exponent& b) {
    require_same_dimension(a, b);
    std::vector<int> v(a.entries());
    for (int i = 0; i < b.dimension(); ++i) v[static_cast<std::size_t>(i)] += b[i];
    return Exponent(std::move(v));
}

// Requires b <= a componentwise.
inline Exponent operator-(const Exponent& a, const Exponent& b) {
    require_same_dimension(a, b);
    std::vector<int> v(a.entries());
    for (int i = 0; i < b.dimension(); ++i) {
        v[static_cast<std::size_t>(i)] -= b[i];
        if (v[static_cast<std::size_t>(i)] < 0)
            throw std::invalid_argument("multi-index subtraction would go negative");
    }
    return Exponent(std::move(v));
}

inline Exponent operator*(const Exponent& a, int k) {
    if (k < 0) throw std::invalid_argument("multi-index scale must be non-negative");
    std::vector<int> v(a.entries());
    for (int& e : v) e *= k;
    return Exponent(std::move(v));
}

// b <= a componentwise (b divides x^a)
inline bool divides(const Exponent& b, const Exponent& a) {
    require_same_dimension(a, b);
    for (int i = 0; i < a.dimension(); ++i)
        if (b[i] > a[i]) return false;
    return true;
}

inline Integer factorial(int k) {
    Integer r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

// alpha! = prod alpha_i!
inline Integer factorial(const Exponent& a) {
    Integer r = 1;
    for (int i = 0; i < a.dimension(); ++i) r *= factorial(a[i]);
    return r;
}

// beta!/(beta-alpha)!, the coefficient of d^alpha x^beta; requires alpha <= beta.
inline Integer falling_factorial(const Exponent& beta, const Exponent& alpha) {
    Integer r = 1;
    for (int i = 0; i < beta.dimension(); ++i)
        for (int j = beta[i]; j > beta[i] - alpha[i]; --j) r *= j;
    return r;
}

inline Integer binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Integer r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

// binom(alpha, beta) componentwise
inline Integer binomial(const Exponent& a, const Exponent& b) {
    require_same_dimension(a, b);
    Integer r = 1;
    for (int i = 0; i < a.dimension(); ++i) r *= binomial(a[i], b[i]);
    return r;
}

// Visits every beta <= alpha componentwise (odometer walk).
template <class Fn>
void for_each_below(const Exponent& alpha, Fn&& fn) {
    std::vector<int> v(static_cast<std::size_t>(alpha.dimension()), 0);
    const int n = alpha.dimension();
    for (;;) {
        fn(Exponent(v));
        int i = 0;
        while (i < n && v[static_cast<std::size_t>(i)] == alpha[i]) {
            v[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == n) return;
        ++v[static_cast<std::size_t>(i)];
    }
}

// All multi-indices with |alpha| <= max_order in graded-lex order, with
// constant-time rank lookup. Indexes moment-matrix rows, dense sequences,
// and monomial-block bases.
class MonomialBasis {
public:
    MonomialBasis(int n, int max_order) : n_(n), max_order_(max_order) {
        if (n < 1) throw std::invalid_argument("dimension must be >= 1");
        if (max_order < 0) throw std::invalid_argument("max order must be >= 0");
        Exponent top(std::vector<int>(static_cast<std::size_t>(n), max_order));
        for_each_below(top, [&](const Exponent& a) {
            if (a.order() <= max_order) list_.push_back(a);
        });
        std::sort(list_.begin(), list_.end());
        for (std::size_t i = 0; i < list_.size(); ++i) rank_[list_[i]] = i;
    }

    int dimension() const { return n_; }
    int max_order() const { return max_order_; }
    std::size_t size() const { return list_.size(); }
    const Exponent& operator[](std::size_t i) const { return list_[i]; }
    const std::vector<Exponent>& exponents() const { return list_; }

    std::optional<std::size_t> find(const Exponent& a) const {
        auto it = rank_.find(a);
        if (it == rank_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t rank(const Exponent& a) const {
        auto r = find(a);
        if (!r) throw std::invalid_argument("exponent outside monomial basis");
        return *r;
    }

private:
    int n_;
    int max_order_;
    std::vector<Exponent> list_;
    std::map<Exponent, std::size_t> rank_;
};

}  // namespace pospres
