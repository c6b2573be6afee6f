#pragma once

// Membership in the class of generators with well-defined exponentials:
// an operator belongs when every monomial orbit x^a, A x^a, A^2 x^a, ...
// stays in a finite-dimensional invariant subspace. Stabilized orbits yield a
// re-verifiable certificate (basis plus restricted matrix); exceeding the
// degree or iteration budget is reported as ignorance, never as disproof.

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "pospres/diff_operator.hpp"
#include "pospres/errors.hpp"
#include "pospres/expm.hpp"
#include "pospres/linear_span.hpp"
#include "pospres/parallel.hpp"
#include "pospres/polynomial.hpp"

namespace pospres {

struct SubspaceCertificate {
    std::vector<Polynomial> basis;
    RationalMatrix matrix;  // matrix[i][j]: coefficient of basis[i] in A basis[j]
};

struct OrbitTrace {
    Exponent seed;
    int iterates = 0;        // applications of A performed
    int degree_reached = 0;  // largest degree seen (the offending one on overflow)
    std::vector<int> degrees;
};

struct MembershipBudgets {
    int seed_degree = 4;
    int degree_budget = 12;
    int iteration_budget = 64;
};

struct MembershipVerdict {
    enum class Tag { Member, BudgetExceeded };
    Tag tag = Tag::Member;
    // Member: nested invariant subspaces, one snapshot per dimension growth
    std::vector<SubspaceCertificate> filtration;
    // BudgetExceeded: first orbit (in graded-lex seed order) that blew a budget
    std::optional<OrbitTrace> trace;
};

// Matrix of A restricted to span(basis); throws NotInvariant when some image
// leaves the span.
inline RationalMatrix restrict_matrix(const DiffOperator& a,
                                      const std::vector<Polynomial>& basis) {
    int needed = 0;
    for (const auto& f : basis) {
        if (f.dimension() != a.dimension())
            throw DimensionMismatch("basis dimension differs from operator");
        if (f.degree().is_finite()) needed = std::max(needed, f.degree().value());
    }
    const MonomialBasis ambient(a.dimension(), needed);
    ExactSpan span(ambient.size());
    for (const auto& f : basis)
        if (!span.insert(to_coordinates(f, ambient)))
            throw std::invalid_argument("basis polynomials are not linearly independent");
    const std::size_t m = basis.size();
    RationalMatrix mat(m, std::vector<Rational>(m, Rational(0)));
    for (std::size_t j = 0; j < m; ++j) {
        Polynomial image = a.apply(basis[j]);
        std::vector<Rational> coords;
        if (image.degree() > Degree(needed)) throw NotInvariant("image leaves the subspace");
        auto c = span.coordinates(to_coordinates(image, ambient));
        if (!c) throw NotInvariant("image leaves the subspace");
        for (std::size_t i = 0; i < m; ++i) mat[i][j] = (*c)[i];
    }
    return mat;
}

namespace detail {

struct OrbitResult {
    bool stabilized = false;
    std::vector<Polynomial> vectors;  // independent orbit vectors, in discovery order
    OrbitTrace trace;
};

inline OrbitResult grow_orbit(const DiffOperator& a, const Exponent& seed,
                              const MonomialBasis& ambient, const MembershipBudgets& budgets) {
    OrbitResult out;
    out.trace.seed = seed;
    ExactSpan span(ambient.size());
    Polynomial v = Polynomial::monomial(seed, Rational(1));
    out.trace.degree_reached = seed.order();
    for (;;) {
        if (v.degree() > Degree(budgets.degree_budget)) {
            out.trace.degree_reached = v.degree().value();
            return out;  // budget exceeded
        }
        if (v.degree().is_finite())
            out.trace.degree_reached = std::max(out.trace.degree_reached, v.degree().value());
        if (!span.insert(to_coordinates(v, ambient))) {
            out.stabilized = true;
            return out;
        }
        out.vectors.push_back(v);
        if (out.trace.iterates + 1 > budgets.iteration_budget) return out;  // budget exceeded
        v = a.apply(v);
        ++out.trace.iterates;
        out.trace.degrees.push_back(v.degree().is_finite() ? v.degree().value() : -1);
    }
}

}  // namespace detail

inline MembershipVerdict check_in_g(const DiffOperator& a, const MembershipBudgets& budgets = {}) {
    if (budgets.seed_degree < 0 || budgets.seed_degree > budgets.degree_budget ||
        budgets.degree_budget > a.max_order())
        throw DegreeBudgetExceedsOperatorOrder(
            "budgets must satisfy seed degree <= degree budget <= operator order");
    const MonomialBasis seeds(a.dimension(), budgets.seed_degree);
    const MonomialBasis ambient(a.dimension(), budgets.degree_budget);

    const auto results = parallel_map(seeds.exponents(), [&](const Exponent& seed) {
        return detail::grow_orbit(a, seed, ambient, budgets);
    });

    for (const auto& r : results) {
        if (!r.stabilized) {
            MembershipVerdict v;
            v.tag = MembershipVerdict::Tag::BudgetExceeded;
            v.trace = r.trace;
            return v;
        }
    }

    // cumulative filtration: V_i = sum of the first i+1 orbit spans
    MembershipVerdict verdict;
    verdict.tag = MembershipVerdict::Tag::Member;
    ExactSpan combined(ambient.size());
    std::vector<Polynomial> basis;
    for (const auto& r : results) {
        bool grew = false;
        for (const auto& v : r.vectors) {
            if (combined.insert(to_coordinates(v, ambient))) {
                basis.push_back(v);
                grew = true;
            }
        }
        if (!grew) continue;
        SubspaceCertificate cert;
        cert.basis = basis;
        cert.matrix = restrict_matrix(a, basis);
        verdict.filtration.push_back(std::move(cert));
    }
    return verdict;
}

// Third-party style re-check: A b_j == sum_i M[i][j] b_i, exactly.
inline bool verify_member_certificate(const DiffOperator& a, const SubspaceCertificate& cert) {
    const std::size_t m = cert.basis.size();
    if (cert.matrix.size() != m) return false;
    for (const auto& row : cert.matrix)
        if (row.size() != m) return false;
    for (std::size_t j = 0; j < m; ++j) {
        Polynomial expect(a.dimension());
        for (std::size_t i = 0; i < m; ++i) expect += cert.basis[i] * cert.matrix[i][j];
        try {
            if (a.apply(cert.basis[j]) != expect) return false;
        } catch (const std::exception&) {
            return false;
        }
    }
    return true;
}

inline bool verify_member_certificate(const DiffOperator& a, const MembershipVerdict& verdict) {
    if (verdict.tag != MembershipVerdict::Tag::Member) return false;
    for (const auto& cert : verdict.filtration)
        if (!verify_member_certificate(a, cert)) return false;
    return true;
}

inline Eigen::MatrixXd to_eigen(const RationalMatrix& m) {
    const auto rows = static_cast<Eigen::Index>(m.size());
    const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(m.front().size());
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            out(i, j) = to_double(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    return out;
}

namespace detail {

inline std::vector<double> subspace_coordinates(const SubspaceCertificate& cert,
                                                const Polynomial& f) {
    if (cert.basis.empty()) throw NotInSubspace("certificate spans the zero subspace");
    int needed = 0;
    for (const auto& b : cert.basis)
        if (b.degree().is_finite()) needed = std::max(needed, b.degree().value());
    if (f.degree() > Degree(needed)) throw NotInSubspace("polynomial outside certified subspace");
    const MonomialBasis ambient(f.dimension(), needed);
    ExactSpan span(ambient.size());
    for (const auto& b : cert.basis) span.insert(to_coordinates(b, ambient));
    auto coords = span.coordinates(to_coordinates(f, ambient));
    if (!coords) throw NotInSubspace("polynomial outside certified subspace");
    std::vector<double> out(coords->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = to_double((*coords)[i]);
    return out;
}

inline PolynomialD assemble(const SubspaceCertificate& cert, const Eigen::VectorXd& coords) {
    PolynomialD out(cert.basis.front().dimension());
    for (Eigen::Index i = 0; i < coords.size(); ++i)
        out += to_double(cert.basis[static_cast<std::size_t>(i)]) * coords(i);
    return out;
}

}  // namespace detail

// Scaling/squaring choices of the float kernel, kept so runs are reproducible.
struct ExpKernelInfo {
    int squarings = 0;
    int pade_order = 0;
};

// e^{t A|_V} f through the certified block; float kernel, ~1e-10 relative.
inline PolynomialD exp_on_subspace(const DiffOperator& a, const SubspaceCertificate& cert,
                                   double t, const Polynomial& f,
                                   ExpKernelInfo* info = nullptr) {
    if (f.dimension() != a.dimension())
        throw DimensionMismatch("operand dimension differs from operator");
    const auto coords = detail::subspace_coordinates(cert, f);
    const Eigen::MatrixXd m = to_eigen(cert.matrix);
    const ExpmResult e = expm(t * m);
    if (info) *info = {e.squarings, e.pade_order};
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(coords.data(),
                                                          static_cast<Eigen::Index>(coords.size()));
    return detail::assemble(cert, e.value * x);
}

struct LimitDeviation {
    int k = 0;
    double forward = 0.0;                 // (1 + A/k)^k f vs e^A f
    std::optional<double> backward;       // (1 - A/k)^{-k} f; empty if resolvent singular
};

// Deviation tables for the exponential limit formulas on a certified block.
// Deviations are max coefficient differences relative to the largest
// coefficient of e^A f, matching the relative tolerances used elsewhere in
// this module.
inline std::vector<LimitDeviation> limit_formula_check(const DiffOperator& a,
                                                       const SubspaceCertificate& cert,
                                                       const Polynomial& f,
                                                       const std::vector<int>& k_list) {
    if (f.dimension() != a.dimension())
        throw DimensionMismatch("operand dimension differs from operator");
    const auto coords = detail::subspace_coordinates(cert, f);
    const Eigen::MatrixXd m = to_eigen(cert.matrix);
    const Eigen::Index dim = m.rows();
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
        coords.data(), static_cast<Eigen::Index>(coords.size()));
    const PolynomialD reference = detail::assemble(cert, expm(m).value * x);
    double ref_scale = 1.0;
    for (const auto& [e, c] : reference.terms()) ref_scale = std::max(ref_scale, std::abs(c));

    std::vector<LimitDeviation> table;
    table.reserve(k_list.size());
    for (int k : k_list) {
        if (k < 1) throw std::invalid_argument("limit formula index must be >= 1");
        LimitDeviation row;
        row.k = k;
        const Eigen::MatrixXd fwd = Eigen::MatrixXd::Identity(dim, dim) + m / double(k);
        Eigen::VectorXd acc = x;
        for (int i = 0; i < k; ++i) acc = fwd * acc;
        row.forward = max_coeff_deviation(detail::assemble(cert, acc), reference) / ref_scale;

        const Eigen::MatrixXd bwd = Eigen::MatrixXd::Identity(dim, dim) - m / double(k);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(bwd);
        if (lu.isInvertible()) {
            Eigen::VectorXd acc2 = x;
            for (int i = 0; i < k; ++i) acc2 = lu.solve(acc2);
            row.backward =
                max_coeff_deviation(detail::assemble(cert, acc2), reference) / ref_scale;
        }
        table.push_back(row);
    }
    return table;
}

}  // namespace pospres
