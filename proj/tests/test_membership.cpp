#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pospres/membership.hpp"
#include "test_support.hpp"

using namespace pospres;
using testsupport::Rng;

namespace {

DiffOperator derivative_op(int k = 1, int max_order = 12) {
    DiffOperator t(1, max_order);
    t.set_coefficient(Exponent({k}), Polynomial::constant(1, 1));
    return t;
}

DiffOperator euler_op(int max_order = 12) {
    DiffOperator t(1, max_order);
    t.set_coefficient(Exponent({1}), Polynomial::variable(1, 0));
    return t;
}

Polynomial xk(int k) { return Polynomial::monomial(Exponent({k}), 1); }

}  // namespace

TEST_CASE("orbit stabilization verdicts") {
    SECTION("derivative powers are members") {
        for (int k = 1; k <= 3; ++k) {
            const auto verdict = check_in_g(derivative_op(k));
            REQUIRE(verdict.tag == MembershipVerdict::Tag::Member);
            CHECK(verify_member_certificate(derivative_op(k), verdict));
        }
    }
    SECTION("euler orbits stabilize in one step") {
        const auto verdict = check_in_g(euler_op());
        REQUIRE(verdict.tag == MembershipVerdict::Tag::Member);
        for (const auto& cert : verdict.filtration) CHECK(cert.basis.size() == cert.matrix.size());
        CHECK(verify_member_certificate(euler_op(), verdict));
        // each monomial is an eigenvector, so the filtration grows one at a time
        CHECK(verdict.filtration.back().basis.size() == 5);
    }
    SECTION("zero operator is a member") {
        const DiffOperator zero(1, 12);
        const auto verdict = check_in_g(zero);
        REQUIRE(verdict.tag == MembershipVerdict::Tag::Member);
        CHECK(verify_member_certificate(zero, verdict));
    }
    SECTION("degree-raising operator exceeds the budget with a trace") {
        DiffOperator grow(1, 12);  // x^2 d/dx sends x^k to k x^{k+1}
        grow.set_coefficient(Exponent({1}), Polynomial::monomial(Exponent({2}), 1));
        const auto verdict = check_in_g(grow);
        REQUIRE(verdict.tag == MembershipVerdict::Tag::BudgetExceeded);
        REQUIRE(verdict.trace.has_value());
        CHECK(verdict.trace->seed == Exponent({1}));
        CHECK(verdict.trace->degree_reached == 13);
        // the recorded degrees walk up one per iterate
        for (std::size_t i = 0; i + 1 < verdict.trace->degrees.size(); ++i)
            CHECK(verdict.trace->degrees[i + 1] == verdict.trace->degrees[i] + 1);
    }
    SECTION("budget preconditions") {
        CHECK_THROWS_AS(check_in_g(derivative_op(1, 6), MembershipBudgets{4, 12, 64}),
                        DegreeBudgetExceedsOperatorOrder);
        CHECK_THROWS_AS(check_in_g(derivative_op(), MembershipBudgets{8, 6, 64}),
                        DegreeBudgetExceedsOperatorOrder);
    }
    SECTION("iteration budget trips on slow stabilization") {
        const auto verdict = check_in_g(derivative_op(), MembershipBudgets{4, 12, 2});
        REQUIRE(verdict.tag == MembershipVerdict::Tag::BudgetExceeded);
        CHECK(verdict.trace->seed == Exponent({2}));  // needs three iterates, cap is two
        CHECK(verdict.trace->iterates == 2);
    }
}

TEST_CASE("restricted matrices") {
    SECTION("euler on the monomial block is diagonal") {
        const std::vector<Polynomial> basis{Polynomial::constant(1, 1), xk(1), xk(2)};
        const auto m = restrict_matrix(euler_op(), basis);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                      (i == j ? Rational(i) : Rational(0)));
    }
    SECTION("derivative is nilpotent upper shift") {
        const std::vector<Polynomial> basis{Polynomial::constant(1, 1), xk(1)};
        const auto m = restrict_matrix(derivative_op(), basis);
        CHECK(m[0][0] == 0);
        CHECK(m[0][1] == 1);
        CHECK(m[1][0] == 0);
        CHECK(m[1][1] == 0);
    }
    SECTION("zero operator restricts to the zero matrix") {
        const std::vector<Polynomial> basis{xk(1), xk(3)};
        const auto m = restrict_matrix(DiffOperator(1, 6), basis);
        for (const auto& row : m)
            for (const auto& v : row) CHECK(v == 0);
    }
    SECTION("non-invariant basis is rejected") {
        const std::vector<Polynomial> basis{xk(2)};  // d/dx x^2 = 2x leaves the span
        CHECK_THROWS_AS(restrict_matrix(derivative_op(), basis), NotInvariant);
    }
    SECTION("restricted matrices always have eigenvalues") {
        Rng rng(73);
        for (int trial = 0; trial < 8; ++trial) {
            DiffOperator t(1, 8);
            // constant-coefficient tables always stabilize
            for (int k = 1; k <= 3; ++k)
                t.set_coefficient(Exponent({k}),
                                  Polynomial::constant(1, testsupport::random_rational(rng)));
            const auto verdict = check_in_g(t, MembershipBudgets{3, 8, 32});
            REQUIRE(verdict.tag == MembershipVerdict::Tag::Member);
            const auto& cert = verdict.filtration.back();
            REQUIRE(cert.basis.size() >= 1);
            Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(cert.matrix));
            CHECK(solver.eigenvalues().size() == static_cast<Eigen::Index>(cert.basis.size()));
        }
    }
}

TEST_CASE("exponentials on certified blocks") {
    SECTION("euler eigenvector scales by e^2") {
        const auto verdict = check_in_g(euler_op());
        REQUIRE(verdict.tag == MembershipVerdict::Tag::Member);
        const auto g = exp_on_subspace(euler_op(), verdict.filtration.back(), 1.0, xk(2));
        CHECK(std::abs(g.coefficient(Exponent({2})) - std::exp(2.0)) <= 1e-10 * std::exp(2.0));
        CHECK(g.terms().size() == 1);
    }
    SECTION("derivative exponentials shift") {
        const auto verdict = check_in_g(derivative_op());
        REQUIRE(verdict.tag == MembershipVerdict::Tag::Member);
        const auto g = exp_on_subspace(derivative_op(), verdict.filtration.back(), 1.0, xk(2));
        const PolynomialD expect = to_double(taylor_shift(xk(2), {Rational(1)}));
        CHECK(max_coeff_deviation(g, expect) <= 1e-10);
    }
    SECTION("zero time is the identity") {
        const auto verdict = check_in_g(euler_op());
        const Polynomial f = xk(3) + xk(1);
        const auto g = exp_on_subspace(euler_op(), verdict.filtration.back(), 0.0, f);
        CHECK(max_coeff_deviation(g, to_double(f)) <= 1e-12);
    }
    SECTION("kernel choices are reported") {
        const auto verdict = check_in_g(euler_op());
        ExpKernelInfo info;
        exp_on_subspace(euler_op(), verdict.filtration.back(), 4.0, xk(2), &info);
        CHECK(info.pade_order == 13);  // ||4 diag(0..4)||_1 = 16 forces scaling
        CHECK(info.squarings >= 1);
        exp_on_subspace(euler_op(), verdict.filtration.back(), 0.001, xk(2), &info);
        CHECK(info.pade_order == 3);
        CHECK(info.squarings == 0);
    }
    SECTION("outside the block is rejected") {
        const auto verdict = check_in_g(euler_op());
        const auto& first = verdict.filtration.front();  // span{1}
        CHECK_THROWS_AS(exp_on_subspace(euler_op(), first, 1.0, xk(1)), NotInSubspace);
    }
    SECTION("agrees with the exact constant-coefficient exponential") {
        Rng rng(79);
        for (int trial = 0; trial < 6; ++trial) {
            ConstOperator a(1, 8);
            for (int k = 1; k <= 3; ++k) a.add_coefficient(Exponent({k}), testsupport::random_rational(rng, 3, 3));
            const DiffOperator ad = to_diff_operator(a);
            const auto verdict = check_in_g(ad, MembershipBudgets{4, 8, 32});
            REQUIRE(verdict.tag == MembershipVerdict::Tag::Member);
            const Polynomial f = testsupport::random_polynomial(rng, 1, 4);
            const Polynomial exact = exp_dc(a).apply(f);
            const auto approx = exp_on_subspace(ad, verdict.filtration.back(), 1.0, f);
            double scale = 1.0;
            for (const auto& [e, c] : exact.terms()) scale = std::max(scale, std::abs(to_double(c)));
            CHECK(max_coeff_deviation(approx, to_double(exact)) <= 1e-10 * scale);
        }
    }
    SECTION("semigroup property on a certified block") {
        const auto verdict = check_in_g(euler_op());
        const auto& cert = verdict.filtration.back();
        const Polynomial f = xk(4) + xk(2) * Rational(3);
        const auto one_then_half = exp_on_subspace(
            euler_op(), cert, 0.5, to_exact(exp_on_subspace(euler_op(), cert, 1.0, f)));
        const auto direct = exp_on_subspace(euler_op(), cert, 1.5, f);
        double scale = 1.0;
        for (const auto& [e, c] : direct.terms()) scale = std::max(scale, std::abs(c));
        CHECK(max_coeff_deviation(one_then_half, direct) <= 1e-8 * scale);
    }
}

TEST_CASE("limit formulas") {
    SECTION("zero operator has zero deviation") {
        const DiffOperator zero(1, 12);
        const auto verdict = check_in_g(zero);
        const auto table =
            limit_formula_check(zero, verdict.filtration.back(), xk(2), {1, 4, 16});
        for (const auto& row : table) {
            CHECK(row.forward <= 1e-14);
            REQUIRE(row.backward.has_value());
            CHECK(*row.backward <= 1e-14);
        }
    }
    SECTION("derivative on a quartic converges monotonically") {
        const auto verdict = check_in_g(derivative_op());
        const auto table = limit_formula_check(derivative_op(), verdict.filtration.back(), xk(4),
                                               {2, 8, 32, 128});
        for (std::size_t i = 0; i + 1 < table.size(); ++i) {
            CHECK(table[i + 1].forward < table[i].forward);
            REQUIRE(table[i].backward.has_value());
            CHECK(*table[i + 1].backward < *table[i].backward);
        }
    }
    SECTION("scalar case matches the hand value") {
        const auto verdict = check_in_g(euler_op());
        const auto table = limit_formula_check(euler_op(), verdict.filtration.back(), xk(1), {1});
        REQUIRE(table.size() == 1);
        // (1 + A) x = 2x against e x, relative to the reference coefficient e
        const double expect = (std::exp(1.0) - 2.0) / std::exp(1.0);
        CHECK(std::abs(table[0].forward - expect) <= 1e-10);
        // (1 - A) is singular on the x component: the resolvent row is skipped
        CHECK_FALSE(table[0].backward.has_value());
    }
}
