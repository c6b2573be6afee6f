#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pospres/const_group.hpp"
#include "test_support.hpp"

using namespace pospres;
using testsupport::Rng;

namespace {

ConstOperator single(int n, const Exponent& alpha, const Rational& c, int order) {
    ConstOperator op(n, order);
    op.add_coefficient(alpha, c);
    return op;
}

ConstOperator shift_table(int order) {
    // exp(d/dx): a_k = 1/k!
    ConstOperator op(1, order);
    for (int k = 0; k <= order; ++k) op.add_coefficient(Exponent({k}), Rational(1, factorial(k)));
    return op;
}

}  // namespace

TEST_CASE("composition") {
    SECTION("identity is neutral") {
        Rng rng(5);
        const auto b = testsupport::random_algebra_element(rng, 2, 4);
        CHECK(compose(ConstOperator::identity(2, 4), b) == b);
    }
    SECTION("difference of squares in d") {
        auto plus = ConstOperator::identity(1, 4);
        plus.add_coefficient(Exponent({1}), 1);
        auto minus = ConstOperator::identity(1, 4);
        minus.add_coefficient(Exponent({1}), -1);
        auto expect = ConstOperator::identity(1, 4);
        expect.add_coefficient(Exponent({2}), -1);
        CHECK(compose(plus, minus) == expect);
    }
    SECTION("shift squared doubles the step") {
        const auto twice = compose(shift_table(6), shift_table(6));
        Rational p2 = 1;
        for (int k = 0; k <= 6; ++k) {
            CHECK(twice.coefficient(Exponent({k})) == p2 / Rational(factorial(k)));
            p2 *= 2;
        }
    }
    SECTION("composition truncates to the smaller order") {
        const auto a = shift_table(6);
        const auto b = shift_table(3);
        CHECK(compose(a, b).max_order() == 3);
    }
}

TEST_CASE("exponential") {
    SECTION("exp of zero") {
        CHECK(exp_dc(ConstOperator(2, 5)) == ConstOperator::identity(2, 5));
    }
    SECTION("exp of the derivative is the shift") {
        const auto e = exp_dc(single(1, Exponent({1}), 1, 6));
        CHECK(e == shift_table(6));
        const Polynomial x2 = Polynomial::monomial(Exponent({2}), 1);
        CHECK(e.apply(x2) == taylor_shift(x2, {Rational(1)}));
    }
    SECTION("heat table applied to a square") {
        const auto e = exp_dc(single(1, Exponent({2}), 1, 4));
        const Polynomial x2 = Polynomial::monomial(Exponent({2}), 1);
        CHECK(e.apply(x2) == x2 + Polynomial::constant(1, 2));
    }
    SECTION("raising the order beyond the table is exact") {
        const auto e = exp_dc(single(1, Exponent({2}), 1, 2), 4);
        CHECK(e.coefficient(Exponent({0})) == 1);
        CHECK(e.coefficient(Exponent({2})) == 1);
        CHECK(e.coefficient(Exponent({4})) == Rational(1, 2));
    }
    SECTION("group elements are rejected") {
        CHECK_THROWS_AS(exp_dc(ConstOperator::identity(1, 3)), NotAlgebraElement);
    }
}

TEST_CASE("logarithm") {
    SECTION("log of the identity") {
        CHECK(log_dc(ConstOperator::identity(3, 4)) == ConstOperator(3, 4));
    }
    SECTION("log of the shift is the derivative") {
        CHECK(log_dc(shift_table(8)) == single(1, Exponent({1}), 1, 8));
    }
    SECTION("mercator series") {
        auto t = ConstOperator::identity(1, 6);
        t.add_coefficient(Exponent({1}), 1);
        const auto l = log_dc(t);
        for (int k = 1; k <= 6; ++k)
            CHECK(l.coefficient(Exponent({k})) ==
                  Rational(k % 2 == 1 ? 1 : -1) / Rational(k));
    }
    SECTION("algebra elements are rejected") {
        CHECK_THROWS_AS(log_dc(ConstOperator(1, 3)), NotGroupElement);
    }
}

TEST_CASE("group laws hold exactly") {
    Rng rng(29);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 1 + trial % 3;
        const int order = n == 3 ? 5 : 8;
        const auto a = testsupport::random_algebra_element(rng, n, order);
        const auto b = testsupport::random_algebra_element(rng, n, order);

        // exp and log invert each other at every order
        const auto ea = exp_dc(a);
        const auto eb = exp_dc(b);
        CHECK(log_dc(ea) == a);
        CHECK(exp_dc(log_dc(eb)) == eb);

        // the group is commutative and exp turns sums into products
        CHECK(compose(ea, eb) == compose(eb, ea));
        CHECK(exp_dc(a + b) == compose(ea, eb));

        // one-parameter law
        const Rational s = testsupport::random_rational(rng);
        const Rational t = testsupport::random_rational(rng);
        CHECK(exp_dc(a * (s + t)) == compose(exp_dc(a * s), exp_dc(a * t)));
    }
}

TEST_CASE("consistency with polynomial shifts") {
    Rng rng(31);
    const auto shift = exp_dc(single(1, Exponent({1}), 1, 8));
    for (int trial = 0; trial < 10; ++trial) {
        const Polynomial f = testsupport::random_polynomial(rng, 1, 8);
        CHECK(shift.apply(f) == taylor_shift(f, {Rational(1)}));
    }
}

TEST_CASE("real-time sampling stays within float tolerance") {
    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = testsupport::random_algebra_element(rng, 1, 6);
        const Rational t(trial + 1, 4);
        const auto exact = exp_dc(a * t);
        const auto sampled = exp_dc_real(a, to_double(t));
        for (const auto& [alpha, c] : exact.table()) {
            const double want = to_double(c);
            const double got = sampled.coefficient(alpha);
            CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("operator kinds") {
    CHECK(ConstOperator::identity(1, 2).kind() == OperatorKind::GroupElement);
    CHECK(ConstOperator(1, 2).kind() == OperatorKind::AlgebraElement);
    CHECK(single(1, Exponent({0}), Rational(1, 2), 2).kind() == OperatorKind::General);
}
