// Shows the orbit-stabilization search: which operators admit certified
// exponentials, and what the certificate looks like.

#include <iostream>

#include "pospres/pospres.hpp"

using namespace pospres;

namespace {

void probe(const std::string& name, const DiffOperator& a) {
    const auto verdict = check_in_g(a);
    if (verdict.tag == MembershipVerdict::Tag::Member) {
        const auto& top = verdict.filtration.back();
        std::cout << name << ": member, largest certified block has dim " << top.basis.size()
                  << ", re-verifies: " << std::boolalpha << verify_member_certificate(a, verdict)
                  << "\n";
    } else {
        std::cout << name << ": budget exceeded, orbit of x^" << verdict.trace->seed[0]
                  << " reached degree " << verdict.trace->degree_reached << " after "
                  << verdict.trace->iterates << " iterates\n";
    }
}

}  // namespace

int main() {
    DiffOperator ddx(1, 12);
    ddx.set_coefficient(Exponent({1}), Polynomial::constant(1, 1));
    probe("d/dx        ", ddx);

    DiffOperator euler(1, 12);
    euler.set_coefficient(Exponent({1}), Polynomial::variable(1, 0));
    probe("x d/dx      ", euler);

    DiffOperator grow(1, 12);
    grow.set_coefficient(Exponent({1}), Polynomial::monomial(Exponent({2}), 1));
    probe("x^2 d/dx    ", grow);

    // exponential limit formulas on the certified block of d/dx
    const auto verdict = check_in_g(ddx);
    const auto table = limit_formula_check(ddx, verdict.filtration.back(),
                                           Polynomial::monomial(Exponent({4}), 1),
                                           {2, 8, 32, 128, 512});
    std::cout << "\n(1 + A/k)^k x^4 against exp(A) x^4:\n";
    for (const auto& row : table) {
        std::cout << "  k = " << row.k << ": forward deviation " << row.forward;
        if (row.backward) std::cout << ", resolvent deviation " << *row.backward;
        std::cout << "\n";
    }
    return 0;
}
