#pragma once

// Generators of positivity-preserving semigroups from Levy-Khinchin data
// (Sigma, b, nu): the first-order coefficients pick up the large-atom drift
// correction, the second-order ones Sigma plus the second nu-moments, and all
// higher orders are pure nu-moments. With nu a finite atomic measure every
// integral is an exact finite sum. The refutation sweeps exponentiate a
// candidate generator over a time grid and hand each exp(tA) to the
// preserver test.

#include <utility>
#include <vector>

#include "pospres/const_group.hpp"
#include "pospres/diff_operator.hpp"
#include "pospres/errors.hpp"
#include "pospres/expm.hpp"
#include "pospres/membership.hpp"
#include "pospres/moment.hpp"

namespace pospres {

struct LevyAtom {
    std::vector<Rational> z;  // atom location, never the origin
    Rational w;               // positive weight
};

class LevyTriplet {
public:
    LevyTriplet(int n, RationalMatrix sigma, std::vector<Rational> drift,
                std::vector<LevyAtom> atoms)
        : n_(n), sigma_(std::move(sigma)), drift_(std::move(drift)), atoms_(std::move(atoms)) {
        if (n < 1) throw InvalidTriplet("dimension must be >= 1");
        if (static_cast<int>(sigma_.size()) != n)
            throw InvalidTriplet("Sigma must be n x n");
        for (const auto& row : sigma_)
            if (static_cast<int>(row.size()) != n) throw InvalidTriplet("Sigma must be n x n");
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (sigma_at(i, j) != sigma_at(j, i)) throw InvalidTriplet("Sigma must be symmetric");
        if (static_cast<int>(drift_.size()) != n) throw InvalidTriplet("drift must have length n");
        for (const auto& atom : atoms_) {
            if (static_cast<int>(atom.z.size()) != n)
                throw InvalidTriplet("atom dimension differs from triplet");
            bool zero = true;
            for (const auto& c : atom.z)
                if (c != 0) zero = false;
            if (zero) throw InvalidTriplet("the Levy measure must have no atom at the origin");
            if (atom.w <= 0) throw InvalidTriplet("atom weights must be positive");
        }
        // PSD check is a float eigencheck; Sigma entries are desk-scale.
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = to_double(sigma_at(i, j));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
        if (solver.eigenvalues()(0) < -1e-10)
            throw InvalidTriplet("Sigma must be positive semidefinite");
    }

    int dimension() const { return n_; }
    const RationalMatrix& sigma() const { return sigma_; }
    const std::vector<Rational>& drift() const { return drift_; }
    const std::vector<LevyAtom>& atoms() const { return atoms_; }

    const Rational& sigma_at(int i, int j) const {
        return sigma_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }

private:
    int n_;
    RationalMatrix sigma_;
    std::vector<Rational> drift_;
    std::vector<LevyAtom> atoms_;
};

namespace detail {

inline Rational atom_power(const LevyAtom& atom, const Exponent& alpha) {
    Rational r = atom.w;
    for (int i = 0; i < alpha.dimension(); ++i)
        for (int k = 0; k < alpha[i]; ++k) r *= atom.z[static_cast<std::size_t>(i)];
    return r;
}

// ||z||_2 >= 1, decided exactly on the squared norm
inline bool large_atom(const LevyAtom& atom) {
    Rational norm2 = 0;
    for (const auto& c : atom.z) norm2 += c * c;
    return norm2 >= 1;
}

}  // namespace detail

// A = sum_{alpha != 0} (a_alpha/alpha!) d^alpha with the Levy-Khinchin
// coefficients of the triplet, tabulated up to the requested order.
inline ConstOperator synth_generator(const LevyTriplet& trip, int order) {
    if (order < 2) throw std::invalid_argument("generator order must be >= 2");
    const int n = trip.dimension();
    ConstOperator a(n, order);
    const MonomialBasis basis(n, order);
    for (const Exponent& alpha : basis.exponents()) {
        const int o = alpha.order();
        if (o == 0) continue;
        Rational coeff = 0;
        if (o == 1) {
            int i = 0;
            while (alpha[i] == 0) ++i;
            coeff = trip.drift()[static_cast<std::size_t>(i)];
            for (const auto& atom : trip.atoms())
                if (detail::large_atom(atom)) coeff += detail::atom_power(atom, alpha);
        } else {
            if (o == 2) {
                // alpha = e_i + e_j
                std::vector<int> idx;
                for (int v = 0; v < n; ++v)
                    for (int r = 0; r < alpha[v]; ++r) idx.push_back(v);
                coeff = trip.sigma_at(idx[0], idx[1]);
            }
            for (const auto& atom : trip.atoms()) coeff += detail::atom_power(atom, alpha);
        }
        a.add_coefficient(alpha, coeff / Rational(factorial(alpha)));
    }
    return a;
}

// exp(tA) f for t >= 0, exact in rationals.
inline Polynomial evolve(const LevyTriplet& trip, const Rational& t, const Polynomial& f) {
    if (t < 0) throw NegativeTime("evolution requires t >= 0");
    if (f.dimension() != trip.dimension())
        throw DimensionMismatch("operand dimension differs from triplet");
    const int order = std::max(2, f.degree().is_finite() ? f.degree().value() : 0);
    ConstOperator a = synth_generator(trip, order);
    a *= t;
    return exp_dc(a, order).apply(f);
}

struct SweepResult {
    enum class Status { NoViolationFound, Violation };
    Status status = Status::NoViolationFound;
    Rational t = 0;  // the failing time on Violation
    std::optional<ViolationCertificate> certificate;
    bool warnings = false;
};

// Sweeps exp(tA) over the time grid, testing each against the truncated
// moment conditions; the first violation is returned with its time.
inline SweepResult refute_generator(const ConstOperator& a, const KSpec& k,
                                    const std::vector<Rational>& t_grid,
                                    const std::vector<std::vector<Rational>>& y_grid, int d,
                                    double tol = 1e-9) {
    if (a.kind() != OperatorKind::AlgebraElement)
        throw NotAlgebraElement("sweep requires a generator with zero constant term");
    if (2 * d > a.max_order())
        throw DegreeBudgetExceeded("test order 2d exceeds the generator's stored order");
    for (const auto& t : t_grid)
        if (t <= 0) throw std::invalid_argument("sweep times must be positive");

    SweepResult result;
    for (const auto& t : t_grid) {
        const auto report = preserver_test(to_diff_operator(exp_dc(a * t)), k, y_grid, d, tol);
        result.warnings = result.warnings || report.warnings;
        if (report.status == PreserverReport::Status::Violation) {
            result.status = SweepResult::Status::Violation;
            result.t = t;
            result.certificate = report.certificate;
            return result;
        }
    }
    return result;
}

// Same sweep for a degree-preserving polynomial-coefficient generator:
// exp(tA) is computed blockwise on the monomials of degree <= 2d (a float
// kernel), its canonical table recovered, and the preserver test run on that.
inline SweepResult refute_poly_generator(const DiffOperator& a, const KSpec& k,
                                         const std::vector<Rational>& t_grid,
                                         const std::vector<std::vector<Rational>>& y_grid, int d,
                                         double tol = 1e-9) {
    if (!is_degree_preserving(a))
        throw NotDegreePreserving("sweep requires deg q_alpha <= |alpha| for every entry");
    if (2 * d > a.max_order())
        throw DegreeBudgetExceeded("test order 2d exceeds the generator's stored order");
    for (const auto& t : t_grid)
        if (t <= 0) throw std::invalid_argument("sweep times must be positive");

    const int n = a.dimension();
    const MonomialBasis block(n, 2 * d);
    std::vector<Polynomial> basis;
    basis.reserve(block.size());
    for (const Exponent& e : block.exponents()) basis.push_back(Polynomial::monomial(e, 1));
    const Eigen::MatrixXd m = to_eigen(restrict_matrix(a, basis));

    SweepResult result;
    for (const auto& t : t_grid) {
        const Eigen::MatrixXd e = expm(to_double(t) * m).value;
        std::function<PolynomialD(const Exponent&)> action = [&](const Exponent& alpha) {
            const auto j = static_cast<Eigen::Index>(block.rank(alpha));
            PolynomialD img(n);
            for (Eigen::Index i = 0; i < e.rows(); ++i)
                if (e(i, j) != 0.0) img.add_term(block[static_cast<std::size_t>(i)], e(i, j));
            return img;
        };
        const DiffOperatorD evolved = canonical_from_action<double>(action, n, 2 * d);
        const auto report = preserver_test(evolved, k, y_grid, d, tol);
        result.warnings = result.warnings || report.warnings;
        if (report.status == PreserverReport::Status::Violation) {
            result.status = SweepResult::Status::Violation;
            result.t = t;
            result.certificate = report.certificate;
            return result;
        }
    }
    return result;
}

}  // namespace pospres
