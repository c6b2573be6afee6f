#pragma once

// Truncated moment conditions for the positivity-preserver test: at a base
// point y the sequence s_alpha = alpha! q_alpha(y) must be a (K-y)-moment
// sequence for T to preserve Pos(K). Only the necessary PSD conditions on the
// moment matrix (and the Stieltjes/Hausdorff localizations for half-lines and
// intervals) are checked; a failure is turned into a witness polynomial f >= 0
// on K with (Tf)(y) < 0, re-verified before a certificate is issued. A pass is
// never a proof.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pospres/diff_operator.hpp"
#include "pospres/errors.hpp"
#include "pospres/exponent.hpp"
#include "pospres/parallel.hpp"
#include "pospres/polynomial.hpp"

namespace pospres {

enum class KKind { FullSpace, HalfLine, Interval };

// Supported closed sets K: all of R^n, the half-line [0,inf), or an interval
// [a, b] (the last two in one variable).
class KSpec {
public:
    static KSpec full_space() { return KSpec(KKind::FullSpace, 0, 0); }
    static KSpec half_line() { return KSpec(KKind::HalfLine, 0, 0); }
    static KSpec interval(const Rational& a, const Rational& b) {
        if (!(a < b)) throw std::invalid_argument("interval requires a < b");
        return KSpec(KKind::Interval, a, b);
    }

    KKind kind() const { return kind_; }
    const Rational& lower() const { return a_; }
    const Rational& upper() const { return b_; }

    bool contains(const std::vector<Rational>& y) const {
        switch (kind_) {
            case KKind::FullSpace:
                return true;
            case KKind::HalfLine:
                return y.size() == 1 && y[0] >= 0;
            case KKind::Interval:
                return y.size() == 1 && a_ <= y[0] && y[0] <= b_;
        }
        return false;
    }

    std::string str() const {
        switch (kind_) {
            case KKind::FullSpace:
                return "R^n";
            case KKind::HalfLine:
                return "[0,inf)";
            case KKind::Interval:
                return "[" + a_.str() + "," + b_.str() + "]";
        }
        return "";
    }

private:
    KSpec(KKind k, Rational a, Rational b) : kind_(k), a_(std::move(a)), b_(std::move(b)) {}
    KKind kind_;
    Rational a_, b_;
};

// Dense values s_alpha for |alpha| <= order.
template <class C>
class BasicMomentSequence {
public:
    BasicMomentSequence(int n, int order) : n_(n), order_(order) {
        if (n < 1) throw std::invalid_argument("sequence dimension must be >= 1");
        if (order < 0) throw std::invalid_argument("sequence order must be >= 0");
        const MonomialBasis basis(n, order);
        for (const Exponent& a : basis.exponents()) values_.emplace(a, C(0));
    }

    int dimension() const { return n_; }
    int order() const { return order_; }
    const std::map<Exponent, C>& values() const { return values_; }

    const C& at(const Exponent& a) const {
        auto it = values_.find(a);
        if (it == values_.end()) throw std::invalid_argument("index outside sequence order");
        return it->second;
    }

    void set(const Exponent& a, const C& v) {
        auto it = values_.find(a);
        if (it == values_.end()) throw std::invalid_argument("index outside sequence order");
        it->second = v;
    }

private:
    int n_;
    int order_;
    std::map<Exponent, C> values_;
};

using TruncatedMomentSequence = BasicMomentSequence<Rational>;
using MomentSequenceD = BasicMomentSequence<double>;

// M_d[beta,gamma] = s_{beta+gamma} over monomials |beta| <= d in graded-lex
// order.
template <class C>
Eigen::MatrixXd moment_matrix(const BasicMomentSequence<C>& s, int d) {
    if (2 * d > s.order()) throw DegreeBudgetExceeded("sequence not dense up to 2d");
    const MonomialBasis rows(s.dimension(), d);
    const auto m = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd out(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i; j < m; ++j) {
            const double v = CoeffTraits<C>::to_double(
                s.at(rows[static_cast<std::size_t>(i)] + rows[static_cast<std::size_t>(j)]));
            out(i, j) = v;
            out(j, i) = v;
        }
    return out;
}

enum class FailedMatrixKind { MomentMatrix, LowerLocalizer, UpperLocalizer };

struct NecessaryOutcome {
    bool passed = true;
    bool borderline = false;       // smallest eigenvalue in [-tol, 0)
    double min_eigenvalue = 0.0;   // most negative across all checked matrices
    FailedMatrixKind failed_kind = FailedMatrixKind::MomentMatrix;
    PolynomialD direction;         // unit eigendirection of the failing matrix
    NecessaryOutcome() : direction(1) {}
};

namespace detail {

// Localizing matrix for the linear factor g(u) = g1*u + g0 over monomials of
// degree <= d-1 (univariate): L[i,j] = g1 * s_{i+j+1} + g0 * s_{i+j}.
template <class C>
Eigen::MatrixXd localizing_matrix(const BasicMomentSequence<C>& s, const C& g1, const C& g0,
                                  int d) {
    const auto m = static_cast<Eigen::Index>(d);  // degrees 0..d-1
    Eigen::MatrixXd out(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i; j < m; ++j) {
            const int k = static_cast<int>(i + j);
            const double v = CoeffTraits<C>::to_double(g1 * s.at(Exponent({k + 1})) +
                                                       g0 * s.at(Exponent({k})));
            out(i, j) = v;
            out(j, i) = v;
        }
    return out;
}

struct EigenProbe {
    double min_eigenvalue;
    Eigen::VectorXd direction;  // unit 2-norm, sign-normalized
};

inline EigenProbe min_eigenpair(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    EigenProbe probe;
    probe.min_eigenvalue = solver.eigenvalues()(0);
    probe.direction = solver.eigenvectors().col(0);
    for (Eigen::Index i = 0; i < probe.direction.size(); ++i) {
        if (probe.direction(i) != 0.0) {
            if (probe.direction(i) < 0.0) probe.direction = -probe.direction;
            break;
        }
    }
    return probe;
}

inline PolynomialD vector_to_poly(const Eigen::VectorXd& v, const MonomialBasis& rows) {
    PolynomialD p(rows.dimension());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v(i) != 0.0) p.add_term(rows[static_cast<std::size_t>(i)], v(i));
    return p;
}

// Runs the PSD battery for the conditions of (K - y); localizer offsets are
// expressed in the shifted coordinate u = x - y.
template <class C>
NecessaryOutcome necessary_condition_impl(const BasicMomentSequence<C>& s, const KSpec& k,
                                          const std::vector<Rational>& y, int d,
                                          double threshold) {
    if (threshold <= 0) throw std::invalid_argument("tolerance must be positive");
    if (2 * d > s.order()) throw DegreeBudgetExceeded("sequence not dense up to 2d");
    if (k.kind() != KKind::FullSpace && s.dimension() != 1)
        throw DimensionMismatch("half-line and interval conditions are univariate");

    NecessaryOutcome out;
    out.min_eigenvalue = std::numeric_limits<double>::infinity();

    const MonomialBasis rows(s.dimension(), d);
    const auto record = [&](const Eigen::MatrixXd& m, FailedMatrixKind kind,
                            const MonomialBasis& index) {
        if (out.passed == false) return;  // keep the first failure
        const EigenProbe probe = min_eigenpair(m);
        out.min_eigenvalue = std::min(out.min_eigenvalue, probe.min_eigenvalue);
        if (probe.min_eigenvalue < -threshold) {
            out.passed = false;
            out.failed_kind = kind;
            out.direction = vector_to_poly(probe.direction, index);
        } else if (probe.min_eigenvalue < 0.0) {
            out.borderline = true;
        }
    };

    record(moment_matrix(s, d), FailedMatrixKind::MomentMatrix, rows);

    if (k.kind() != KKind::FullSpace && d >= 1 && out.passed) {
        const MonomialBasis locrows(1, d - 1);
        const Rational y0 = y.empty() ? Rational(0) : y[0];
        const C one = C(1);
        const C neg_one = C(-1);
        if (k.kind() == KKind::HalfLine) {
            // factor x >= 0 on K, i.e. u + y in shifted coordinates
            record(localizing_matrix(s, one, CoeffTraits<C>::from_rational(y0), d),
                   FailedMatrixKind::LowerLocalizer, locrows);
        } else {
            // factors x - a and b - x, i.e. u + (y - a) and (b - y) - u
            record(localizing_matrix(s, one, CoeffTraits<C>::from_rational(y0 - k.lower()), d),
                   FailedMatrixKind::LowerLocalizer, locrows);
            if (out.passed)
                record(localizing_matrix(s, neg_one,
                                         CoeffTraits<C>::from_rational(k.upper() - y0), d),
                       FailedMatrixKind::UpperLocalizer, locrows);
        }
    }

    if (out.min_eigenvalue == std::numeric_limits<double>::infinity()) out.min_eigenvalue = 0.0;
    return out;
}

}  // namespace detail

// Necessary truncated K-moment conditions at the origin (y = 0).
template <class C>
NecessaryOutcome necessary_condition(const BasicMomentSequence<C>& s, const KSpec& k, int d,
                                     double tol = 1e-9) {
    return detail::necessary_condition_impl(s, k, {}, d, tol);
}

// Nonnegativity structure of a witness on K: a plain square, or a linear
// factor (nonnegative on K) times a square.
struct StructureFactor {
    enum class Kind { None, X, XMinusA, BMinusX };
    Kind kind = Kind::None;
    Rational param = 0;  // a for XMinusA, b for BMinusX

    Polynomial to_polynomial() const {
        const Polynomial x = Polynomial::variable(1, 0);
        switch (kind) {
            case Kind::None:
                return Polynomial::constant(1, 1);
            case Kind::X:
                return x;
            case Kind::XMinusA:
                return x - Polynomial::constant(1, param);
            case Kind::BMinusX:
                return Polynomial::constant(1, param) - x;
        }
        return Polynomial::constant(1, 1);
    }

    // the factor is nonnegative on all of K
    bool valid_for(const KSpec& k) const {
        switch (kind) {
            case Kind::None:
                return true;
            case Kind::X:
                return k.kind() == KKind::HalfLine || (k.kind() == KKind::Interval && k.lower() >= 0);
            case Kind::XMinusA:
                return (k.kind() == KKind::Interval && k.lower() >= param) ||
                       (k.kind() == KKind::HalfLine && param <= 0);
            case Kind::BMinusX:
                return k.kind() == KKind::Interval && k.upper() <= param;
        }
        return false;
    }
};

// Refutation certificate: witness = factor(x) * p(x-y)^2 is nonnegative on K
// by construction, yet (T witness)(y) < 0.
struct ViolationCertificate {
    std::vector<Rational> y;
    std::string construction;  // "square" or "localized-square"
    StructureFactor factor;
    Polynomial sqrt_part;  // p, in the shifted coordinate u = x - y
    Polynomial witness;
    bool approx = false;       // value established in float arithmetic only
    Rational value = 0;        // exact (T witness)(y) when !approx
    double value_approx = 0.0;

    ViolationCertificate() : sqrt_part(1), witness(1) {}
};

struct PreserverReport {
    enum class Status { NoViolationFound, Violation };
    Status status = Status::NoViolationFound;
    std::optional<ViolationCertificate> certificate;
    bool warnings = false;         // borderline eigenvalue or rejected marginal failure
    double min_eigenvalue = 0.0;   // most binding value across the grid
};

// Reproducible default base-point grids: the integer cross {-2..2}^n for R^n,
// nine equispaced rational points otherwise.
inline std::vector<std::vector<Rational>> default_grid(const KSpec& k, int n) {
    std::vector<std::vector<Rational>> grid;
    switch (k.kind()) {
        case KKind::FullSpace: {
            std::vector<int> idx(static_cast<std::size_t>(n), 0);
            for (;;) {
                std::vector<Rational> pt;
                pt.reserve(static_cast<std::size_t>(n));
                for (int v : idx) pt.emplace_back(v - 2);
                grid.push_back(std::move(pt));
                int i = 0;
                while (i < n && idx[static_cast<std::size_t>(i)] == 4) {
                    idx[static_cast<std::size_t>(i)] = 0;
                    ++i;
                }
                if (i == n) break;
                ++idx[static_cast<std::size_t>(i)];
            }
            break;
        }
        case KKind::HalfLine:
            for (int i = 0; i < 9; ++i) grid.push_back({Rational(i, 2)});
            break;
        case KKind::Interval:
            for (int i = 0; i < 9; ++i)
                grid.push_back({k.lower() + Rational(i, 8) * (k.upper() - k.lower())});
            break;
    }
    return grid;
}

namespace detail {

template <class C>
std::vector<C> cast_point(const std::vector<Rational>& y) {
    std::vector<C> out;
    out.reserve(y.size());
    for (const auto& v : y) out.push_back(CoeffTraits<C>::from_rational(v));
    return out;
}

// s_alpha = alpha! * q_alpha(y) for |alpha| <= 2d
template <class C>
BasicMomentSequence<C> frozen_sequence(const BasicDiffOperator<C>& t,
                                       const std::vector<Rational>& y, int d) {
    BasicMomentSequence<C> s(t.dimension(), 2 * d);
    const auto yc = cast_point<C>(y);
    for (const auto& [alpha, q] : t.table()) {
        if (alpha.order() > 2 * d) continue;
        s.set(alpha, CoeffTraits<C>::from_integer(factorial(alpha)) * q.evaluate(yc));
    }
    return s;
}

template <class C>
double sequence_scale(const BasicMomentSequence<C>& s) {
    double m = 1.0;
    for (const auto& [a, v] : s.values()) m = std::max(m, std::abs(CoeffTraits<C>::to_double(v)));
    return m;
}

struct PointResult {
    std::optional<ViolationCertificate> certificate;
    bool warning = false;
    double min_eigenvalue = 0.0;
};

template <class C>
PointResult test_at_point(const BasicDiffOperator<C>& t, const KSpec& k,
                          const std::vector<Rational>& y, int d, double tol) {
    PointResult result;
    const auto s = frozen_sequence(t, y, d);
    // Exact tables get the literal absolute threshold; float pipelines carry
    // magnitude, so their threshold scales with the sequence, and the exact
    // re-verification below is what makes a certificate sound.
    const double threshold = CoeffTraits<C>::exact ? tol : tol * sequence_scale(s);
    const auto outcome = necessary_condition_impl(s, k, y, d, threshold);
    result.min_eigenvalue = outcome.min_eigenvalue;
    if (outcome.passed) {
        result.warning = outcome.borderline;
        return result;
    }

    ViolationCertificate cert;
    cert.y = y;
    switch (outcome.failed_kind) {
        case FailedMatrixKind::MomentMatrix:
            cert.construction = "square";
            cert.factor = StructureFactor{StructureFactor::Kind::None, 0};
            break;
        case FailedMatrixKind::LowerLocalizer:
            cert.construction = "localized-square";
            cert.factor = (k.kind() == KKind::HalfLine)
                              ? StructureFactor{StructureFactor::Kind::X, 0}
                              : StructureFactor{StructureFactor::Kind::XMinusA, k.lower()};
            break;
        case FailedMatrixKind::UpperLocalizer:
            cert.construction = "localized-square";
            cert.factor = StructureFactor{StructureFactor::Kind::BMinusX, k.upper()};
            break;
    }
    cert.sqrt_part = to_exact(outcome.direction);
    std::vector<Rational> neg_y;
    neg_y.reserve(y.size());
    for (const auto& v : y) neg_y.push_back(-v);
    const Polynomial shifted = taylor_shift(cert.sqrt_part, neg_y);  // p(x - y)
    Polynomial factor_poly = cert.factor.kind == StructureFactor::Kind::None
                                 ? Polynomial::constant(t.dimension(), 1)
                                 : cert.factor.to_polynomial();
    cert.witness = factor_poly * shifted * shifted;

    // gate: the certificate must stand on direct application, exact when the
    // operator is exact
    if constexpr (CoeffTraits<C>::exact) {
        const Rational value = t.apply(cert.witness).evaluate(y);
        if (!(value < -Rational(tol))) {
            result.warning = true;  // numerically marginal; not a refutation
            return result;
        }
        cert.value = value;
        cert.value_approx = to_double(value);
        cert.approx = false;
    } else {
        const auto yc = cast_point<C>(y);
        const double value = t.apply(to_double(cert.witness)).evaluate(yc);
        if (!(value < -threshold)) {
            result.warning = true;
            return result;
        }
        cert.value_approx = value;
        cert.approx = true;
    }
    result.certificate = std::move(cert);
    return result;
}

}  // namespace detail

// Tests the frozen sequence of T at every grid point against the truncated
// (K-y)-moment conditions. A Violation carries a verified certificate;
// NoViolationFound only says the necessary conditions passed at this (grid, d).
template <class C>
PreserverReport preserver_test(const BasicDiffOperator<C>& t, const KSpec& k,
                               const std::vector<std::vector<Rational>>& grid, int d,
                               double tol = 1e-9) {
    if (2 * d > t.max_order())
        throw DegreeBudgetExceeded("test order 2d exceeds the operator's stored order");
    if (k.kind() != KKind::FullSpace && t.dimension() != 1)
        throw DimensionMismatch("half-line and interval tests are univariate");
    for (const auto& y : grid) {
        if (static_cast<int>(y.size()) != t.dimension())
            throw DimensionMismatch("grid point dimension differs from operator");
        if (!k.contains(y)) throw GridPointOutsideK("grid point lies outside K");
    }

    const auto results = parallel_map(grid, [&](const std::vector<Rational>& y) {
        return detail::test_at_point(t, k, y, d, tol);
    });

    PreserverReport report;
    report.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& r : results) {
        report.warnings = report.warnings || r.warning;
        report.min_eigenvalue = std::min(report.min_eigenvalue, r.min_eigenvalue);
        if (r.certificate && report.status == PreserverReport::Status::NoViolationFound) {
            report.status = PreserverReport::Status::Violation;
            report.certificate = r.certificate;
        }
    }
    if (results.empty()) report.min_eigenvalue = 0.0;
    return report;
}

// Independent re-check of a certificate: (a) the witness has the claimed
// square/localized-square structure with a factor nonnegative on K, and
// (b) (T witness)(y) < 0 by direct application (exact for exact tables).
template <class C>
bool verify_certificate(const BasicDiffOperator<C>& t, const ViolationCertificate& cert,
                        const KSpec& k) {
    if (static_cast<int>(cert.y.size()) != t.dimension()) return false;
    if (!k.contains(cert.y)) return false;
    if (!cert.factor.valid_for(k)) return false;
    if (cert.factor.kind != StructureFactor::Kind::None && t.dimension() != 1) return false;

    std::vector<Rational> neg_y;
    neg_y.reserve(cert.y.size());
    for (const auto& v : cert.y) neg_y.push_back(-v);
    Polynomial shifted(1);
    Polynomial expected(1);
    try {
        shifted = taylor_shift(cert.sqrt_part, neg_y);
        const Polynomial factor_poly = cert.factor.kind == StructureFactor::Kind::None
                                           ? Polynomial::constant(t.dimension(), 1)
                                           : cert.factor.to_polynomial();
        expected = factor_poly * shifted * shifted;
    } catch (const std::exception&) {
        return false;
    }
    if (expected != cert.witness) return false;

    try {
        if constexpr (CoeffTraits<C>::exact) {
            return t.apply(cert.witness).evaluate(cert.y) < 0;
        } else {
            const auto yc = detail::cast_point<C>(cert.y);
            return t.apply(to_double(cert.witness)).evaluate(yc) < 0.0;
        }
    } catch (const std::exception&) {
        return false;
    }
}

// Deterministic sample of K-points for smoke-testing witness nonnegativity.
inline std::vector<std::vector<double>> sample_k_points(const KSpec& k, int n, int count,
                                                        std::uint64_t seed, double radius = 3.0) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        std::vector<double> p(static_cast<std::size_t>(n));
        switch (k.kind()) {
            case KKind::FullSpace: {
                std::uniform_real_distribution<double> dist(-radius, radius);
                for (auto& c : p) c = dist(rng);
                break;
            }
            case KKind::HalfLine: {
                std::uniform_real_distribution<double> dist(0.0, radius);
                for (auto& c : p) c = dist(rng);
                break;
            }
            case KKind::Interval: {
                std::uniform_real_distribution<double> dist(to_double(k.lower()),
                                                            to_double(k.upper()));
                for (auto& c : p) c = dist(rng);
                break;
            }
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

}  // namespace pospres
