#pragma once

// JSON formats for every artifact the toolkit reads or writes. All numeric
// inputs are exact rational strings; doubles appear only in outputs and are
// flagged "approx": true.

#include <json.hpp>

#include <string>
#include <vector>

#include "pospres/const_group.hpp"
#include "pospres/diagonal.hpp"
#include "pospres/diff_operator.hpp"
#include "pospres/errors.hpp"
#include "pospres/levy.hpp"
#include "pospres/membership.hpp"
#include "pospres/moment.hpp"
#include "pospres/polynomial.hpp"

namespace pospres {

using Json = nlohmann::json;

namespace detail {

inline const Json& field(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
    return *it;
}

inline int int_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

inline Rational rational_field(const Json& v, const char* what) {
    if (!v.is_string())
        throw ParseError(std::string(what) + " must be an exact rational string");
    return parse_rational(v.get<std::string>());
}

inline Exponent exponent_field(const Json& v, int n) {
    if (!v.is_array()) throw ParseError("'alpha' must be an array of non-negative integers");
    std::vector<int> e;
    e.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number_integer() || x.get<int>() < 0)
            throw ParseError("'alpha' must be an array of non-negative integers");
        e.push_back(x.get<int>());
    }
    if (static_cast<int>(e.size()) != n) throw ParseError("'alpha' length differs from dimension");
    return Exponent(std::move(e));
}

inline Json exponent_to_json(const Exponent& a) {
    Json out = Json::array();
    for (int i = 0; i < a.dimension(); ++i) out.push_back(a[i]);
    return out;
}

}  // namespace detail

// --- polynomials -----------------------------------------------------------

inline Json to_json(const Polynomial& f) {
    Json terms = Json::array();
    for (const auto& [a, c] : f.terms())
        terms.push_back({{"alpha", detail::exponent_to_json(a)}, {"coeff", c.str()}});
    return {{"n", f.dimension()}, {"terms", terms}};
}

inline Json to_json(const PolynomialD& f) {
    Json terms = Json::array();
    for (const auto& [a, c] : f.terms())
        terms.push_back({{"alpha", detail::exponent_to_json(a)}, {"coeff", c}});
    return {{"n", f.dimension()}, {"terms", terms}, {"approx", true}};
}

inline Polynomial polynomial_from_json(const Json& j) {
    const int n = detail::int_field(j, "n");
    if (n < 1) throw ParseError("polynomial dimension must be >= 1");
    Polynomial f(n);
    const Json& terms = detail::field(j, "terms");
    if (!terms.is_array()) throw ParseError("'terms' must be an array");
    for (const auto& t : terms)
        f.add_term(detail::exponent_field(detail::field(t, "alpha"), n),
                   detail::rational_field(detail::field(t, "coeff"), "'coeff'"));
    return f;
}

// --- operators --------------------------------------------------------------

inline Json to_json(const DiffOperator& t) {
    Json table = Json::array();
    for (const auto& [a, q] : t.table())
        table.push_back({{"alpha", detail::exponent_to_json(a)}, {"q", to_json(q)}});
    return {{"n", t.dimension()}, {"D", t.max_order()}, {"table", table}};
}

inline Json to_json(const DiffOperatorD& t) {
    Json table = Json::array();
    for (const auto& [a, q] : t.table())
        table.push_back({{"alpha", detail::exponent_to_json(a)}, {"q", to_json(q)}});
    return {{"n", t.dimension()}, {"D", t.max_order()}, {"table", table}, {"approx", true}};
}

inline DiffOperator diff_operator_from_json(const Json& j) {
    const int n = detail::int_field(j, "n");
    const int order = detail::int_field(j, "D");
    DiffOperator t(n, order);
    const Json& table = detail::field(j, "table");
    if (!table.is_array()) throw ParseError("'table' must be an array");
    for (const auto& row : table) {
        const Exponent a = detail::exponent_field(detail::field(row, "alpha"), n);
        const Polynomial q = polynomial_from_json(detail::field(row, "q"));
        Polynomial sum = t.coefficient(a) + q;
        t.set_coefficient(a, sum);
    }
    return t;
}

inline Json to_json(const ConstOperator& t) {
    Json table = Json::array();
    for (const auto& [a, c] : t.table())
        table.push_back({{"alpha", detail::exponent_to_json(a)}, {"a", c.str()}});
    return {{"n", t.dimension()}, {"D", t.max_order()}, {"table", table}};
}

inline ConstOperator const_operator_from_json(const Json& j) {
    const int n = detail::int_field(j, "n");
    const int order = detail::int_field(j, "D");
    ConstOperator t(n, order);
    const Json& table = detail::field(j, "table");
    if (!table.is_array()) throw ParseError("'table' must be an array");
    for (const auto& row : table)
        t.add_coefficient(detail::exponent_field(detail::field(row, "alpha"), n),
                          detail::rational_field(detail::field(row, "a"), "'a'"));
    return t;
}

// --- diagonal sequences -----------------------------------------------------

inline Json to_json(const DiagonalSequence& s, const std::string& kind) {
    Json values = Json::array();
    for (const auto& [a, v] : s.values())
        values.push_back({{"alpha", detail::exponent_to_json(a)}, {"v", v.str()}});
    return {{"n", s.dimension()}, {"D", s.order()}, {"kind", kind}, {"values", values}};
}

struct TaggedSequence {
    DiagonalSequence sequence;
    std::string kind;  // "t" or "c"
};

inline TaggedSequence diagonal_from_json(const Json& j) {
    const int n = detail::int_field(j, "n");
    const int order = detail::int_field(j, "D");
    const Json& kind = detail::field(j, "kind");
    if (!kind.is_string() || (kind != "t" && kind != "c"))
        throw ParseError("'kind' must be \"t\" or \"c\"");
    DiagonalSequence s(n, order);
    const Json& values = detail::field(j, "values");
    if (!values.is_array()) throw ParseError("'values' must be an array");
    for (const auto& row : values) {
        const Exponent a = detail::exponent_field(detail::field(row, "alpha"), n);
        if (a.order() > order) throw ParseError("sequence entry order exceeds D");
        s.set(a, detail::rational_field(detail::field(row, "v"), "'v'"));
    }
    return {std::move(s), kind.get<std::string>()};
}

// --- Levy triplets ----------------------------------------------------------

inline Json to_json(const LevyTriplet& trip) {
    Json sigma = Json::array();
    for (int i = 0; i < trip.dimension(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < trip.dimension(); ++j) row.push_back(trip.sigma_at(i, j).str());
        sigma.push_back(row);
    }
    Json drift = Json::array();
    for (const auto& v : trip.drift()) drift.push_back(v.str());
    Json nu = Json::array();
    for (const auto& atom : trip.atoms()) {
        Json z = Json::array();
        for (const auto& c : atom.z) z.push_back(c.str());
        nu.push_back({{"z", z}, {"w", atom.w.str()}});
    }
    return {{"n", trip.dimension()}, {"Sigma", sigma}, {"b", drift}, {"nu", nu}};
}

inline LevyTriplet levy_triplet_from_json(const Json& j) {
    const int n = detail::int_field(j, "n");
    const Json& sigma = detail::field(j, "Sigma");
    if (!sigma.is_array()) throw ParseError("'Sigma' must be an array of rows");
    RationalMatrix m;
    for (const auto& row : sigma) {
        if (!row.is_array()) throw ParseError("'Sigma' must be an array of rows");
        std::vector<Rational> r;
        for (const auto& v : row) r.push_back(detail::rational_field(v, "Sigma entry"));
        m.push_back(std::move(r));
    }
    std::vector<Rational> drift;
    for (const auto& v : detail::field(j, "b")) drift.push_back(detail::rational_field(v, "'b' entry"));
    std::vector<LevyAtom> atoms;
    for (const auto& row : detail::field(j, "nu")) {
        LevyAtom atom;
        for (const auto& v : detail::field(row, "z"))
            atom.z.push_back(detail::rational_field(v, "atom coordinate"));
        atom.w = detail::rational_field(detail::field(row, "w"), "atom weight");
        atoms.push_back(std::move(atom));
    }
    return LevyTriplet(n, std::move(m), std::move(drift), std::move(atoms));
}

// --- points and grids -------------------------------------------------------

inline Json to_json(const std::vector<Rational>& point) {
    Json out = Json::array();
    for (const auto& v : point) out.push_back(v.str());
    return out;
}

inline std::vector<Rational> point_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("a point must be an array of rational strings");
    std::vector<Rational> p;
    for (const auto& v : j) p.push_back(detail::rational_field(v, "point coordinate"));
    return p;
}

inline std::vector<std::vector<Rational>> grid_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("a grid must be an array of points");
    std::vector<std::vector<Rational>> g;
    for (const auto& p : j) g.push_back(point_from_json(p));
    return g;
}

// --- certificates -----------------------------------------------------------

inline Json to_json(const StructureFactor& f) {
    switch (f.kind) {
        case StructureFactor::Kind::None:
            return {{"kind", "none"}};
        case StructureFactor::Kind::X:
            return {{"kind", "x"}};
        case StructureFactor::Kind::XMinusA:
            return {{"kind", "x-a"}, {"a", f.param.str()}};
        case StructureFactor::Kind::BMinusX:
            return {{"kind", "b-x"}, {"b", f.param.str()}};
    }
    return {{"kind", "none"}};
}

inline StructureFactor structure_factor_from_json(const Json& j) {
    const Json& kind = detail::field(j, "kind");
    if (kind == "none") return {StructureFactor::Kind::None, 0};
    if (kind == "x") return {StructureFactor::Kind::X, 0};
    if (kind == "x-a")
        return {StructureFactor::Kind::XMinusA, detail::rational_field(detail::field(j, "a"), "'a'")};
    if (kind == "b-x")
        return {StructureFactor::Kind::BMinusX, detail::rational_field(detail::field(j, "b"), "'b'")};
    throw ParseError("unknown structure factor kind");
}

inline Json to_json(const ViolationCertificate& cert) {
    Json out{{"y", to_json(cert.y)},
             {"construction", cert.construction},
             {"factor", to_json(cert.factor)},
             {"sqrt", to_json(cert.sqrt_part)},
             {"witness", to_json(cert.witness)},
             {"approx", cert.approx},
             {"value_approx", cert.value_approx}};
    if (!cert.approx) out["value"] = cert.value.str();
    return out;
}

inline ViolationCertificate certificate_from_json(const Json& j) {
    ViolationCertificate cert;
    cert.y = point_from_json(detail::field(j, "y"));
    const Json& construction = detail::field(j, "construction");
    if (!construction.is_string()) throw ParseError("'construction' must be a string");
    cert.construction = construction.get<std::string>();
    cert.factor = structure_factor_from_json(detail::field(j, "factor"));
    cert.sqrt_part = polynomial_from_json(detail::field(j, "sqrt"));
    cert.witness = polynomial_from_json(detail::field(j, "witness"));
    cert.approx = detail::field(j, "approx").get<bool>();
    if (!cert.approx) cert.value = detail::rational_field(detail::field(j, "value"), "'value'");
    cert.value_approx = detail::field(j, "value_approx").get<double>();
    return cert;
}

// --- membership verdicts ----------------------------------------------------

inline Json to_json(const RationalMatrix& m) {
    Json rows = Json::array();
    for (const auto& r : m) {
        Json row = Json::array();
        for (const auto& v : r) row.push_back(v.str());
        rows.push_back(row);
    }
    return rows;
}

inline Json to_json(const MembershipVerdict& v) {
    if (v.tag == MembershipVerdict::Tag::BudgetExceeded) {
        Json trace{{"seed", detail::exponent_to_json(v.trace->seed)},
                   {"iterates", v.trace->iterates},
                   {"degree_reached", v.trace->degree_reached},
                   {"degrees", v.trace->degrees}};
        return {{"verdict", "budget-exceeded"}, {"trace", trace}};
    }
    Json filtration = Json::array();
    for (const auto& cert : v.filtration) {
        Json basis = Json::array();
        for (const auto& b : cert.basis) basis.push_back(to_json(b));
        filtration.push_back({{"dim", cert.basis.size()},
                              {"basis", basis},
                              {"matrix", to_json(cert.matrix)}});
    }
    return {{"verdict", "member"}, {"filtration", filtration}};
}

inline MembershipVerdict membership_from_json(const Json& j) {
    MembershipVerdict v;
    const Json& verdict = detail::field(j, "verdict");
    if (verdict == "budget-exceeded") {
        v.tag = MembershipVerdict::Tag::BudgetExceeded;
        const Json& trace = detail::field(j, "trace");
        OrbitTrace t;
        std::vector<int> seed;
        for (const auto& x : detail::field(trace, "seed")) seed.push_back(x.get<int>());
        t.seed = Exponent(std::move(seed));
        t.iterates = detail::int_field(trace, "iterates");
        t.degree_reached = detail::int_field(trace, "degree_reached");
        for (const auto& x : detail::field(trace, "degrees")) t.degrees.push_back(x.get<int>());
        v.trace = std::move(t);
        return v;
    }
    if (verdict != "member") throw ParseError("unknown membership verdict");
    v.tag = MembershipVerdict::Tag::Member;
    for (const auto& block : detail::field(j, "filtration")) {
        SubspaceCertificate cert;
        for (const auto& b : detail::field(block, "basis"))
            cert.basis.push_back(polynomial_from_json(b));
        for (const auto& row : detail::field(block, "matrix")) {
            std::vector<Rational> r;
            for (const auto& x : row) r.push_back(detail::rational_field(x, "matrix entry"));
            cert.matrix.push_back(std::move(r));
        }
        v.filtration.push_back(std::move(cert));
    }
    return v;
}

}  // namespace pospres
