// pospres: batch CLI over the operator toolkit. Every subcommand prints one
// JSON verdict envelope {command, status, payload} on stdout; the status maps
// onto the exit code (ok=0, error=1, budget-exceeded=2, violation=3).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "pospres/json_io.hpp"
#include "pospres/pospres.hpp"

namespace {

using namespace pospres;

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

KSpec parse_k(const std::string& text) {
    if (text == "R") return KSpec::full_space();
    if (text == "halfline") return KSpec::half_line();
    if (text.rfind("interval:", 0) == 0) {
        const std::string rest = text.substr(9);
        const auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw ParseError("interval spec must look like interval:a,b");
        return KSpec::interval(parse_rational(rest.substr(0, comma)),
                               parse_rational(rest.substr(comma + 1)));
    }
    throw ParseError("unknown K spec '" + text + "' (expected R, halfline, or interval:a,b)");
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
    if (out.empty()) throw ParseError("empty rational list");
    return out;
}

std::vector<std::vector<Rational>> load_grid(const std::string& spec, const KSpec& k, int n) {
    if (spec == "auto") return default_grid(k, n);
    return grid_from_json(load_json(spec));
}

// table rows carry "a" for constant tables and "q" for polynomial tables
bool looks_like_const_table(const Json& j) {
    const auto it = j.find("table");
    if (it == j.end() || !it->is_array() || it->empty()) return true;
    return it->front().contains("a");
}

int emit(const std::string& command, const std::string& status, const Json& payload) {
    const Json envelope{{"command", command}, {"status", status}, {"payload", payload}};
    std::cout << envelope.dump(2) << "\n";
    if (status == "ok") return 0;
    if (status == "budget-exceeded") return 2;
    if (status == "violation") return 3;
    return 1;
}

Json sweep_payload(const SweepResult& result, const std::string& mode) {
    Json payload{{"mode", mode}, {"warnings", result.warnings}};
    if (result.status == SweepResult::Status::Violation) {
        payload["t"] = result.t.str();
        payload["certificate"] = to_json(*result.certificate);
    }
    return payload;
}

struct CheckOptions {
    std::string operator_path;
    std::string k_text = "R";
    std::string grid_spec = "auto";
    int order = 2;
    double tol = 1e-9;
};

struct SweepOptions {
    std::string gen_path;
    std::string k_text = "R";
    std::string tgrid = "1/4,1,4";
    std::string ygrid = "auto";
    int order = 2;
    double tol = 1e-9;
};

struct MemberOptions {
    std::string operator_path;
    MembershipBudgets budgets;
};

struct VerifyOptions {
    std::string certificate_path;
    std::string operator_path;
    std::string k_text = "R";
    std::string exp_t;
    int samples = 1000;
    std::uint64_t seed = 0;
};

struct EvolveOptions {
    std::string triplet_path;
    std::string poly_path;
    std::string t_text = "1";
    std::string tgrid;
    std::string csv_path;
};

int run_check(const CheckOptions& opt) {
    const DiffOperator op = diff_operator_from_json(load_json(opt.operator_path));
    const KSpec k = parse_k(opt.k_text);
    const auto grid = load_grid(opt.grid_spec, k, op.dimension());
    const auto report = preserver_test(op, k, grid, opt.order, opt.tol);
    Json payload{{"K", k.str()},
                 {"order", opt.order},
                 {"tol", opt.tol},
                 {"grid_size", grid.size()},
                 {"min_eigenvalue", report.min_eigenvalue},
                 {"warnings", report.warnings}};
    if (report.status == PreserverReport::Status::Violation) {
        payload["certificate"] = to_json(*report.certificate);
        return emit("check", "violation", payload);
    }
    return emit("check", "ok", payload);
}

int run_member(const MemberOptions& opt) {
    const DiffOperator op = diff_operator_from_json(load_json(opt.operator_path));
    const auto verdict = check_in_g(op, opt.budgets);
    Json payload = to_json(verdict);
    payload["budgets"] = {{"seed_degree", opt.budgets.seed_degree},
                          {"degree_budget", opt.budgets.degree_budget},
                          {"iteration_budget", opt.budgets.iteration_budget}};
    if (verdict.tag == MembershipVerdict::Tag::BudgetExceeded)
        return emit("member", "budget-exceeded", payload);
    return emit("member", "ok", payload);
}

int run_sweep(const SweepOptions& opt) {
    const Json gen_json = load_json(opt.gen_path);
    const KSpec k = parse_k(opt.k_text);
    const auto t_grid = parse_rational_list(opt.tgrid);

    if (looks_like_const_table(gen_json)) {
        const ConstOperator gen = const_operator_from_json(gen_json);
        const auto y_grid = load_grid(opt.ygrid, k, gen.dimension());
        const auto result = refute_generator(gen, k, t_grid, y_grid, opt.order, opt.tol);
        Json payload = sweep_payload(result, "const");
        if (result.status == SweepResult::Status::Violation) {
            payload["violated_operator"] = to_json(exp_dc(gen * result.t));
            return emit("sweep", "violation", payload);
        }
        return emit("sweep", "ok", payload);
    }
    const DiffOperator gen = diff_operator_from_json(gen_json);
    const auto y_grid = load_grid(opt.ygrid, k, gen.dimension());
    const auto result = refute_poly_generator(gen, k, t_grid, y_grid, opt.order, opt.tol);
    Json payload = sweep_payload(result, "poly");
    if (result.status == SweepResult::Status::Violation)
        return emit("sweep", "violation", payload);
    return emit("sweep", "ok", payload);
}

int run_verify(const VerifyOptions& opt) {
    const ViolationCertificate cert = certificate_from_json(load_json(opt.certificate_path));
    const KSpec k = parse_k(opt.k_text);
    const Json op_json = load_json(opt.operator_path);

    bool verified = false;
    if (!opt.exp_t.empty()) {
        const Rational t = parse_rational(opt.exp_t);
        if (looks_like_const_table(op_json)) {
            const ConstOperator gen = const_operator_from_json(op_json);
            verified = verify_certificate(to_diff_operator(exp_dc(gen * t)), cert, k);
        } else {
            // degree-preserving polynomial generator: rebuild exp(tA) on the
            // block and verify in float, matching how the sweep produced it
            const DiffOperator gen = diff_operator_from_json(op_json);
            const int block_order = gen.max_order();
            const MonomialBasis block(gen.dimension(), block_order);
            std::vector<Polynomial> basis;
            for (const Exponent& e : block.exponents())
                basis.push_back(Polynomial::monomial(e, 1));
            const Eigen::MatrixXd m = to_eigen(restrict_matrix(gen, basis));
            const Eigen::MatrixXd e = expm(to_double(t) * m).value;
            std::function<PolynomialD(const Exponent&)> action = [&](const Exponent& alpha) {
                const auto j = static_cast<Eigen::Index>(block.rank(alpha));
                PolynomialD img(gen.dimension());
                for (Eigen::Index i = 0; i < e.rows(); ++i)
                    if (e(i, j) != 0.0) img.add_term(block[static_cast<std::size_t>(i)], e(i, j));
                return img;
            };
            verified = verify_certificate(
                canonical_from_action<double>(action, gen.dimension(), block_order), cert, k);
        }
    } else if (looks_like_const_table(op_json)) {
        verified = verify_certificate(to_diff_operator(const_operator_from_json(op_json)), cert, k);
    } else {
        verified = verify_certificate(diff_operator_from_json(op_json), cert, k);
    }

    // smoke check on top of the structural proof: witness sampled over K
    const auto pts = sample_k_points(k, static_cast<int>(cert.y.size()), opt.samples, opt.seed);
    const PolynomialD witness = to_double(cert.witness);
    double min_value = 0.0;
    for (const auto& p : pts) min_value = std::min(min_value, witness.evaluate(p));
    const bool nonnegative = min_value >= -1e-12;

    Json payload{{"verified", verified},
                 {"sampling", {{"samples", opt.samples},
                               {"seed", opt.seed},
                               {"min_value", min_value},
                               {"nonnegative", nonnegative}}}};
    if (!verified || !nonnegative) return emit("verify", "error", payload);
    return emit("verify", "ok", payload);
}

int run_evolve(const EvolveOptions& opt) {
    const LevyTriplet trip = levy_triplet_from_json(load_json(opt.triplet_path));
    const Polynomial f = polynomial_from_json(load_json(opt.poly_path));
    if (opt.tgrid.empty()) {
        const Polynomial g = evolve(trip, parse_rational(opt.t_text), f);
        return emit("evolve", "ok", Json{{"poly", to_json(g)}});
    }
    const auto times = parse_rational_list(opt.tgrid);
    Json rows = Json::array();
    std::vector<std::pair<Rational, Polynomial>> trajectory;
    for (const auto& t : times) {
        Polynomial g = evolve(trip, t, f);
        rows.push_back({{"t", t.str()}, {"poly", to_json(g)}});
        trajectory.emplace_back(t, std::move(g));
    }
    if (!opt.csv_path.empty()) {
        // coefficient trajectories, one row per time, one column per monomial
        std::map<Exponent, std::size_t> columns;
        for (const auto& [t, g] : trajectory)
            for (const auto& [a, c] : g.terms()) columns.emplace(a, 0);
        std::ofstream csv(opt.csv_path);
        if (!csv) throw ParseError("cannot open '" + opt.csv_path + "' for writing");
        csv << "t";
        for (const auto& [a, unused] : columns) {
            csv << ",";
            for (int i = 0; i < a.dimension(); ++i) csv << (i ? "_" : "x") << a[i];
        }
        csv << "\n";
        for (const auto& [t, g] : trajectory) {
            csv << to_double(t);
            for (const auto& [a, unused] : columns) csv << "," << to_double(g.coefficient(a));
            csv << "\n";
        }
    }
    Json payload{{"trajectory", rows}};
    if (!opt.csv_path.empty()) payload["csv"] = opt.csv_path;
    return emit("evolve", "ok", payload);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator calculus for positivity preservers on R[x_1..x_n]"};
    app.require_subcommand(1);
    app.footer(
        "exit codes: 0 ok / no violation, 1 malformed input, 2 budget exceeded,\n"
        "3 violation found (certificate in payload). POSPRES_THREADS caps the\n"
        "worker count of internal sweeps; outputs are deterministic either way.");

    std::string action_path, operator_path, poly_path, seq_path, to_what = "c";
    std::string algebra_path, group_path, triplet_path;
    int order = -1;

    auto* canon = app.add_subcommand("canon", "recover the canonical table from an action table");
    canon->add_option("--action", action_path, "action table JSON (dense on |alpha| <= D)")
        ->required();

    auto* apply_cmd = app.add_subcommand("apply", "apply an operator to a polynomial");
    apply_cmd->add_option("--operator", operator_path, "operator JSON")->required();
    apply_cmd->add_option("--poly", poly_path, "polynomial JSON")->required();

    auto* diag = app.add_subcommand("diag", "diagonal sequence transforms");
    diag->add_option("--seq", seq_path, "sequence JSON with kind t or c")->required();
    diag->add_option("--to", to_what, "target: t, c, or operator")
        ->check(CLI::IsMember({"t", "c", "operator"}));

    auto* exp_cmd = app.add_subcommand("exp", "exponentiate an algebra element");
    exp_cmd->add_option("--algebra", algebra_path, "constant table JSON, zero constant term")
        ->required();
    exp_cmd->add_option("--order", order, "truncation order (default: table order)");

    auto* log_cmd = app.add_subcommand("log", "logarithm of a group element");
    log_cmd->add_option("--group", group_path, "constant table JSON, unit constant term")
        ->required();
    log_cmd->add_option("--order", order, "truncation order (default: table order)");

    MemberOptions member_opt;
    auto* member = app.add_subcommand("member", "search invariant subspaces certifying exp(tA)");
    member->add_option("--operator", member_opt.operator_path, "operator JSON")->required();
    member->add_option("--seed-degree", member_opt.budgets.seed_degree, "orbit seeds up to this degree");
    member->add_option("--degree-budget", member_opt.budgets.degree_budget, "abort orbits past this degree");
    member->add_option("--iter-budget", member_opt.budgets.iteration_budget, "abort orbits past this many iterates");

    CheckOptions check_opt;
    auto* check = app.add_subcommand("check", "truncated moment test of the preserver property");
    check->add_option("--operator", check_opt.operator_path, "operator JSON")->required();
    check->add_option("--K", check_opt.k_text, "R, halfline, or interval:a,b");
    check->add_option("--grid", check_opt.grid_spec, "auto or a grid JSON file");
    check->add_option("--order", check_opt.order, "moment matrix order d");
    check->add_option("--tol", check_opt.tol, "PSD threshold");

    auto* synth = app.add_subcommand("synth", "generator from Levy-Khinchin data");
    synth->add_option("--triplet", triplet_path, "triplet JSON")->required();
    synth->add_option("--order", order, "table order D (>= 2)")->required();

    EvolveOptions evolve_opt;
    auto* evolve_cmd = app.add_subcommand("evolve", "apply exp(tA) of a triplet generator");
    evolve_cmd->add_option("--triplet", evolve_opt.triplet_path, "triplet JSON")->required();
    evolve_cmd->add_option("--poly", evolve_opt.poly_path, "polynomial JSON")->required();
    evolve_cmd->add_option("--t", evolve_opt.t_text, "time, rational >= 0");
    evolve_cmd->add_option("--tgrid", evolve_opt.tgrid, "comma-separated times (trajectory mode)");
    evolve_cmd->add_option("--csv", evolve_opt.csv_path, "write coefficient trajectories as CSV");

    SweepOptions sweep_opt;
    auto* sweep = app.add_subcommand("sweep", "refutation sweep over exp(tA)");
    sweep->add_option("--gen", sweep_opt.gen_path, "generator JSON (constant or polynomial table)")
        ->required();
    sweep->add_option("--K", sweep_opt.k_text, "R, halfline, or interval:a,b");
    sweep->add_option("--tgrid", sweep_opt.tgrid, "comma-separated positive times");
    sweep->add_option("--ygrid", sweep_opt.ygrid, "auto or a grid JSON file");
    sweep->add_option("--order", sweep_opt.order, "moment matrix order d");
    sweep->add_option("--tol", sweep_opt.tol, "PSD threshold");

    VerifyOptions verify_opt;
    auto* verify = app.add_subcommand("verify", "re-verify a violation certificate");
    verify->add_option("--certificate", verify_opt.certificate_path, "certificate JSON")->required();
    verify->add_option("--operator", verify_opt.operator_path, "operator (or generator) JSON")
        ->required();
    verify->add_option("--exp-t", verify_opt.exp_t,
                       "treat the operator as a generator and verify against exp(tA)");
    verify->add_option("--K", verify_opt.k_text, "R, halfline, or interval:a,b");
    verify->add_option("--samples", verify_opt.samples, "witness sample count");
    verify->add_option("--seed", verify_opt.seed, "sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (canon->parsed()) {
            const Json j = load_json(action_path);
            const int n = pospres::detail::int_field(j, "n");
            const int d = pospres::detail::int_field(j, "D");
            std::map<Exponent, Polynomial> images;
            for (const auto& row : pospres::detail::field(j, "action"))
                images.emplace(pospres::detail::exponent_field(pospres::detail::field(row, "alpha"), n),
                               polynomial_from_json(pospres::detail::field(row, "image")));
            std::function<Polynomial(const Exponent&)> action = [&](const Exponent& a) {
                auto it = images.find(a);
                if (it == images.end())
                    throw ParseError("action table is missing x^alpha with |alpha| <= D");
                return it->second;
            };
            return emit("canon", "ok",
                        Json{{"operator", to_json(canonical_from_action<Rational>(action, n, d))}});
        }
        if (apply_cmd->parsed()) {
            const DiffOperator op = diff_operator_from_json(load_json(operator_path));
            const Polynomial f = polynomial_from_json(load_json(poly_path));
            return emit("apply", "ok", Json{{"poly", to_json(op.apply(f))}});
        }
        if (diag->parsed()) {
            const TaggedSequence in = diagonal_from_json(load_json(seq_path));
            if (to_what == "operator") {
                const DiagonalSequence c = in.kind == "c" ? in.sequence : t_to_c(in.sequence);
                return emit("diag", "ok", Json{{"operator", to_json(diagonal_to_canonical(c))}});
            }
            if (to_what == in.kind)
                return emit("diag", "ok", Json{{"sequence", to_json(in.sequence, in.kind)}});
            const DiagonalSequence out =
                to_what == "c" ? t_to_c(in.sequence) : c_to_t(in.sequence);
            return emit("diag", "ok", Json{{"sequence", to_json(out, to_what)}});
        }
        if (exp_cmd->parsed()) {
            const ConstOperator a = const_operator_from_json(load_json(algebra_path));
            return emit("exp", "ok", Json{{"operator", to_json(exp_dc(a, order))}});
        }
        if (log_cmd->parsed()) {
            const ConstOperator g = const_operator_from_json(load_json(group_path));
            return emit("log", "ok", Json{{"operator", to_json(log_dc(g, order))}});
        }
        if (member->parsed()) return run_member(member_opt);
        if (check->parsed()) return run_check(check_opt);
        if (synth->parsed()) {
            const LevyTriplet trip = levy_triplet_from_json(load_json(triplet_path));
            return emit("synth", "ok", Json{{"operator", to_json(synth_generator(trip, order))}});
        }
        if (evolve_cmd->parsed()) return run_evolve(evolve_opt);
        if (sweep->parsed()) return run_sweep(sweep_opt);
        if (verify->parsed()) return run_verify(verify_opt);
        return emit(command, "error", Json{{"message", "unknown subcommand"}});
    } catch (const DegreeBudgetExceeded& e) {
        return emit(command, "budget-exceeded", Json{{"message", e.what()}});
    } catch (const DegreeBudgetExceedsOperatorOrder& e) {
        return emit(command, "budget-exceeded", Json{{"message", e.what()}});
    } catch (const std::exception& e) {
        return emit(command, "error", Json{{"message", e.what()}});
    }
}
