#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "pospres/json_io.hpp"
#include "pospres/pospres.hpp"

using namespace pospres;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(POSPRES_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("pospres_cli_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string file(const std::string& name, const Json& content) const {
        const auto p = path_ / name;
        std::ofstream out(p);
        out << content.dump(2);
        return p.string();
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

Json payload_of(const RunResult& r) {
    const Json envelope = Json::parse(r.out);
    return envelope.at("payload");
}

Json d2_table(const Rational& sign) {
    ConstOperator d2(1, 4);
    d2.add_coefficient(Exponent({2}), sign);
    return to_json(d2);
}

}  // namespace

TEST_CASE("exp subcommand") {
    TempDir dir;
    const auto alg = dir.file("d2.json", d2_table(1));
    const auto r = run_cli("exp --algebra " + alg + " --order 4");
    REQUIRE(r.exit_code == 0);
    const ConstOperator e = const_operator_from_json(payload_of(r).at("operator"));
    CHECK(e.coefficient(Exponent({0})) == 1);
    CHECK(e.coefficient(Exponent({2})) == 1);
    CHECK(e.coefficient(Exponent({4})) == Rational(1, 2));
}

TEST_CASE("log inverts exp") {
    TempDir dir;
    const auto alg = dir.file("d2.json", d2_table(1));
    const auto exp_out = run_cli("exp --algebra " + alg + " --order 4");
    REQUIRE(exp_out.exit_code == 0);
    const auto grp = dir.file("exp.json", payload_of(exp_out).at("operator"));
    const auto r = run_cli("log --group " + grp);
    REQUIRE(r.exit_code == 0);
    const ConstOperator l = const_operator_from_json(payload_of(r).at("operator"));
    CHECK(l == const_operator_from_json(d2_table(1)));
}

TEST_CASE("check verdicts and exit codes") {
    TempDir dir;
    SECTION("identity passes with exit 0") {
        const auto id = dir.file("id.json", to_json(DiffOperator::identity(1, 4)));
        const auto r = run_cli("check --operator " + id + " --K R --order 2");
        CHECK(r.exit_code == 0);
        CHECK(Json::parse(r.out).at("status") == "ok");
    }
    SECTION("backwards heat returns exit 3 and a certificate") {
        const auto op =
            dir.file("expm.json", to_json(to_diff_operator(exp_dc(const_operator_from_json(d2_table(-1))))));
        const auto r = run_cli("check --operator " + op + " --K R --order 1");
        CHECK(r.exit_code == 3);
        const Json envelope = Json::parse(r.out);
        CHECK(envelope.at("status") == "violation");
        const auto cert = certificate_from_json(envelope.at("payload").at("certificate"));
        CHECK(cert.value == -2);

        // the emitted certificate re-verifies through the CLI
        const auto cert_path = dir.file("cert.json", envelope.at("payload").at("certificate"));
        const auto v = run_cli("verify --certificate " + cert_path + " --operator " + op + " --K R");
        CHECK(v.exit_code == 0);
        CHECK(payload_of(v).at("verified") == true);
        CHECK(payload_of(v).at("sampling").at("nonnegative") == true);
    }
    SECTION("malformed input exits 1") {
        const auto bad = dir.file("bad.json", Json{{"n", 1}});
        const auto r = run_cli("check --operator " + bad + " --K R");
        CHECK(r.exit_code == 1);
        CHECK(Json::parse(r.out).at("status") == "error");
    }
    SECTION("unknown K exits 1") {
        const auto id = dir.file("id.json", to_json(DiffOperator::identity(1, 4)));
        const auto r = run_cli("check --operator " + id + " --K lattice");
        CHECK(r.exit_code == 1);
    }
    SECTION("order beyond the stored table exits 2") {
        const auto id = dir.file("id.json", to_json(DiffOperator::identity(1, 4)));
        const auto r = run_cli("check --operator " + id + " --K R --order 3");
        CHECK(r.exit_code == 2);
        CHECK(Json::parse(r.out).at("status") == "budget-exceeded");
    }
}

TEST_CASE("member subcommand") {
    TempDir dir;
    SECTION("euler is a member") {
        DiffOperator euler(1, 12);
        euler.set_coefficient(Exponent({1}), Polynomial::variable(1, 0));
        const auto op = dir.file("euler.json", to_json(euler));
        const auto r = run_cli("member --operator " + op);
        CHECK(r.exit_code == 0);
        const auto verdict = membership_from_json(payload_of(r));
        CHECK(verify_member_certificate(euler, verdict));
    }
    SECTION("degree growth exits 2") {
        DiffOperator grow(1, 12);
        grow.set_coefficient(Exponent({1}), Polynomial::monomial(Exponent({2}), 1));
        const auto op = dir.file("grow.json", to_json(grow));
        const auto r = run_cli("member --operator " + op);
        CHECK(r.exit_code == 2);
        CHECK(Json::parse(r.out).at("status") == "budget-exceeded");
        CHECK(payload_of(r).at("trace").at("degree_reached") == 13);
    }
}

TEST_CASE("synth, evolve and sweep") {
    TempDir dir;
    const auto trip = dir.file(
        "trip.json",
        Json::parse(R"({ "n":1, "Sigma": [["2"]], "b": ["0"], "nu": [] })"));

    SECTION("synth emits the diffusion generator") {
        const auto r = run_cli("synth --triplet " + trip + " --order 4");
        REQUIRE(r.exit_code == 0);
        const ConstOperator a = const_operator_from_json(payload_of(r).at("operator"));
        CHECK(a.coefficient(Exponent({2})) == 1);
    }
    SECTION("evolve applies the heat flow") {
        const auto poly = dir.file("x2.json", to_json(Polynomial::monomial(Exponent({2}), 1)));
        const auto r = run_cli("evolve --triplet " + trip + " --t 1/2 --poly " + poly);
        REQUIRE(r.exit_code == 0);
        const Polynomial g = polynomial_from_json(payload_of(r).at("poly"));
        CHECK(g == Polynomial::monomial(Exponent({2}), 1) + Polynomial::constant(1, 1));
    }
    SECTION("trajectory mode writes csv") {
        const auto poly = dir.file("x2.json", to_json(Polynomial::monomial(Exponent({2}), 1)));
        const auto csv = dir.path("traj.csv");
        const auto r = run_cli("evolve --triplet " + trip + " --poly " + poly +
                               " --tgrid 0,1/2,1 --csv " + csv);
        REQUIRE(r.exit_code == 0);
        CHECK(payload_of(r).at("trajectory").size() == 3);
        std::ifstream in(csv);
        REQUIRE(in.good());
        std::string header;
        std::getline(in, header);
        CHECK(header.rfind("t,", 0) == 0);
    }
    SECTION("sweep refutes the backwards generator and verify re-checks it") {
        const auto gen = dir.file("gen.json", d2_table(-1));
        const auto r = run_cli("sweep --gen " + gen + " --K R --tgrid 1/4,1 --order 1");
        CHECK(r.exit_code == 3);
        const Json payload = payload_of(r);
        CHECK(payload.at("mode") == "const");
        const auto cert_path = dir.file("cert.json", payload.at("certificate"));
        const auto v = run_cli("verify --certificate " + cert_path + " --operator " + gen +
                               " --exp-t " + payload.at("t").get<std::string>());
        CHECK(v.exit_code == 0);
        CHECK(payload_of(v).at("verified") == true);
    }
    SECTION("sweep passes the diffusion generator") {
        const auto gen = dir.file("gen.json", d2_table(1));
        const auto r = run_cli("sweep --gen " + gen + " --K R --tgrid 1/4,1 --order 2");
        CHECK(r.exit_code == 0);
    }
}

TEST_CASE("canon and diag and apply") {
    TempDir dir;
    SECTION("canon recovers the shift table") {
        Json action = Json::array();
        for (int k = 0; k <= 3; ++k) {
            const Polynomial img =
                taylor_shift(Polynomial::monomial(Exponent({k}), 1), {Rational(1)});
            action.push_back({{"alpha", Json::array({k})}, {"image", to_json(img)}});
        }
        const auto path =
            dir.file("action.json", Json{{"n", 1}, {"D", 3}, {"action", action}});
        const auto r = run_cli("canon --action " + path);
        REQUIRE(r.exit_code == 0);
        const DiffOperator t = diff_operator_from_json(payload_of(r).at("operator"));
        CHECK(t.coefficient(Exponent({3})) == Polynomial::constant(1, Rational(1, 6)));
    }
    SECTION("diag converts doubling diagonal to the all-ones coefficients") {
        Json values = Json::array();
        Rational v = 1;
        for (int k = 0; k <= 4; ++k) {
            values.push_back({{"alpha", Json::array({k})}, {"v", v.str()}});
            v *= 2;
        }
        const auto path = dir.file(
            "seq.json", Json{{"n", 1}, {"D", 4}, {"kind", "t"}, {"values", values}});
        const auto r = run_cli("diag --seq " + path + " --to c");
        REQUIRE(r.exit_code == 0);
        const auto back = diagonal_from_json(payload_of(r).at("sequence"));
        for (int k = 0; k <= 4; ++k) CHECK(back.sequence.at(Exponent({k})) == 1);

        const auto r2 = run_cli("diag --seq " + path + " --to operator");
        REQUIRE(r2.exit_code == 0);
        const DiffOperator t = diff_operator_from_json(payload_of(r2).at("operator"));
        const Polynomial x3 = Polynomial::monomial(Exponent({3}), 1);
        CHECK(t.apply(x3) == x3 * Rational(8));
    }
    SECTION("apply routes through the operator") {
        DiffOperator d(1, 4);
        d.set_coefficient(Exponent({1}), Polynomial::constant(1, 1));
        const auto op = dir.file("d.json", to_json(d));
        const auto poly = dir.file("f.json", to_json(Polynomial::monomial(Exponent({2}), 1)));
        const auto r = run_cli("apply --operator " + op + " --poly " + poly);
        REQUIRE(r.exit_code == 0);
        CHECK(polynomial_from_json(payload_of(r).at("poly")) ==
              Polynomial::monomial(Exponent({1}), 2));
    }
}

TEST_CASE("deterministic output") {
    TempDir dir;
    const auto op =
        dir.file("expm.json", to_json(to_diff_operator(exp_dc(const_operator_from_json(d2_table(-1))))));
    const auto a = run_cli("check --operator " + op + " --K R --order 2");
    const auto b = run_cli("check --operator " + op + " --K R --order 2");
    CHECK(a.out == b.out);
    CHECK(a.exit_code == b.exit_code);

    // the thread cap must not change results
    ::setenv("POSPRES_THREADS", "1", 1);
    const auto serial = run_cli("check --operator " + op + " --K R --order 2");
    ::setenv("POSPRES_THREADS", "7", 1);
    const auto wide = run_cli("check --operator " + op + " --K R --order 2");
    ::unsetenv("POSPRES_THREADS");
    CHECK(serial.out == a.out);
    CHECK(wide.out == a.out);
}
