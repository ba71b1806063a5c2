#include "doctest.h"

#include <sstream>

#include "symsq/cli_report.hpp"
#include "symsq/errors.hpp"

using namespace symsq;

namespace {

int cli(std::vector<std::string> args, std::string& out, std::string& err)
{
    args.insert(args.begin(), "symsq_cli");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream o, e;
    int rc = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    out = o.str();
    err = e.str();
    return rc;
}

std::string data(const std::string& name)
{
    return std::string(SYMSQ_TEST_DATA) + "/" + name;
}

std::string input_error(const std::string& json)
{
    try {
        parse_record(ojson::parse(json));
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("special prime 7: local exponent 2, global conductor 49")
{
    FullReport r = run_report(parse_record_file(data("special_p7.json")));
    REQUIRE(r.primes.size() == 1);
    CHECK(r.primes[0].conductor.exponent == 2);
    CHECK(r.conductor.global == 49);
    CHECK(r.conductor.consistent());
    REQUIRE(r.primes[0].variation);
    CHECK(r.primes[0].variation->match);
    CHECK_FALSE(r.unsupported);
}

TEST_CASE("principal p=5, N=C=2: eps = -a_p^2/5")
{
    FullReport r = run_report(parse_record_file(data("principal_p5.json")));
    const VariationReport& v = *r.primes[0].variation;
    CHECK(v.match);
    ScaledAlgebraic a = ScaledAlgebraic::symbol("a_p");
    CHECK(v.eps == ScaledAlgebraic(mpq_class(-1, 5)) * a * a);
    REQUIRE(v.stated_matches);
    CHECK_FALSE(*v.stated_matches);
    CHECK(r.conductor.global == 625);
}

TEST_CASE("record validation names the field")
{
    CHECK(input_error(R"({"weight": 2, "primes": [{"p": 5, "Np": 1, "Cp": 2, "type": "principal",
        "nebentypus": {"exponent": 1}}]})")
              .find("$.primes[0].Cp") != std::string::npos);
    CHECK(input_error(R"({"weight": 2, "primes": [{"p": 3, "Np": 2, "Cp": 0, "type": "supercuspidal",
        "supercuspidal": {"K": {"kind": "unramified"}, "kappa": {"conductor": 1, "table": [[1, 0, 1, 8]]}}}]})")
              .find("$.primes[0].supercuspidal.kappa") != std::string::npos);
    CHECK(input_error(R"({"weight": 2, "primes": [{"p": 6, "Np": 1, "Cp": 0, "type": "special"}]})")
              .find("$.primes[0].p") != std::string::npos);
    CHECK(input_error(R"({"weight": 2, "level": 50, "primes": [{"p": 7, "Np": 1, "Cp": 0, "type": "special"}]})")
              .find("$.level") != std::string::npos);
    CHECK(input_error(R"({"weight": 2, "primes": [{"p": 7, "Np": 1, "Cp": 0, "type": "steinberg"}]})")
              .find("$.primes[0].type") != std::string::npos);
    CHECK(input_error(R"({"weight": 2, "primes": [{"p": 7, "Np": 1, "Cp": 0, "type": "special"},
        {"p": 7, "Np": 1, "Cp": 0, "type": "special"}]})")
              .find("listed twice") != std::string::npos);
    CHECK(input_error(R"({"primes": []})").find("$.weight") != std::string::npos);
    CHECK(input_error(R"({"weight": 2, "primes": [{"p": 3, "Np": 2, "Cp": 0, "type": "supercuspidal",
        "supercuspidal": {"K": {"kind": "ramified", "square_class": "unramified"},
        "kappa": {"conductor": 1, "exponents": [2]}}}]})")
              .find("$.primes[0].supercuspidal.K.kind") != std::string::npos);
}

TEST_CASE("kappa conductor must match its declaration")
{
    std::string e = input_error(R"({"weight": 2, "primes": [{"p": 3, "Np": 2, "Cp": 0, "type": "supercuspidal",
        "supercuspidal": {"K": {"kind": "unramified"}, "kappa": {"conductor": 2, "exponents": [2]}}}]})");
    CHECK_FALSE(e.empty());
}

TEST_CASE("ap accepts cyclotomic scalars with p-powers")
{
    NewformRecord r = parse_record(ojson::parse(R"({"weight": 4, "primes": [{"p": 5, "Np": 2, "Cp": 2,
        "type": "principal", "nebentypus": {"exponent": 1},
        "ap": {"num": 3, "den": 2, "cyclotomic": [1, 4], "p_power": "1/2"}}]})"));
    ScaledAlgebraic expect =
        ScaledAlgebraic(mpq_class(3, 2)) * ScaledAlgebraic::root(Turn(1, 4)) * ScaledAlgebraic::p_power(5, mpq_class(1, 2));
    CHECK(r.primes[0].a_p == expect);
    CHECK(r.primes[0].k == 4);
    FullReport fr = run_report(r);
    CHECK(fr.primes[0].variation->match);
}

TEST_CASE("multi-prime record: global conductor is the product of the locals")
{
    NewformRecord r = parse_record(ojson::parse(R"({"weight": 2, "level": 1575, "primes": [
        {"p": 3, "Np": 2, "Cp": 0, "type": "supercuspidal",
         "supercuspidal": {"K": {"kind": "unramified"}, "kappa": {"conductor": 1, "exponents": [2]}}},
        {"p": 5, "Np": 2, "Cp": 2, "type": "principal", "nebentypus": {"exponent": 1}},
        {"p": 7, "Np": 1, "Cp": 1, "type": "principal", "nebentypus": {"exponent": 2}}]})"));
    FullReport fr = run_report(r);
    mpz_class prod = 1;
    for (const PrimeReport& pr : fr.primes) {
        mpz_class t;
        mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(pr.data.p), static_cast<unsigned long>(pr.conductor.exponent));
        prod *= t;
        REQUIRE(pr.variation);
        CHECK(pr.variation->match);
    }
    CHECK(fr.conductor.global == prod);
    ojson j = report_json(fr);
    CHECK(j["primes"].size() == 3);
    for (const auto& p : j["primes"]) {
        CHECK(p["epsilon"].contains("branch"));
        CHECK(p["conductor"].contains("class"));
    }
}

TEST_CASE("cli exit codes")
{
    std::string out, err;
    CHECK(cli({"report", data("special_p7.json"), "--format", "text"}, out, err) == 0);
    CHECK(out.find("global conductor 49") != std::string::npos);
    CHECK(cli({"report", data("principal_p5.json")}, out, err) == 0);
    CHECK(ojson::parse(out)["conductor"]["global"] == "625");
    CHECK(cli({"report", data("bad_cp.json")}, out, err) == 2);
    CHECK(err.find("Cp") != std::string::npos);
    CHECK(cli({"report", data("bad_table.json")}, out, err) == 2);
    CHECK(cli({"report", data("missing.json")}, out, err) == 2);
    CHECK(cli({"report"}, out, err) == 2);
    CHECK(cli({"verify", "--cond-max", "7"}, out, err) == 2);
    CHECK(cli({"gauss", "--p", "4"}, out, err) == 2);
    CHECK(cli({"gauss", "--p", "5", "--r", "2", "--char-order", "5"}, out, err) == 2);
}

TEST_CASE("cli gauss table")
{
    std::string out, err;
    REQUIRE(cli({"gauss", "--p", "7", "--r", "1"}, out, err) == 0);
    ojson j = ojson::parse(out);
    CHECK(j["characters"].size() == 5);
    for (const auto& c : j["characters"]) {
        CHECK(c["abs_squared_is_q"] == true);
        CHECK(c["gross_koblitz"] == true);
    }
    REQUIRE(cli({"gauss", "--p", "3", "--r", "2", "--char-order", "8"}, out, err) == 0);
    j = ojson::parse(out);
    CHECK(j["characters"].size() == 4);
}

TEST_CASE("verify at small caps passes and reports printed refutations")
{
    VerifyOptions o;
    o.primes = {3, 5};
    o.cond_max = 1;
    VerifySummary s = verify(o);
    CHECK(s.ok());
    bool printed_miss = false;
    for (const BranchTally& b : s.branches)
        printed_miss |= b.printed_ok < b.printed_cases;
    CHECK(printed_miss);
    CHECK(verify_json(s)["pass"] == true);
}
