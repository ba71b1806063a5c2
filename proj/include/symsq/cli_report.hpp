#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "symsq/sym2_transfer.hpp"

namespace symsq {

using ojson = nlohmann::ordered_json;

struct NewformRecord {
    int weight = 2;
    std::optional<mpz_class> level;
    std::vector<NewformLocalData> primes;  // sorted by p
    bool minimal = true;
    bool H1 = true;
    bool H2 = true;
};

// Throws InputError naming the offending field path.
NewformRecord parse_record(const ojson& j);
NewformRecord parse_record(std::istream& in);
NewformRecord parse_record_file(const std::string& path);

struct ReportOptions {
    int precision = 12;
};

struct PrimeReport {
    NewformLocalData data;
    std::optional<VariationReport> variation;
    std::string variation_error;  // set when the regime is not covered
    LocalConductor conductor;
    std::optional<GlobalProperty> property;
    std::optional<Classification> classification;
};

struct FullReport {
    int weight = 2;
    std::vector<PrimeReport> primes;
    ConductorReport conductor;
    bool unsupported = false;  // some prime fell outside the covered regimes
};

FullReport run_report(const NewformRecord& r, const ReportOptions& opt = {});
ojson report_json(const FullReport& r);
std::string report_text(const FullReport& r);

struct VerifyOptions {
    std::vector<i64> primes{3, 5, 7};
    int cond_max = 2;
    int precision = 12;
    int per_branch = 12;  // cases per (p, family) before moving on
};

struct BranchTally {
    std::string branch;
    int cases = 0;
    int closed_ok = 0;      // closed form equals the oracle
    int printed_cases = 0;  // cases with a printed value to compare
    int printed_ok = 0;
    std::vector<std::string> failures;
};

struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct VerifySummary {
    std::vector<BranchTally> branches;
    std::vector<CheckResult> checks;
    bool ok() const;
};

// Throws InputError when the caps exceed what the oracle can sum.
VerifySummary verify(const VerifyOptions& opt);
ojson verify_json(const VerifySummary& s);
std::string verify_text(const VerifySummary& s);

// Gauss sums of the characters of F_{p^r}^x, optionally of one order.
ojson gauss_table(i64 p, int r, std::optional<i64> order, int precision);

// Full command line; returns the exit status (0 ok, 1 verification failure,
// 2 input error, 3 unsupported regime).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace symsq
