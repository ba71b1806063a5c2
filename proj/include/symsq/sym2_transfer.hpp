#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "symsq/epsilon_engine.hpp"
#include "symsq/padic_chars.hpp"
#include "symsq/quadratic_ext.hpp"
#include "symsq/scaled.hpp"

namespace symsq {

enum class LocalType { Principal, Special, Supercuspidal };
std::string to_string(LocalType t);
LocalType parse_local_type(const std::string& s);

struct SupercuspidalData {
    QuadExt K;
    KChar kappa;
    std::optional<ScaledAlgebraic> kappa_sigma2;
};

// Local data of a newform at p. omega is the central character omega_p
// (inverse of the nebentypus on units); for supercuspidal data it is derived
// from kappa when absent.
struct NewformLocalData {
    i64 p = 0;
    int Np = 0;
    int Cp = 0;
    int k = 2;
    ScaledAlgebraic a_p = ScaledAlgebraic::symbol("a_p");
    std::optional<MultChar> omega;
    LocalType type = LocalType::Principal;
    std::optional<SupercuspidalData> sc;
    bool minimal = true;
    bool H1 = true;
    bool H2 = true;

    // Throws InputError on an inconsistent (Np, Cp, type) triple or data.
    void validate() const;
    MultChar central_character() const;
};

// Central character of conductor c with a symbolic value at p.
MultChar default_central_character(i64 p, int c);

using Mat2 = std::array<std::array<i64, 2>, 2>;
using Mat3 = std::array<std::array<i64, 3>, 3>;

// d/dt sym^2(exp(tN)) at t = 0 in the basis x^2, xy, y^2.
Mat3 sym2_derivative(const Mat2& N);
// sym2_derivative conjugated by diag(1, 1, 2); the standard N goes to J_3.
Mat3 sym2_nilpotent(const Mat2& N);

struct LocalParameter {
    LocalType type = LocalType::Principal;
    WDRep rho;  // principal and special
    std::optional<SupercuspidalData> induced;
};
LocalParameter build_local_parameter(const NewformLocalData& d);

enum class Sym2Kind { Principal3, Special3, InducedPlusTheta, Split3 };
enum class Sym2Type { TypeI, TypeII, NotApplicable };
std::string to_string(Sym2Kind k);
std::string to_string(Sym2Type t);

struct ThetaCandidate {
    MultChar theta;
    std::string label;  // "omega_p" or "omega_p*omega_K"
    bool forced = false;  // the one matching the determinant of sym^2
};

struct Sym2Parameter {
    Sym2Kind kind = Sym2Kind::Principal3;
    std::vector<MultChar> chars;  // the three characters, or phi and phi*omega_K
    std::vector<std::vector<int>> N;
    std::optional<KChar> kappa2;
    std::vector<ThetaCandidate> thetas;  // forced candidate first
    Sym2Type type = Sym2Type::NotApplicable;
};
Sym2Parameter sym2_parameter(const LocalParameter& rho, const NewformLocalData& d);

struct TypeClassification {
    Sym2Type type = Sym2Type::NotApplicable;
    std::vector<std::string> notes;
};
// Throws DomainError when Type II data sit in a regime where Type II cannot
// occur.
TypeClassification classify_type(const Sym2Parameter& s, const NewformLocalData& d);

// (q/p)^val for the unramified primes q != p.
ScaledAlgebraic variation_q(i64 q, i64 p, int val_q);

// Quadratic character ramified only at p used for the twist.
MultChar twisting_character(i64 p);
// The additive character each regime works with.
AddChar variation_add_char(const NewformLocalData& d);

// eps(alpha chi, phi) / eps(alpha, phi) by closed rules: unramified twist,
// Deligne's formula, tame Gauss sums; small wild cases fall back to the
// defining sums and say so in the rule.
struct RuleValue {
    ScaledAlgebraic value;
    std::string rule;
};
RuleValue twist_ratio(const MultChar& alpha, const MultChar& chi, const AddChar& phi);
RuleValue twist_ratio(const KChar& alpha, const KChar& chi, const AddCharK& phiK);
// The same ratio from the defining sums.
ScaledAlgebraic twist_ratio_oracle(const MultChar& alpha, const MultChar& chi, const AddChar& phi);
ScaledAlgebraic twist_ratio_oracle(const KChar& alpha, const KChar& chi, const AddCharK& phiK);

// eps(alpha, phi) for a(alpha) = 1 and n(phi) = -1 via a Gauss sum over F_p.
ScaledAlgebraic tame_epsilon(const MultChar& alpha, const AddChar& phi);
// The same for K unramified over F_{p^2}.
ScaledAlgebraic tame_epsilon(const KChar& alpha, const AddCharK& phiK);

// Outcome of checking a Gamma_p expression against exact Gauss sums: the
// square of the Gauss-sum quotient, scaled to be integral, is embedded
// p-adically and compared with (-p)^s prod Gamma_p(q)^(2e).
struct GammaCheck {
    std::string expression;
    std::vector<i64> matching_u;
    bool ok() const { return !matching_u.empty(); }
};

struct ThetaRatio {
    ScaledAlgebraic value;  // closed form from Gauss sums / twist rules
    std::string branch;
    std::optional<ScaledAlgebraic> stated;  // as printed, when free of Gamma_p
    std::string stated_text;
    std::optional<GammaCheck> gamma;  // printed Gamma_p form against Gauss sums
    std::optional<GammaCheck> gamma_corrected;
    std::optional<bool> stated_matches;
    ScaledAlgebraic oracle;
};
// A_theta = eps(theta chi_p, phi) / eps(theta, phi) with n(phi) = -1, for
// odd p, C_p <= 1 and theta one of omega_p, omega_p omega_K.
ThetaRatio A_theta(const NewformLocalData& d, const MultChar& theta, const QuadExt& K, int M = 12);

struct VariationReport {
    i64 p = 0;
    ScaledAlgebraic eps;  // closed form from the twisting rules
    std::optional<ScaledAlgebraic> stated;
    std::string stated_text;
    std::optional<bool> stated_matches;
    std::string branch;
    std::optional<ScaledAlgebraic> A_theta;
    std::optional<ScaledAlgebraic> oracle;
    bool match = false;
    std::vector<std::string> notes;
    // Same computation for the other theta candidate.
    std::vector<std::pair<std::string, ScaledAlgebraic>> alternatives;
};

VariationReport variation_principal(const NewformLocalData& d, int M = 12);
VariationReport variation_special(const NewformLocalData& d);
VariationReport variation_supercuspidal(const NewformLocalData& d, int M = 12);
VariationReport variation_p2_supercuspidal(const NewformLocalData& d);
// Dispatches on the type and on p.
VariationReport variation(const NewformLocalData& d, int M = 12);

enum class GlobalProperty { A, B };
// A when the variation number is 1, B when it is -1 (for p = 2 relative to
// chi_-1(2)^C_2); nullopt otherwise.
std::optional<GlobalProperty> property_from_variation(const ScaledAlgebraic& eps, const NewformLocalData& d);

struct Classification {
    std::string representation;  // principal, special, supercuspidal
    std::optional<Sym2Type> type;
    bool ambiguous = false;
    bool determined = true;
    std::string field;  // "unramified", "Q_p(sqrt(-p))", "Q_p(sqrt(-p*zeta))", ...
    std::vector<std::string> notes;
};
Classification classify_from_global(const NewformLocalData& d, GlobalProperty observed);

struct LocalConductor {
    i64 p = 0;
    int exponent = 0;  // from the closed formulas
    int direct = 0;    // from the characters of the parameter
    std::string cls;   // S, P1, P2, P, SC1, SCU, SCR, SC2, SC(2)
    std::optional<int> C_tilde;
    std::optional<int> printed;  // when the printed formula differs
};
LocalConductor conductor_sym2_local(const NewformLocalData& d);

struct ConductorReport {
    std::vector<LocalConductor> local;
    mpz_class N = 1;
    mpz_class global = 1;  // product of local conductors
    mpz_class closed = 1;  // N times the class factors
    std::map<i64, mpz_class> M_prime;  // prime-to-p part per p
    bool consistent() const { return global == closed; }
};
ConductorReport conductor_sym2_global(const std::vector<NewformLocalData>& all);

// Sweeps for Type II data in regimes where it cannot occur. Counts kappa with
// kappa != kappa^sigma, kappa^2 = (kappa^2)^sigma, a(Ind kappa) = Np and
// a(omega_p) = Cp.
int count_type2_witnesses(const QuadExt& K, int Np, int Cp);

// Twist-minimal: no chi o N lowers the conductor of kappa.
bool kappa_minimal(const KChar& kappa);

}  // namespace symsq
