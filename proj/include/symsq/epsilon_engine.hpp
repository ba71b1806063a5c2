#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symsq/padic_chars.hpp"
#include "symsq/quadratic_ext.hpp"
#include "symsq/scaled.hpp"

namespace symsq {

// Symbol standing for p^-s in Weil-Deligne epsilon factors.
inline const std::string kPMinusS = "p^-s";

// A closed-form value next to the same quantity computed from the defining
// sums.
struct RatioCheck {
    ScaledAlgebraic closed;
    std::optional<ScaledAlgebraic> oracle;
    bool match = false;
};

// Largest quotient a defining sum may run over.
inline constexpr i64 kOracleCap = 1'000'000;

// eps(chi, phi, c) = p^(-a/2) chi(c) sum_{x in O^x/U^a} chi^-1(x) phi(x/c)
// with v(c) = a(chi) + n(phi).
ScaledAlgebraic epsilon_oracle(const MultChar& chi, const AddChar& phi, const QpElem& c);
// The same with c = p^(a + n).
ScaledAlgebraic epsilon_oracle(const MultChar& chi, const AddChar& phi);
// Over K with c = pi^(a + n_K) * unit and q = p^f.
ScaledAlgebraic epsilon_oracle(const KChar& kappa, const AddCharK& phiK, const OK& unit = OK{1, 0});

// closed: chi(a) |a|^-1, the measure-dependent shift rule. The oracle uses
// the q^(-a/2) normalization above, under which the ratio is chi(a); the two
// agree exactly when a is a unit.
RatioCheck shift_additive(const MultChar& chi, const AddChar& phi, const QpElem& a);

// eps(chi theta, phi) / eps(chi, phi) = theta(p)^(a(chi) + n(phi)).
RatioCheck unramified_twist(const MultChar& chi, const MultChar& theta, const AddChar& phi);

// eps(Ind kappa, phi) / eps(Ind 1_K, phi) against
// eps(kappa, phi o Tr) / eps(1_K, phi o Tr), for kappa = psi o N where the
// induced representation splits as psi + psi omega_K.
RatioCheck inductive_degree_zero(const MultChar& psi, const QuadExt& K, const AddChar& phi);
// The same starting from kappa; only sigma-stable kappa that descend to Q_p
// are supported (the irreducible case has no independent left-hand side).
RatioCheck inductive_degree_zero(const KChar& kappa, const AddChar& phi);

// c with v(c) = -(a(chi) + n(phi)) and chi(1 + x) = phi(c x) for
// v(x) >= ceil(a(chi)/2).
QpElem find_gamma_element(const MultChar& chi, const AddChar& phi);

// The K analogue: c = pi^v * unit with v = -(a(kappa) + n(phi_K)).
struct KGamma {
    int v = 0;
    OK unit;
    int prec = 1;
};
KGamma find_gamma_element(const KChar& kappa, const AddCharK& phiK);

// eps(alpha beta, phi) / eps(alpha, phi) = beta^-1(c), c the gamma element
// of alpha; needs a(alpha) >= 2 a(beta).
RatioCheck deligne_twist_ratio(const MultChar& alpha, const MultChar& beta, const AddChar& phi);
RatioCheck deligne_twist_ratio(const KChar& alpha, const KChar& beta, const AddCharK& phiK);

// Weil-Deligne representation with split semisimple part: characters on a
// basis e_0, ..., e_{d-1} (unramified twists by |.|^t are folded into the
// value at p) and a nilpotent N with N e_j = sum_i N[i][j] e_i.
struct WDRep {
    std::vector<MultChar> chars;
    std::vector<std::vector<int>> N;

    std::size_t dimension() const { return chars.size(); }
    // N^dim = 0
    bool nilpotent_ok() const;
};

// det(-Phi p^-s | V^I / ker(N) on V^I); Phi acts on e_j by chi_j(p).
ScaledAlgebraic wd_correction(const WDRep& rho);
// eps(s, rho, phi) * wd_correction, carrying p^-s as the symbol kPMinusS.
ScaledAlgebraic epsilon_wd(const WDRep& rho, const AddChar& phi);
// Substitutes s = 1/2.
ScaledAlgebraic at_half(const ScaledAlgebraic& x, i64 p);

}  // namespace symsq
