#include "symsq/epsilon_engine.hpp"

#include <map>

#include "symsq/errors.hpp"

namespace symsq {

namespace {

RatioCheck make_check(const ScaledAlgebraic& closed, const ScaledAlgebraic& oracle)
{
    return RatioCheck{closed, oracle, closed == oracle};
}

}  // namespace

ScaledAlgebraic epsilon_oracle(const MultChar& chi, const AddChar& phi, const QpElem& c)
{
    if (chi.p() != phi.p || c.p != phi.p)
        throw DomainError("epsilon_oracle: mixed primes");
    int a = chi.conductor();
    if (c.v != a + phi.n)
        throw DomainError("epsilon_oracle: v(c) = " + std::to_string(c.v) + ", expected a(chi) + n(phi) = " +
                          std::to_string(a + phi.n));
    if (a == 0)
        return chi(c);
    i64 p = chi.p();
    i64 q = ppow(p, a);
    if (q > kOracleCap)
        throw OracleLimit("epsilon_oracle: quotient of size " + std::to_string(q) + " exceeds the cap");
    if (c.prec < a)
        throw DomainError("epsilon_oracle: c known to insufficient precision");
    // phi(x / c) = psi(unit_phi * x * u_c^-1 / p^a)
    i64 s = mulmod(mod(phi.unit, q), invmod(mod(c.u, q), q), q);
    std::map<Turn, i64> counts;
    for (i64 x = 1; x < q; ++x) {
        if (x % p == 0)
            continue;
        ++counts[-chi.unit_value(x) + Turn(mulmod(s, x, q), q)];
    }
    ScaledAlgebraic tau(Cyclotomic::from_counts(counts));
    return ScaledAlgebraic::p_power(p, mpq_class(-a, 2)) * chi(c) * tau;
}

ScaledAlgebraic epsilon_oracle(const MultChar& chi, const AddChar& phi)
{
    int prec = std::max(1, chi.conductor() + 2);
    return epsilon_oracle(chi, phi, QpElem::uniformizer_power(chi.p(), chi.conductor() + phi.n, prec));
}

ScaledAlgebraic epsilon_oracle(const KChar& kappa, const AddCharK& phiK, const OK& unit)
{
    const QuadExt& K = kappa.field();
    int a = kappa.conductor();
    int v = a + phiK.n;
    i64 p = K.p;
    int D = kappa.depth();
    i64 m = ppow(p, D);
    OK u{mod(unit.a, m), mod(unit.b, m)};
    ScaledAlgebraic chi_c = kappa.value(v, u);
    if (a == 0)
        return chi_c;
    const UnitGroupK& G = UnitGroupK::get(K, D);
    if (static_cast<i64>(G.size()) > kOracleCap)
        throw OracleLimit("epsilon_oracle: unit quotient exceeds the cap");
    int prec = std::max(1, std::max(0, v) - phiK.base.n + 1);
    i64 mp = ppow(p, prec);
    KFrac cinv = pi_power(K, -v, prec);
    OK ui = ok_inverse(K, OK{mod(unit.a, mp), mod(unit.b, mp)}, mp);
    cinv = kfrac_mul(K, cinv, ui);
    std::map<Turn, i64> counts;
    for (std::size_t idx : G.units()) {
        OK x = G.element(idx);
        ++counts[-kappa.unit_value(x) + phiK(kfrac_mul(K, cinv, x))];
    }
    // every class of O_K^x / U^a is hit q^(eD - a) times
    i64 mult = ppow(p, K.f * (K.e * D - a));
    ScaledAlgebraic tau(Cyclotomic::from_counts(counts).scaled(mpq_class(1, mult)));
    return ScaledAlgebraic::p_power(p, mpq_class(-K.f * a, 2)) * chi_c * tau;
}

RatioCheck shift_additive(const MultChar& chi, const AddChar& phi, const QpElem& a)
{
    // printed form chi(a) |a|^-1
    ScaledAlgebraic closed = chi(a) * ScaledAlgebraic::p_power(chi.p(), a.v);
    ScaledAlgebraic oracle = epsilon_oracle(chi, phi.shifted(a)) / epsilon_oracle(chi, phi);
    return make_check(closed, oracle);
}

RatioCheck unramified_twist(const MultChar& chi, const MultChar& theta, const AddChar& phi)
{
    if (!theta.is_unramified())
        throw DomainError("unramified_twist: theta is ramified");
    ScaledAlgebraic closed = theta.value_at_p().pow(chi.conductor() + phi.n);
    ScaledAlgebraic oracle = epsilon_oracle(chi * theta, phi) / epsilon_oracle(chi, phi);
    return make_check(closed, oracle);
}

RatioCheck inductive_degree_zero(const MultChar& psi, const QuadExt& K, const AddChar& phi)
{
    KChar kappa = compose_norm(psi, K);
    AddCharK phiK = trace_add_char(phi, K);
    ScaledAlgebraic right = epsilon_oracle(kappa, phiK) / epsilon_oracle(KChar::trivial(K), phiK);
    MultChar w = omega_K(K);
    ScaledAlgebraic left = epsilon_oracle(psi, phi) * epsilon_oracle(psi * w, phi) /
                           (epsilon_oracle(trivial_char(K.p), phi) * epsilon_oracle(w, phi));
    return make_check(right, left);
}

RatioCheck inductive_degree_zero(const KChar& kappa, const AddChar& phi)
{
    if (!sigma_stable(kappa))
        throw UnsupportedRegime("inductive_degree_zero: Ind kappa is irreducible; only kappa = psi o N is supported");
    auto psi = descend_to_base(kappa);
    if (!psi)
        throw UnsupportedRegime("inductive_degree_zero: kappa does not descend to Q_p with a usable value at p");
    return inductive_degree_zero(*psi, kappa.field(), phi);
}

QpElem find_gamma_element(const MultChar& chi, const AddChar& phi)
{
    int a = chi.conductor();
    i64 p = chi.p();
    int v = -(a + phi.n);
    if (a == 0)
        return QpElem{p, v, 1, 1};
    int r = (a + 1) / 2;
    i64 qa = ppow(p, a - r);
    i64 qr = ppow(p, r);
    i64 qfull = ppow(p, a);
    for (i64 u = 1; u < std::max<i64>(qa, 2); ++u) {
        if (u % p == 0)
            continue;
        bool ok = true;
        // phi(c p^r t) = psi(unit_phi * u * t / p^(a - r))
        for (i64 t = 0; t < qa && ok; ++t) {
            Turn lhs = chi.unit_value(mod(1 + qr * t, qfull));
            Turn rhs(mulmod(mulmod(mod(phi.unit, qa), u % qa, qa), t, qa), qa);
            ok = lhs == rhs;
        }
        if (ok)
            return QpElem{p, v, u, a - r};
    }
    throw InternalError("find_gamma_element: no gamma element found for " + chi.str());
}

KGamma find_gamma_element(const KChar& kappa, const AddCharK& phiK)
{
    const QuadExt& K = kappa.field();
    int a = kappa.conductor();
    int v = -(a + phiK.n);
    if (a == 0)
        return KGamma{v, OK{1, 0}, 1};
    int r = (a + 1) / 2;
    int D = kappa.depth();
    i64 m = ppow(K.p, D);
    int Du = table_depth(K, a - r);
    const UnitGroupK& U = UnitGroupK::get(K, Du);
    int prec = std::max(1, std::max(0, a + phiK.n) - phiK.base.n + 1);
    i64 mp = ppow(K.p, prec);
    OK pi = K.ramified ? OK{K.pi_a, K.pi_b} : OK{K.p, 0};
    for (std::size_t idx : U.units()) {
        OK u = U.element(idx);
        bool ok = true;
        for (int j = r; j < a && ok; ++j) {
            OK pj = ok_pow(K, OK{mod(pi.a, m), mod(pi.b, m)}, j, m);
            for (const OK& y : {OK{1, 0}, OK{0, 1}}) {
                OK x = ok_mul(K, pj, y, m);
                Turn lhs = kappa.unit_value(OK{mod(x.a + 1, m), x.b});
                KFrac cx = pi_power(K, j + v, prec);
                cx = kfrac_mul(K, cx, ok_mul(K, OK{mod(u.a, mp), mod(u.b, mp)}, OK{mod(y.a, mp), mod(y.b, mp)}, mp));
                if (lhs != phiK(cx)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok)
            return KGamma{v, u, Du};
    }
    throw InternalError("find_gamma_element: no gamma element found for " + kappa.str());
}

RatioCheck deligne_twist_ratio(const MultChar& alpha, const MultChar& beta, const AddChar& phi)
{
    if (alpha.conductor() < 2 * beta.conductor())
        throw DomainError("deligne_twist_ratio: needs a(alpha) >= 2 a(beta)");
    QpElem c = find_gamma_element(alpha, phi);
    ScaledAlgebraic closed = beta.inverse()(c);
    ScaledAlgebraic oracle = epsilon_oracle(alpha * beta, phi) / epsilon_oracle(alpha, phi);
    return make_check(closed, oracle);
}

RatioCheck deligne_twist_ratio(const KChar& alpha, const KChar& beta, const AddCharK& phiK)
{
    if (alpha.conductor() < 2 * beta.conductor())
        throw DomainError("deligne_twist_ratio: needs a(alpha) >= 2 a(beta)");
    KGamma c = find_gamma_element(alpha, phiK);
    KChar bi = beta.inverse();
    i64 m = ppow(alpha.field().p, bi.depth());
    ScaledAlgebraic closed = bi.value(c.v, OK{mod(c.unit.a, m), mod(c.unit.b, m)});
    ScaledAlgebraic oracle = epsilon_oracle(alpha * beta, phiK) / epsilon_oracle(alpha, phiK);
    return make_check(closed, oracle);
}

bool WDRep::nilpotent_ok() const
{
    std::size_t d = chars.size();
    if (N.empty())
        return true;
    if (N.size() != d)
        return false;
    std::vector<std::vector<long>> P(d, std::vector<long>(d, 0));
    for (std::size_t i = 0; i < d; ++i)
        P[i][i] = 1;
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<std::vector<long>> Q(d, std::vector<long>(d, 0));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t l = 0; l < d; ++l)
                    Q[i][j] += N[i][l] * P[l][j];
        P = std::move(Q);
    }
    for (const auto& row : P)
        for (long x : row)
            if (x != 0)
                return false;
    return true;
}

ScaledAlgebraic wd_correction(const WDRep& rho)
{
    std::size_t d = rho.chars.size();
    if (!rho.N.empty() && rho.N.size() != d)
        throw DomainError("wd_correction: N has the wrong size");
    // N is monomial in the character basis: e_j survives in V^I / ker N
    // when it is inertia-fixed and N e_j != 0.
    ScaledAlgebraic det(1L);
    for (std::size_t j = 0; j < d; ++j) {
        if (!rho.chars[j].is_unramified())
            continue;
        bool nonzero = false;
        for (std::size_t i = 0; i < d && !rho.N.empty(); ++i) {
            if (rho.N[i][j] != 0) {
                if (!rho.chars[i].is_unramified())
                    throw DomainError("wd_correction: N maps V^I outside V^I");
                nonzero = true;
            }
        }
        if (nonzero)
            det *= -rho.chars[j].value_at_p() * ScaledAlgebraic::symbol(kPMinusS);
    }
    return det;
}

ScaledAlgebraic epsilon_wd(const WDRep& rho, const AddChar& phi)
{
    if (!rho.nilpotent_ok())
        throw DomainError("epsilon_wd: N is not nilpotent");
    ScaledAlgebraic e(1L);
    for (const MultChar& c : rho.chars) {
        // eps(s, chi) = eps(chi |.|^(s - 1/2)); |p|^(s - 1/2) = p^-s p^(1/2)
        int k = c.conductor() + phi.n;
        e *= epsilon_oracle(c, phi) *
             (ScaledAlgebraic::symbol(kPMinusS) * ScaledAlgebraic::p_power(phi.p, mpq_class(1, 2))).pow(k);
    }
    return e * wd_correction(rho);
}

ScaledAlgebraic at_half(const ScaledAlgebraic& x, i64 p)
{
    return x.substitute(kPMinusS, ScaledAlgebraic::p_power(p, mpq_class(-1, 2)));
}

}  // namespace symsq
