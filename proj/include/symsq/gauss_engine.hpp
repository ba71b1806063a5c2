#pragma once

#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "symsq/cyclotomic.hpp"
#include "symsq/numtheory.hpp"

namespace symsq {

// F_{p^r} as F_p[t]/(P) with P primitive; elements are integers whose base-p
// digits are the coefficients of 1, t, ..., t^(r-1).
class FiniteField {
public:
    static std::shared_ptr<const FiniteField> get(i64 p, int r);

    i64 p() const { return p_; }
    int degree() const { return r_; }
    i64 size() const { return q_; }
    // Generator t of the multiplicative group.
    i64 generator() const { return exp_[1]; }

    i64 add(i64 x, i64 y) const;
    i64 mul(i64 x, i64 y) const;
    i64 pow(i64 x, i64 e) const;
    i64 log(i64 x) const;  // x != 0
    i64 exp(i64 k) const { return exp_[mod(k, q_ - 1)]; }
    // Absolute trace and norm to F_p, returned as elements of F_p.
    i64 trace(i64 x) const { return trace_[x]; }
    i64 norm(i64 x) const;
    // The element of F_p given by an integer.
    i64 from_int(i64 c) const { return mod(c, p_); }

private:
    FiniteField(i64 p, int r);

    i64 p_;
    int r_;
    i64 q_;
    std::vector<i64> exp_, log_, trace_;
    std::vector<i64> poly_;  // low coefficients of P (monic)
};

// Multiplicative character x = t^j -> exp(2 pi i k j / (q - 1)).
struct FFChar {
    std::shared_ptr<const FiniteField> field;
    i64 exponent = 0;

    i64 order() const;
    bool trivial() const { return mod(exponent, field->size() - 1) == 0; }
    Turn operator()(i64 x) const;
};

// Character of F_p^x given on the smallest primitive root g: chi(g) = zeta^k.
FFChar prime_field_char(i64 p, i64 k);

// x -> exp(2 pi i Tr(b x) / p).
Turn additive_ff(const FiniteField& F, i64 b, i64 x);

// sum over x != 0 of chi(x) psi(Tr(b x)).
Cyclotomic gauss_sum(const FFChar& chi, i64 b = 1);

struct DavenportHasseReport {
    i64 p = 0;
    int r = 0;
    i64 exponent = 0;
    Cyclotomic g;       // G(chi, psi) over F_p
    Cyclotomic lifted;  // G(chi o N, psi o Tr) over F_{p^r}
    bool corrected_holds = false;  // -G' = (-G)^r
    bool printed_holds = false;    // G' = (-1)^(r-1) G
};

DavenportHasseReport davenport_hasse_check(i64 p, i64 exponent, int r);

// Gamma_p(x) modulo p^M for x rational with denominator prime to p.
mpz_class padic_gamma(i64 p, const mpq_class& x, int M);

// The image of an element of Q(zeta_p, zeta_{p-1}) that is invariant under
// Gal(Q(zeta_p, zeta_{p-1}) / Q(zeta_{p-1})), after projecting to
// Q(zeta_{p-1}) and sending zeta_{p-1} to the Teichmuller lift of g^u
// (g the smallest primitive root). Denominators must be prime to p.
mpz_class teichmuller_embed(const Cyclotomic& x, i64 p, int prec, i64 u);
// True when x is fixed by zeta_p -> zeta_p^c for all c.
bool fixed_by_zeta_p_galois(const Cyclotomic& x, i64 p);

struct GrossKoblitzReport {
    i64 p = 0, k = 0, a = 0;
    int M = 0;
    i64 expected_valuation = 0;  // v_p(G^(p-1)) = a (p-1) / k
    i64 valuation = 0;  // under zeta_{p-1} -> Teichmuller(g)^-1
    std::vector<i64> matching_u;  // embeddings under which the unit parts agree
    bool abs_squared_ok = false;  // G conj(G) = p
    bool ok() const { return valuation == expected_valuation && !matching_u.empty() && abs_squared_ok; }
};

// Embeddings u (as in teichmuller_embed) under which x = target mod p^prec.
std::vector<i64> matching_embeddings(const Cyclotomic& x, i64 p, const mpz_class& target, int prec);

// (-p)^s prod Gamma_p(q_i)^(e_i) modulo p^(M+s); s >= 0.
mpz_class gamma_monomial(i64 p, int s, const std::vector<std::pair<mpq_class, int>>& factors, int M);

// Compares G(chi^a)^(p-1), chi of order k on F_p, with
// (-p)^s Gamma_p(a/k)^(p-1), s = a(p-1)/k, modulo p^(M+s).
GrossKoblitzReport gross_koblitz_eval(i64 p, i64 k, i64 a, int M);

}  // namespace symsq
