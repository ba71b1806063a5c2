#pragma once

#include <string>
#include <utility>
#include <vector>

#include "symsq/numtheory.hpp"
#include "symsq/scaled.hpp"

namespace symsq {

// p^v * u in Q_p^x with the unit u known modulo p^prec.
struct QpElem {
    i64 p = 2;
    int v = 0;
    i64 u = 1;
    int prec = 1;

    static QpElem from_int(i64 p, i64 x, int prec);
    static QpElem uniformizer_power(i64 p, int v, int prec);
    QpElem operator*(const QpElem& o) const;
    QpElem inverse() const;
};

// Modulus p^k, refusing values that would not fit comfortably in 63 bits.
i64 ppow(i64 p, int k);

// Multiplicative character of Q_p^x. The unit part is stored at depth equal
// to the conductor a: for odd p an exponent mod phi(p^a) on unit_generator(p),
// for p = 2 a pair of exponents on -1 and 5.
class MultChar {
public:
    MultChar() = default;

    i64 p() const { return p_; }
    int conductor() const { return a_; }
    i64 exponent() const { return e_; }
    std::pair<i64, i64> exponents2() const { return {e_, e2_}; }
    const ScaledAlgebraic& value_at_p() const { return vp_; }

    bool is_unramified() const { return a_ == 0; }
    Turn unit_value(i64 u) const;
    ScaledAlgebraic operator()(const QpElem& x) const;
    // Order of the restriction to Z_p^x.
    i64 unit_order() const;

    MultChar operator*(const MultChar& o) const;
    MultChar inverse() const;
    MultChar pow(i64 k) const;
    MultChar with_value_at_p(const ScaledAlgebraic& v) const;
    bool same_on_units(const MultChar& o) const;
    bool operator==(const MultChar& o) const;
    std::string str() const;

    // Exponents lifted to depth A >= conductor (odd p: one value; p = 2: pair).
    std::pair<i64, i64> exponents_at(int A) const;

    friend MultChar make_mult_char(i64 p, int a, i64 exponent, const ScaledAlgebraic& value_at_p);
    friend MultChar make_mult_char_2(int a, i64 e_minus1, i64 e_five, const ScaledAlgebraic& value_at_2);

private:
    i64 p_ = 2;
    int a_ = 0;
    i64 e_ = 0;
    i64 e2_ = 0;
    ScaledAlgebraic vp_;
};

// Odd p: exponent on unit_generator(p) modulo phi(p^a); the conductor is
// normalized down when the exponent is trivial on 1 + p^(a-1).
MultChar make_mult_char(i64 p, int a, i64 exponent, const ScaledAlgebraic& value_at_p = ScaledAlgebraic(1L));
// p = 2 at depth a (a != 1).
MultChar make_mult_char_2(int a, i64 e_minus1, i64 e_five, const ScaledAlgebraic& value_at_2 = ScaledAlgebraic(1L));
MultChar unramified_char(i64 p, const ScaledAlgebraic& value_at_p);
MultChar trivial_char(i64 p);

// All characters of (Z/p^depth)^x, extended by value 1 at p.
std::vector<MultChar> unit_characters(i64 p, int depth);

// a(chi^2) by the closed rule for Q_p.
int conductor_of_square(const MultChar& chi);

enum class TwistVariant { OddP, Minus1, Two, Minus2 };

// The local component at p of the quadratic Hecke character of the field
// ramified only at p. For p = 2 the value at 2 is the sign symbol
// "chi_-1(2)", "chi_2(2)" or "chi_-2(2)"; see twist_value_at_2.
MultChar twist_char(i64 p, TwistVariant variant);
std::string twist_symbol(TwistVariant variant);
// Value at 2 forced by the product formula applied to the global element 2.
int twist_value_at_2(TwistVariant variant);

int legendre(i64 a, i64 p);

// x -> psi(scale * x) with psi(y) = exp(2 pi i {y}_p); n = v(scale).
struct AddChar {
    i64 p = 2;
    int n = 0;
    i64 unit = 1;

    static AddChar standard(i64 p) { return AddChar{p, 0, 1}; }
    static AddChar with_conductor(i64 p, int n) { return AddChar{p, n, 1}; }
    int conductor() const { return n; }
    // phi_a(x) = phi(a x)
    AddChar shifted(const QpElem& a) const;
    Turn operator()(const QpElem& x) const;
};

Turn eval_add(const AddChar& phi, const QpElem& x);

}  // namespace symsq
