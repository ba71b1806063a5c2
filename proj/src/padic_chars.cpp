#include "symsq/padic_chars.hpp"

#include <map>
#include <mutex>

#include "symsq/errors.hpp"

namespace symsq {

i64 ppow(i64 p, int k)
{
    if (k < 0)
        throw DomainError("ppow: negative exponent");
    i64 r = 1;
    for (int i = 0; i < k; ++i) {
        if (r > (i64{1} << 62) / p)
            throw OracleLimit("p-adic modulus p^" + std::to_string(k) + " exceeds 62 bits");
        r *= p;
    }
    return r;
}

QpElem QpElem::from_int(i64 p, i64 x, int prec)
{
    if (x == 0)
        throw DomainError("QpElem::from_int: zero");
    int v = valuation(x, p);
    i64 u = x;
    for (int i = 0; i < v; ++i)
        u /= p;
    return QpElem{p, v, mod(u, ppow(p, prec)), prec};
}

QpElem QpElem::uniformizer_power(i64 p, int v, int prec)
{
    return QpElem{p, v, 1, prec};
}

QpElem QpElem::operator*(const QpElem& o) const
{
    int prec2 = std::min(prec, o.prec);
    i64 m = ppow(p, prec2);
    return QpElem{p, v + o.v, mulmod(u, o.u, m), prec2};
}

QpElem QpElem::inverse() const
{
    return QpElem{p, -v, invmod(u, ppow(p, prec)), prec};
}

namespace {

struct DlogTable {
    i64 modulus = 1;
    std::vector<i64> log;  // -1 for non-units
};

// Discrete logs on unit_generator(p) mod p^a (odd p) or on 5 mod 2^a.
const DlogTable& dlog_table(i64 p, int a)
{
    static std::mutex mu;
    static std::map<std::pair<i64, int>, DlogTable> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, a);
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;
    DlogTable t;
    t.modulus = ppow(p, a);
    if (t.modulus > 4'000'000)
        throw OracleLimit("discrete log table for " + std::to_string(p) + "^" + std::to_string(a) + " too large");
    t.log.assign(t.modulus, -1);
    i64 g = p == 2 ? 5 : unit_generator(p);
    i64 order = p == 2 ? std::max<i64>(1, t.modulus / 4) : euler_phi(t.modulus);
    i64 x = 1 % t.modulus;
    for (i64 k = 0; k < order; ++k) {
        t.log[x] = k;
        x = mulmod(x, g, t.modulus);
    }
    return cache.emplace(key, std::move(t)).first->second;
}

i64 mod_order_group(i64 p, int a)
{
    return a == 0 ? 1 : euler_phi(ppow(p, a));
}

}  // namespace

MultChar make_mult_char(i64 p, int a, i64 exponent, const ScaledAlgebraic& value_at_p)
{
    if (!is_prime(p))
        throw DomainError("make_mult_char: " + std::to_string(p) + " is not prime");
    if (p == 2)
        throw DomainError("make_mult_char: use the (-1, 5) exponent pair for p = 2");
    if (a < 0)
        throw DomainError("make_mult_char: negative conductor");
    MultChar c;
    c.p_ = p;
    c.vp_ = value_at_p;
    i64 order = mod_order_group(p, a);
    i64 e = mod(exponent, order);
    if (e == 0) {
        c.a_ = 0;
        c.e_ = 0;
        return c;
    }
    int ve = 0;
    i64 t = e;
    while (t % p == 0 && ve < a - 1) {
        t /= p;
        ++ve;
    }
    c.a_ = a - ve;
    c.e_ = e / ppow(p, ve);
    return c;
}

MultChar make_mult_char_2(int a, i64 e_minus1, i64 e_five, const ScaledAlgebraic& value_at_2)
{
    if (a == 1)
        throw DomainError("make_mult_char_2: conductor 1 does not occur for p = 2");
    if (a < 0)
        throw DomainError("make_mult_char_2: negative conductor");
    MultChar c;
    c.p_ = 2;
    c.vp_ = value_at_2;
    i64 e1 = a >= 2 ? mod(e_minus1, 2) : 0;
    i64 ord5 = a >= 3 ? ppow(2, a - 2) : 1;
    i64 e2 = mod(e_five, ord5);
    if (e2 == 0) {
        c.a_ = e1 != 0 ? 2 : 0;
        c.e_ = e1;
        c.e2_ = 0;
        return c;
    }
    int v2 = valuation(e2, 2);
    c.a_ = a - v2;
    c.e_ = e1;
    c.e2_ = e2 >> v2;
    return c;
}

MultChar unramified_char(i64 p, const ScaledAlgebraic& value_at_p)
{
    if (p == 2)
        return make_mult_char_2(0, 0, 0, value_at_p);
    return make_mult_char(p, 0, 0, value_at_p);
}

MultChar trivial_char(i64 p)
{
    return unramified_char(p, ScaledAlgebraic(1L));
}

std::pair<i64, i64> MultChar::exponents_at(int A) const
{
    if (A < a_)
        throw DomainError("MultChar::exponents_at: depth below conductor");
    if (a_ == 0)
        return {0, 0};
    if (p_ != 2)
        return {e_ * ppow(p_, A - a_), 0};
    i64 e2 = a_ >= 3 ? e2_ * ppow(2, A - a_) : 0;
    return {e_, e2};
}

Turn MultChar::unit_value(i64 u) const
{
    if (mod(u, p_) == 0)
        throw DomainError("MultChar::unit_value: argument is not a unit");
    if (a_ == 0)
        return Turn(0, 1);
    const DlogTable& t = dlog_table(p_, a_);
    i64 r = mod(u, t.modulus);
    if (p_ != 2)
        return Turn(mulmod(e_, t.log[r], euler_phi(t.modulus)), euler_phi(t.modulus));
    Turn out(0, 1);
    if (r % 4 == 3) {
        out = Turn(e_, 2);
        r = t.modulus - r;
    }
    if (a_ >= 3)
        out = out + Turn(mulmod(e2_, t.log[r], t.modulus / 4), t.modulus / 4);
    return out;
}

ScaledAlgebraic MultChar::operator()(const QpElem& x) const
{
    if (x.p != p_)
        throw DomainError("MultChar: element of a different Q_p");
    if (x.prec < a_)
        throw DomainError("MultChar: element known to insufficient precision");
    return vp_.pow(x.v) * ScaledAlgebraic::root(unit_value(x.u));
}

i64 MultChar::unit_order() const
{
    if (a_ == 0)
        return 1;
    if (p_ != 2) {
        i64 n = euler_phi(ppow(p_, a_));
        return n / std::gcd(n, e_);
    }
    i64 o1 = e_ % 2 == 0 ? 1 : 2;
    i64 o2 = 1;
    if (a_ >= 3) {
        i64 n = ppow(2, a_ - 2);
        o2 = n / std::gcd(n, e2_);
    }
    return lcm64(o1, o2);
}

MultChar MultChar::operator*(const MultChar& o) const
{
    if (p_ != o.p_)
        throw DomainError("MultChar: product of characters of different primes");
    int A = std::max(a_, o.a_);
    auto [x1, x2] = exponents_at(A);
    auto [y1, y2] = o.exponents_at(A);
    if (p_ == 2)
        return make_mult_char_2(A == 1 ? 2 : A, x1 + y1, x2 + y2, vp_ * o.vp_);
    return make_mult_char(p_, A, x1 + y1, vp_ * o.vp_);
}

MultChar MultChar::inverse() const
{
    if (p_ == 2)
        return make_mult_char_2(a_, -e_, -e2_, vp_.inverse());
    return make_mult_char(p_, a_, -e_, vp_.inverse());
}

MultChar MultChar::pow(i64 k) const
{
    if (k < 0)
        return inverse().pow(-k);
    if (p_ == 2)
        return make_mult_char_2(a_, e_ * k, e2_ * k, vp_.pow(k));
    return make_mult_char(p_, a_, e_ * k, vp_.pow(k));
}

MultChar MultChar::with_value_at_p(const ScaledAlgebraic& v) const
{
    MultChar c = *this;
    c.vp_ = v;
    return c;
}

bool MultChar::same_on_units(const MultChar& o) const
{
    return p_ == o.p_ && a_ == o.a_ && e_ == o.e_ && e2_ == o.e2_;
}

bool MultChar::operator==(const MultChar& o) const
{
    return same_on_units(o) && vp_ == o.vp_;
}

std::string MultChar::str() const
{
    std::string s = "chi[p=" + std::to_string(p_) + ", a=" + std::to_string(a_);
    if (p_ == 2)
        s += ", e(-1)=" + std::to_string(e_) + ", e(5)=" + std::to_string(e2_);
    else
        s += ", e=" + std::to_string(e_);
    return s + ", chi(p)=" + vp_.str() + "]";
}

std::vector<MultChar> unit_characters(i64 p, int depth)
{
    std::vector<MultChar> out;
    if (p == 2) {
        if (depth < 2)
            return {trivial_char(2)};
        i64 n5 = depth >= 3 ? ppow(2, depth - 2) : 1;
        for (i64 e1 = 0; e1 < 2; ++e1)
            for (i64 e2 = 0; e2 < n5; ++e2)
                out.push_back(make_mult_char_2(depth, e1, e2));
        return out;
    }
    i64 n = mod_order_group(p, depth);
    for (i64 e = 0; e < n; ++e)
        out.push_back(make_mult_char(p, depth, e));
    return out;
}

int conductor_of_square(const MultChar& chi)
{
    int a = chi.conductor();
    if (chi.p() == 2) {
        if (a <= 3)
            return 0;
        return a - 1;
    }
    if (a == 1 && chi.unit_order() == 2)
        return 0;
    return a;
}

int legendre(i64 a, i64 p)
{
    i64 r = mod(a, p);
    if (r == 0)
        return 0;
    return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::string twist_symbol(TwistVariant variant)
{
    switch (variant) {
    case TwistVariant::Minus1:
        return "chi_-1(2)";
    case TwistVariant::Two:
        return "chi_2(2)";
    case TwistVariant::Minus2:
        return "chi_-2(2)";
    default:
        throw DomainError("twist_symbol: no symbol for odd p");
    }
}

int twist_value_at_2(TwistVariant variant)
{
    // chi(2) = 1 for the global element 2: chi_infinity(2) = 1 since 2 > 0,
    // chi_q(2) = 1 at odd q since chi_q is unramified and 2 is a unit there.
    (void)twist_symbol(variant);
    int infinite = 1, odd_places = 1;
    return infinite * odd_places;
}

MultChar twist_char(i64 p, TwistVariant variant)
{
    if (variant == TwistVariant::OddP) {
        if (p == 2 || !is_prime(p))
            throw DomainError("twist_char: the odd-p variant needs an odd prime");
        return make_mult_char(p, 1, (p - 1) / 2, ScaledAlgebraic(1L));
    }
    if (p != 2)
        throw DomainError("twist_char: the -1, 2, -2 variants live at p = 2");
    auto sym = ScaledAlgebraic::sign_symbol(twist_symbol(variant));
    switch (variant) {
    case TwistVariant::Minus1:
        return make_mult_char_2(2, 1, 0, sym);
    case TwistVariant::Two:
        return make_mult_char_2(3, 0, 1, sym);
    default:
        return make_mult_char_2(3, 1, 1, sym);
    }
}

AddChar AddChar::shifted(const QpElem& a) const
{
    if (a.p != p)
        throw DomainError("AddChar::shifted: element of a different Q_p");
    i64 m = ppow(p, a.prec);
    return AddChar{p, n + a.v, mulmod(mod(unit, m), a.u, m)};
}

Turn AddChar::operator()(const QpElem& x) const
{
    if (x.p != p)
        throw DomainError("AddChar: element of a different Q_p");
    int k = n + x.v;
    if (k >= 0)
        return Turn(0, 1);
    int m = -k;
    if (x.prec < m)
        throw DomainError("AddChar: element known to insufficient precision");
    i64 q = ppow(p, m);
    return Turn(mulmod(mod(unit, q), mod(x.u, q), q), q);
}

Turn eval_add(const AddChar& phi, const QpElem& x)
{
    return phi(x);
}

}  // namespace symsq
