#include "symsq/quadratic_ext.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "symsq/errors.hpp"

namespace symsq {

namespace {

i64 smallest_nonresidue(i64 p)
{
    for (i64 n = 2; n < p; ++n)
        if (legendre(n, p) == -1)
            return n;
    throw InternalError("no quadratic non-residue");
}

int vcap(i64 x, i64 p, int cap)
{
    if (x == 0)
        return cap;
    return std::min(cap, valuation(x, p));
}

}  // namespace

std::string QuadExt::str() const
{
    std::string s = "Q_" + std::to_string(p) + "(sqrt(" + std::to_string(d) + "))";
    return s + (ramified ? " ramified, delta=" + std::to_string(delta) : " unramified");
}

QuadExt make_quad_ext(i64 p, i64 d)
{
    if (!is_prime(p))
        throw DomainError("make_quad_ext: " + std::to_string(p) + " is not prime");
    if (d == 0)
        throw DomainError("make_quad_ext: zero is not a square class");
    int v = valuation(d, p);
    i64 u = d;
    for (int i = 0; i < v; ++i)
        u /= p;
    v %= 2;
    QuadExt K;
    K.p = p;
    if (p != 2) {
        i64 n0 = smallest_nonresidue(p);
        if (v == 0) {
            if (legendre(u, p) == 1)
                throw DomainError("make_quad_ext: " + std::to_string(d) + " is a square in Q_" + std::to_string(p));
            K.d = n0;
            K.t0 = n0;
            K.pi_a = p;
        } else {
            // p * u is in the class of -p or of -p * g, g a primitive root
            i64 g = smallest_primitive_root(p);
            K.d = legendre(-u, p) == 1 ? -p : -p * g;
            K.ramified = true;
            K.delta = 1;
            K.f = 1;
            K.e = 2;
            K.t0 = K.d;
            K.pi_b = 1;
        }
        return K;
    }
    i64 u8 = mod(u, 8);
    if (v == 0) {
        if (u8 == 1)
            throw DomainError("make_quad_ext: " + std::to_string(d) + " is a square in Q_2");
        if (u8 == 5) {
            K.d = 5;
            K.t1 = 1;
            K.t0 = 1;
            K.pi_a = 2;
            return K;
        }
        K.d = u8 == 7 ? -1 : 3;
        K.ramified = true;
        K.delta = 2;
        K.f = 1;
        K.e = 2;
        K.t0 = K.d;
        K.pi_a = 1;
        K.pi_b = 1;
        return K;
    }
    static const std::map<i64, i64> rep = {{1, 2}, {7, -2}, {3, 6}, {5, -6}};
    K.d = rep.at(u8);
    K.ramified = true;
    K.delta = 3;
    K.f = 1;
    K.e = 2;
    K.t0 = K.d;
    K.pi_b = 1;
    return K;
}

QuadExt make_quad_ext(i64 p, const std::string& square_class)
{
    if (square_class == "unramified") {
        if (p == 2)
            return make_quad_ext(2, 5);
        return make_quad_ext(p, smallest_nonresidue(p));
    }
    if (square_class == "-p")
        return make_quad_ext(p, -p);
    if (square_class == "-p*zeta") {
        if (p == 2)
            throw DomainError("make_quad_ext: -p*zeta needs odd p");
        return make_quad_ext(p, -p * smallest_primitive_root(p));
    }
    std::size_t pos = 0;
    i64 d = 0;
    try {
        d = std::stoll(square_class, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != square_class.size())
        throw DomainError("make_quad_ext: unknown square class label '" + square_class + "'");
    return make_quad_ext(p, d);
}

OK ok_mul(const QuadExt& K, const OK& u, const OK& v, i64 m)
{
    // (a + b x)(c + d x) with x^2 = t1 x + t0
    i64 bd = mulmod(u.b, v.b, m);
    i64 a = mod(mulmod(u.a, v.a, m) + mulmod(bd, K.t0, m), m);
    i64 b = mod(mulmod(u.a, v.b, m) + mulmod(u.b, v.a, m) + mulmod(bd, K.t1, m), m);
    return OK{a, b};
}

OK ok_sigma(const QuadExt& K, const OK& u, i64 m)
{
    return OK{mod(u.a + mulmod(u.b, K.t1, m), m), mod(-u.b, m)};
}

i64 ok_norm(const QuadExt& K, const OK& u, i64 m)
{
    i64 n = mulmod(u.a, u.a, m) + mulmod(mulmod(u.a, u.b, m), K.t1, m) - mulmod(mulmod(u.b, u.b, m), K.t0, m);
    return mod(n, m);
}

i64 ok_trace(const QuadExt& K, const OK& u, i64 m)
{
    return mod(2 * u.a + mulmod(u.b, K.t1, m), m);
}

OK ok_pow(const QuadExt& K, const OK& u, i64 e, i64 m)
{
    if (e < 0)
        return ok_pow(K, ok_inverse(K, u, m), -e, m);
    OK r{1 % m, 0}, b = u;
    while (e > 0) {
        if (e & 1)
            r = ok_mul(K, r, b, m);
        b = ok_mul(K, b, b, m);
        e >>= 1;
    }
    return r;
}

OK ok_inverse(const QuadExt& K, const OK& u, i64 m)
{
    i64 n = ok_norm(K, u, m);
    if (mod(n, K.p) == 0)
        throw DomainError("ok_inverse: not a unit");
    i64 ni = invmod(n, m);
    OK s = ok_sigma(K, u, m);
    return OK{mulmod(s.a, ni, m), mulmod(s.b, ni, m)};
}

int ok_valuation(const QuadExt& K, const OK& u, int D)
{
    i64 m = ppow(K.p, D);
    if (!K.ramified)
        return std::min(vcap(mod(u.a, m), K.p, D), vcap(mod(u.b, m), K.p, D));
    // a + b x = A + B pi with x = pi - pi_a
    i64 A = mod(u.a - mulmod(u.b, K.pi_a, m), m);
    i64 B = mod(u.b, m);
    return std::min(2 * vcap(A, K.p, D), 2 * vcap(B, K.p, D) + 1);
}

i64 norm_pi_unit(const QuadExt& K, i64 m)
{
    if (!K.ramified)
        return 1 % m;
    // N(pi) = p * w; compute w modulo m from the norm modulo p m
    i64 n = ok_norm(K, OK{K.pi_a, K.pi_b}, m * K.p);
    if (n % K.p != 0)
        throw InternalError("norm_pi_unit: N(pi) is not divisible by p");
    return mod(n / K.p, m);
}

OK p_over_pi_e(const QuadExt& K, i64 m)
{
    if (!K.ramified)
        return OK{1 % m, 0};
    OK pi{K.pi_a, K.pi_b};
    OK sq = ok_mul(K, pi, pi, m * K.p);
    if (sq.a % K.p != 0 || sq.b % K.p != 0)
        throw InternalError("p_over_pi_e: pi^2 is not divisible by p");
    return ok_inverse(K, OK{sq.a / K.p, sq.b / K.p}, m);
}

KFrac pi_power(const QuadExt& K, int j, int prec)
{
    i64 m = ppow(K.p, prec);
    if (!K.ramified) {
        if (j >= 0)
            return KFrac{OK{mulmod(1, ppow(K.p, std::min(j, prec)), m), 0}, 0, prec};
        return KFrac{OK{1 % m, 0}, -j, prec};
    }
    OK pi{K.pi_a, K.pi_b};
    if (j >= 0)
        return KFrac{ok_pow(K, pi, j, m), 0, prec};
    // pi^-1 = sigma(pi) / (p w)
    int k = -j;
    OK s = ok_sigma(K, pi, m);
    i64 wi = invmod(norm_pi_unit(K, m), m);
    OK num = ok_pow(K, OK{mulmod(s.a, wi, m), mulmod(s.b, wi, m)}, k, m);
    return KFrac{num, k, prec};
}

KFrac kfrac_mul(const QuadExt& K, const KFrac& x, const OK& y)
{
    i64 m = ppow(K.p, x.prec);
    return KFrac{ok_mul(K, x.num, OK{mod(y.a, m), mod(y.b, m)}, m), x.k, x.prec};
}

const UnitGroupK& UnitGroupK::get(const QuadExt& K, int D)
{
    static std::mutex mu;
    static std::map<std::tuple<i64, i64, int>, std::unique_ptr<UnitGroupK>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(K.p, K.d, D);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::unique_ptr<UnitGroupK>(new UnitGroupK(K, D))).first;
    return *it->second;
}

UnitGroupK::UnitGroupK(const QuadExt& K, int D) : K_(K), D_(D)
{
    if (D < 1)
        throw DomainError("UnitGroupK: depth must be positive");
    m_ = ppow(K.p, D);
    if (m_ > 1000)
        throw OracleLimit("UnitGroupK: (O_K/p^" + std::to_string(D) + ")^x is too large to tabulate");
    std::size_t universe = static_cast<std::size_t>(m_ * m_);
    level_.assign(universe, 0);
    for (std::size_t idx = 0; idx < universe; ++idx) {
        OK z = element(idx);
        if (ok_valuation(K_, z, D) != 0)
            continue;
        units_.push_back(idx);
        level_[idx] = ok_valuation(K_, OK{mod(z.a - 1, m_), z.b}, D);
    }
    dec_ = decompose_abelian(universe, units_, index(OK{1, 0}), [this](std::size_t x, std::size_t y) {
        return index(ok_mul(K_, element(x), element(y), m_));
    });
}

std::size_t UnitGroupK::index(const OK& z) const
{
    return static_cast<std::size_t>(mod(z.a, m_) + m_ * mod(z.b, m_));
}

OK UnitGroupK::element(std::size_t idx) const
{
    i64 i = static_cast<i64>(idx);
    return OK{i % m_, i / m_};
}

int table_depth(const QuadExt& K, int a)
{
    return std::max(1, (a + K.e - 1) / K.e);
}

KChar KChar::from_exponents(const QuadExt& K, int D, std::vector<i64> exps, const ScaledAlgebraic& value_at_pi,
                            std::optional<ScaledAlgebraic> sigma2)
{
    const UnitGroupK& G = UnitGroupK::get(K, D);
    const auto& orders = G.decomposition().orders;
    if (exps.size() != orders.size())
        throw InputError("KChar: exponent vector has length " + std::to_string(exps.size()) + ", expected " +
                          std::to_string(orders.size()));
    KChar c;
    c.K_ = K;
    c.G_ = &G;
    c.D_ = D;
    for (std::size_t i = 0; i < exps.size(); ++i)
        exps[i] = mod(exps[i], orders[i]);
    c.exps_ = std::move(exps);
    c.vpi_ = value_at_pi;
    c.sigma2_ = std::move(sigma2);
    c.normalize();
    return c;
}

void KChar::normalize()
{
    bool trivial = true;
    for (i64 e : exps_)
        trivial = trivial && e == 0;
    if (trivial) {
        a_ = 0;
        return;
    }
    // U^j is generated by 1 + pi^j' y, j' >= j, y in {1, x}
    i64 m = ppow(K_.p, D_);
    OK pi = K_.ramified ? OK{K_.pi_a, K_.pi_b} : OK{K_.p % m, 0};
    int top = K_.e * D_;
    std::vector<OK> pj(top + 1);
    pj[0] = OK{1 % m, 0};
    for (int j = 1; j <= top; ++j)
        pj[j] = ok_mul(K_, pj[j - 1], pi, m);
    a_ = 1;
    for (int j = top - 1; j >= 1; --j) {
        bool ok = true;
        for (const OK& y : {OK{1, 0}, OK{0, 1}}) {
            OK t = ok_mul(K_, pj[j], y, m);
            if (!unit_value(OK{mod(t.a + 1, m), t.b}).is_one())
                ok = false;
        }
        if (!ok) {
            a_ = j + 1;
            break;
        }
    }
}

KChar KChar::from_function(const QuadExt& K, int D, const std::function<Turn(const OK&)>& unit_values,
                           const ScaledAlgebraic& value_at_pi)
{
    const UnitGroupK& G = UnitGroupK::get(K, D);
    const auto& dec = G.decomposition();
    std::vector<i64> exps;
    for (std::size_t i = 0; i < dec.rank(); ++i) {
        Turn t = unit_values(G.element(dec.generators[i]));
        i64 d = dec.orders[i];
        if ((t.num * d) % t.den != 0)
            throw InputError("KChar: value on a generator of order " + std::to_string(d) +
                             " is not a d-th root of unity");
        exps.push_back(t.num * d / t.den);
    }
    KChar c = from_exponents(K, D, exps, value_at_pi);
    for (std::size_t idx : G.units())
        if (c.unit_value(G.element(idx)) != unit_values(G.element(idx)))
            throw InputError("KChar: the given values are not multiplicative");
    return c;
}

KChar KChar::from_table(const QuadExt& K, int D, const std::vector<std::array<i64, 4>>& table,
                        const ScaledAlgebraic& value_at_pi)
{
    const UnitGroupK& G = UnitGroupK::get(K, D);
    if (table.size() != G.size())
        throw InputError("KChar: table has " + std::to_string(table.size()) + " entries, (O_K/p^" +
                         std::to_string(D) + ")^x has " + std::to_string(G.size()));
    std::map<std::size_t, Turn> vals;
    for (const auto& row : table) {
        std::size_t idx = G.index(OK{row[0], row[1]});
        if (!G.is_unit(idx))
            throw InputError("KChar: table entry (" + std::to_string(row[0]) + ", " + std::to_string(row[1]) +
                             ") is not a unit");
        if (row[3] <= 0)
            throw InputError("KChar: table entry with non-positive denominator");
        if (!vals.emplace(idx, Turn(row[2], row[3])).second)
            throw InputError("KChar: duplicate table entry");
    }
    return from_function(K, D, [&](const OK& z) { return vals.at(G.index(z)); }, value_at_pi);
}

KChar KChar::trivial(const QuadExt& K)
{
    const UnitGroupK& G = UnitGroupK::get(K, 1);
    return from_exponents(K, 1, std::vector<i64>(G.decomposition().rank(), 0), ScaledAlgebraic(1L));
}

Turn KChar::unit_value(const OK& z) const
{
    if (G_ == nullptr)
        throw DomainError("KChar: default-constructed character");
    const UnitGroupK& G = *G_;
    std::size_t idx = G.index(z);
    const auto& c = G.decomposition().coords[idx];
    if (c.empty())
        throw DomainError("KChar: argument is not a unit");
    Turn t;
    const auto& orders = G.decomposition().orders;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (exps_[i] != 0 && c[i] != 0)
            t = t + Turn(mulmod(exps_[i], c[i], orders[i]), orders[i]);
    return t;
}

ScaledAlgebraic KChar::value(int v, const OK& z) const
{
    return vpi_.pow(v) * ScaledAlgebraic::root(unit_value(z));
}

KChar KChar::at_depth(int D) const
{
    if (D == D_)
        return *this;
    if (D < table_depth(K_, a_))
        throw DomainError("KChar::at_depth: depth below the conductor");
    KChar c = from_function(K_, D, [this](const OK& z) { return unit_value(z); }, vpi_);
    c.sigma2_ = sigma2_;
    return c;
}

i64 KChar::unit_order() const
{
    const auto& orders = UnitGroupK::get(K_, D_).decomposition().orders;
    i64 o = 1;
    for (std::size_t i = 0; i < orders.size(); ++i)
        o = lcm64(o, orders[i] / std::gcd(orders[i], exps_[i]));
    return o;
}

KChar KChar::operator*(const KChar& o) const
{
    if (!(K_ == o.K_))
        throw DomainError("KChar: product of characters of different fields");
    int D = std::max(D_, o.D_);
    KChar x = at_depth(D), y = o.at_depth(D);
    std::vector<i64> e(x.exps_.size());
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = x.exps_[i] + y.exps_[i];
    std::optional<ScaledAlgebraic> s2;
    if (sigma2_ && o.sigma2_)
        s2 = *sigma2_ * *o.sigma2_;
    return from_exponents(K_, D, e, vpi_ * o.vpi_, s2);
}

KChar KChar::inverse() const
{
    return pow(-1);
}

KChar KChar::pow(i64 k) const
{
    std::vector<i64> e(exps_.size());
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = exps_[i] * k;
    std::optional<ScaledAlgebraic> s2;
    if (sigma2_)
        s2 = sigma2_->pow(k);
    return from_exponents(K_, D_, e, vpi_.pow(k), s2);
}

KChar KChar::with_value_at_pi(const ScaledAlgebraic& v) const
{
    KChar c = *this;
    c.vpi_ = v;
    return c;
}

bool KChar::same_on_units(const KChar& o) const
{
    if (!(K_ == o.K_) || a_ != o.a_)
        return false;
    int D = std::max(D_, o.D_);
    return at_depth(D).exps_ == o.at_depth(D).exps_;
}

bool KChar::operator==(const KChar& o) const
{
    return same_on_units(o) && vpi_ == o.vpi_;
}

std::string KChar::str() const
{
    std::string s = "kappa[" + K_.str() + ", a=" + std::to_string(a_) + ", exps=(";
    for (std::size_t i = 0; i < exps_.size(); ++i)
        s += (i ? "," : "") + std::to_string(exps_[i]);
    return s + "), kappa(pi)=" + vpi_.str() + "]";
}

KChar conjugate(const KChar& kappa)
{
    const QuadExt& K = kappa.field();
    int D = kappa.depth();
    i64 m = ppow(K.p, D);
    ScaledAlgebraic vpi = kappa.value_at_pi();
    if (K.ramified) {
        // sigma(pi) = pi * z with z = sigma(pi)^2 / N(pi)
        i64 big = m * K.p;
        OK s = ok_sigma(K, OK{K.pi_a, K.pi_b}, big);
        OK s2 = ok_mul(K, s, s, big);
        OK z{mod(s2.a / K.p, m), mod(s2.b / K.p, m)};
        i64 wi = invmod(norm_pi_unit(K, m), m);
        z = OK{mulmod(z.a, wi, m), mulmod(z.b, wi, m)};
        vpi = vpi * ScaledAlgebraic::root(kappa.unit_value(z));
    }
    KChar c = KChar::from_function(K, D, [&](const OK& z) { return kappa.unit_value(ok_sigma(K, z, m)); }, vpi);
    if (kappa.value_at_sigma2())
        c = KChar::from_exponents(K, D, c.exponents(), vpi, kappa.value_at_sigma2());
    return c;
}

bool sigma_stable(const KChar& kappa)
{
    return conjugate(kappa).same_on_units(kappa);
}

MultChar omega_K(const QuadExt& K)
{
    int depth = K.p == 2 ? 3 : 1;
    const UnitGroupK& G = UnitGroupK::get(K, depth);
    i64 m = G.modulus();
    std::vector<MultChar> found;
    for (const MultChar& c : unit_characters(K.p, depth)) {
        if (c.unit_order() > 2)
            continue;
        bool kills_norms = true;
        for (std::size_t idx : G.units())
            if (!c.unit_value(ok_norm(K, G.element(idx), m)).is_one()) {
                kills_norms = false;
                break;
            }
        if (!kills_norms)
            continue;
        for (long s : {1L, -1L}) {
            MultChar w = c.with_value_at_p(ScaledAlgebraic(s));
            // value at N(pi) = p^f * unit
            ScaledAlgebraic at_norm_pi = ScaledAlgebraic(s).pow(K.ramified ? 1 : 2) *
                                         ScaledAlgebraic::root(c.unit_value(norm_pi_unit(K, m)));
            if (at_norm_pi == ScaledAlgebraic(1L) && !(c.conductor() == 0 && s == 1))
                found.push_back(w);
        }
    }
    if (found.size() != 1)
        throw InternalError("omega_K: expected one quadratic character, found " + std::to_string(found.size()));
    return found.front();
}

KChar compose_norm(const MultChar& chi, const QuadExt& K)
{
    if (chi.p() != K.p)
        throw DomainError("compose_norm: character and field over different primes");
    int D = std::max(1, chi.conductor());
    i64 m = ppow(K.p, D);
    ScaledAlgebraic vpi = K.ramified ? chi.value_at_p() * ScaledAlgebraic::root(chi.unit_value(norm_pi_unit(K, m)))
                                     : chi.value_at_p().pow(2);
    KChar c = KChar::from_function(K, D, [&](const OK& z) { return chi.unit_value(ok_norm(K, z, m)); }, vpi);
    return c.at_depth(table_depth(K, c.conductor()));
}

int norm_conductor(const MultChar& chi, const QuadExt& K)
{
    return compose_norm(chi, K).conductor();
}

int norm_conductor_formula(const MultChar& chi, const QuadExt& K)
{
    MultChar w = omega_K(K);
    int num = chi.conductor() + (chi * w).conductor() - w.conductor();
    if (num % K.f != 0)
        throw InternalError("norm_conductor_formula: numerator not divisible by f");
    return num / K.f;
}

Turn AddCharK::operator()(const KFrac& x) const
{
    // psi(unit * p^n * Tr(x)), Tr((A + B x) / p^k) = (2A + B t1) / p^k
    int k = x.k - base.n;
    if (k <= 0)
        return Turn(0, 1);
    if (x.prec < k)
        throw DomainError("AddCharK: element known to insufficient precision");
    i64 q = ppow(K.p, k);
    i64 tr = mod(2 * x.num.a + mulmod(mod(x.num.b, q), mod(K.t1, q), q), q);
    return Turn(mulmod(tr, mod(base.unit, q), q), q);
}

AddCharK trace_add_char(const AddChar& phi, const QuadExt& K)
{
    if (phi.p != K.p)
        throw DomainError("trace_add_char: character and field over different primes");
    return AddCharK{K, phi, K.e * phi.n + K.delta};
}

int add_char_conductor_bruteforce(const AddCharK& phiK)
{
    const QuadExt& K = phiK.K;
    // phi_K is trivial on pi^j O_K iff it is trivial on pi^j and pi^j x
    auto trivial_at = [&](int j) {
        int prec = std::max(1, std::max(0, -j) - phiK.base.n + 1);
        KFrac t = pi_power(K, j, prec);
        for (const OK& y : {OK{1, 0}, OK{0, 1}})
            if (!phiK(kfrac_mul(K, t, y)).is_one())
                return false;
        return true;
    };
    int j = K.e * (std::abs(phiK.base.n) + 2) + 4;
    if (!trivial_at(j))
        throw InternalError("add_char_conductor_bruteforce: start point not in the kernel");
    while (trivial_at(j - 1))
        --j;
    return -j;
}

int induced_conductor(const KChar& kappa)
{
    const QuadExt& K = kappa.field();
    return K.delta + K.f * kappa.conductor();
}

int norm_residue_symbol(const QuadExt& K)
{
    if (K.p == 2 || !K.ramified)
        throw DomainError("norm_residue_symbol: needs odd p and ramified K");
    auto v = omega_K(K).value_at_p().scalar().as_rational();
    if (!v)
        throw InternalError("norm_residue_symbol: omega_K(p) is not rational");
    return *v > 0 ? 1 : -1;
}

MultChar restrict_to_base(const KChar& kappa)
{
    const QuadExt& K = kappa.field();
    int D = kappa.depth();
    i64 m = ppow(K.p, D);
    ScaledAlgebraic vp = K.ramified ? kappa.value_at_pi().pow(2) * ScaledAlgebraic::root(kappa.unit_value(p_over_pi_e(K, m)))
                                    : kappa.value_at_pi();
    if (K.p != 2) {
        i64 g = unit_generator(K.p);
        Turn t = kappa.unit_value(OK{g % m, 0});
        i64 ord = euler_phi(m);
        return make_mult_char(K.p, D, t.num * (ord / t.den), vp);
    }
    if (D < 2)
        return unramified_char(2, vp);
    Turn t1 = kappa.unit_value(OK{m - 1, 0});
    i64 e1 = t1.num * 2 / t1.den;
    i64 e5 = 0;
    if (D >= 3) {
        Turn t5 = kappa.unit_value(OK{5 % m, 0});
        e5 = t5.num * (m / 4) / t5.den;
    }
    return make_mult_char_2(D, e1, e5, vp);
}

std::optional<MultChar> descend_to_base(const KChar& kappa)
{
    const QuadExt& K = kappa.field();
    int depth = kappa.conductor() + (K.p == 2 ? 3 : 1);
    for (const MultChar& c : unit_characters(K.p, depth)) {
        if (!compose_norm(c, K).same_on_units(kappa))
            continue;
        if (K.ramified) {
            i64 m = ppow(K.p, std::max(1, c.conductor()));
            return c.with_value_at_p(kappa.value_at_pi() / ScaledAlgebraic::root(c.unit_value(norm_pi_unit(K, m))));
        }
        // kappa(p) = psi(p)^2
        auto r = sqrt_monomial(kappa.value_at_pi());
        if (!r)
            return std::nullopt;
        return c.with_value_at_p(*r);
    }
    return std::nullopt;
}

std::vector<KChar> unit_characters_K(const QuadExt& K, int D)
{
    const auto& orders = UnitGroupK::get(K, D).decomposition().orders;
    std::vector<KChar> out;
    std::vector<i64> e(orders.size(), 0);
    while (true) {
        out.push_back(KChar::from_exponents(K, D, e, ScaledAlgebraic(1L)));
        std::size_t i = 0;
        while (i < e.size() && ++e[i] == orders[i])
            e[i++] = 0;
        if (i == e.size())
            break;
    }
    return out;
}

}  // namespace symsq
