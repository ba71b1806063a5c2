#include "symsq/gauss_engine.hpp"

#include <map>
#include <mutex>

#include "symsq/errors.hpp"

namespace symsq {

std::shared_ptr<const FiniteField> FiniteField::get(i64 p, int r)
{
    static std::mutex mu;
    static std::map<std::pair<i64, int>, std::shared_ptr<const FiniteField>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, r);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::shared_ptr<const FiniteField>(new FiniteField(p, r))).first;
    return it->second;
}

FiniteField::FiniteField(i64 p, int r) : p_(p), r_(r)
{
    if (!is_prime(p) || r < 1)
        throw DomainError("FiniteField: need a prime p and r >= 1");
    q_ = 1;
    for (int i = 0; i < r; ++i)
        q_ *= p;
    if (q_ > 2'000'000)
        throw OracleLimit("FiniteField: F_" + std::to_string(q_) + " is too large to tabulate");
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, -1);
    if (r == 1) {
        i64 g = p == 2 ? 1 : smallest_primitive_root(p);
        i64 x = 1;
        for (i64 k = 0; k < q_ - 1; ++k) {
            exp_[k] = x;
            log_[x] = k;
            x = x * g % p;
        }
    } else {
        // search monic P = t^r + sum c_i t^i with t of order q - 1
        std::vector<i64> c(r, 0);
        bool found = false;
        for (i64 code = 0; code < q_ && !found; ++code) {
            i64 rest = code;
            for (int i = 0; i < r; ++i) {
                c[i] = rest % p;
                rest /= p;
            }
            if (c[0] == 0)
                continue;
            std::fill(log_.begin(), log_.end(), -1);
            std::vector<i64> digits(r, 0);
            digits[0] = 1;
            bool ok = true;
            for (i64 k = 0; k < q_ - 1; ++k) {
                i64 x = 0;
                for (int i = r - 1; i >= 0; --i)
                    x = x * p + digits[i];
                if (log_[x] >= 0) {
                    ok = false;
                    break;
                }
                exp_[k] = x;
                log_[x] = k;
                // multiply by t, reduce t^r = -sum c_i t^i
                i64 top = digits[r - 1];
                for (int i = r - 1; i > 0; --i)
                    digits[i] = digits[i - 1];
                digits[0] = 0;
                for (int i = 0; i < r; ++i)
                    digits[i] = mod(digits[i] - top * c[i], p);
            }
            if (ok) {
                found = true;
                poly_ = c;
            }
        }
        if (!found)
            throw InternalError("FiniteField: no primitive polynomial found");
    }
    trace_.assign(q_, 0);
    for (i64 x = 1; x < q_; ++x) {
        i64 s = 0;
        i64 pk = 1;
        for (int i = 0; i < r; ++i) {
            s = add(s, exp(mulmod(log_[x], pk, q_ - 1)));
            pk = pk * p % (q_ - 1);
        }
        if (s >= p)
            throw InternalError("FiniteField: trace left F_p");
        trace_[x] = s;
    }
}

i64 FiniteField::add(i64 x, i64 y) const
{
    i64 out = 0, scale = 1;
    for (int i = 0; i < r_; ++i) {
        out += ((x % p_ + y % p_) % p_) * scale;
        x /= p_;
        y /= p_;
        scale *= p_;
    }
    return out;
}

i64 FiniteField::mul(i64 x, i64 y) const
{
    if (x == 0 || y == 0)
        return 0;
    return exp_[(log_[x] + log_[y]) % (q_ - 1)];
}

i64 FiniteField::pow(i64 x, i64 e) const
{
    if (x == 0)
        return e == 0 ? 1 : 0;
    return exp(mulmod(log_[x], mod(e, q_ - 1), q_ - 1));
}

i64 FiniteField::log(i64 x) const
{
    if (x <= 0 || x >= q_)
        throw DomainError("FiniteField::log: zero or out of range");
    return log_[x];
}

i64 FiniteField::norm(i64 x) const
{
    i64 n = pow(x, (q_ - 1) / (p_ - 1));
    if (n >= p_)
        throw InternalError("FiniteField: norm left F_p");
    return n;
}

i64 FFChar::order() const
{
    i64 n = field->size() - 1;
    return n / std::gcd(n, mod(exponent, n));
}

Turn FFChar::operator()(i64 x) const
{
    i64 n = field->size() - 1;
    return Turn(mulmod(mod(exponent, n), field->log(x), n), n);
}

FFChar prime_field_char(i64 p, i64 k)
{
    return FFChar{FiniteField::get(p, 1), mod(k, p - 1)};
}

Turn additive_ff(const FiniteField& F, i64 b, i64 x)
{
    return Turn(F.trace(F.mul(b, x)), F.p());
}

Cyclotomic gauss_sum(const FFChar& chi, i64 b)
{
    const FiniteField& F = *chi.field;
    if (b == 0)
        throw DomainError("gauss_sum: the additive character is trivial");
    std::map<Turn, i64> counts;
    for (i64 x = 1; x < F.size(); ++x)
        ++counts[chi(x) + additive_ff(F, b, x)];
    return Cyclotomic::from_counts(counts);
}

DavenportHasseReport davenport_hasse_check(i64 p, i64 exponent, int r)
{
    if (r < 2)
        throw DomainError("davenport_hasse_check: r must be at least 2");
    auto Fp = FiniteField::get(p, 1);
    auto Fq = FiniteField::get(p, r);
    FFChar chi{Fp, mod(exponent, p - 1)};
    // chi o N on t^j: chi(N(t))^j
    i64 L = Fp->log(Fq->norm(Fq->generator()));
    i64 q1 = Fq->size() - 1;
    FFChar lifted{Fq, mod(chi.exponent * L % (p - 1) * (q1 / (p - 1)), q1)};
    DavenportHasseReport rep;
    rep.p = p;
    rep.r = r;
    rep.exponent = chi.exponent;
    rep.g = gauss_sum(chi);
    rep.lifted = gauss_sum(lifted);
    rep.corrected_holds = -rep.lifted == (-rep.g).pow(r);
    Cyclotomic sign = r % 2 == 1 ? Cyclotomic(1L) : Cyclotomic(-1L);
    rep.printed_holds = rep.lifted == sign * rep.g;
    return rep;
}

namespace {

using Poly = std::vector<mpz_class>;

void reduce(Poly& f, const mpz_class& P)
{
    for (auto& c : f) {
        c %= P;
        if (c < 0)
            c += P;
    }
}

Poly poly_mul(const Poly& f, const Poly& g, std::size_t deg, const mpz_class& P)
{
    Poly h(deg, 0);
    for (std::size_t i = 0; i < f.size() && i < deg; ++i) {
        if (f[i] == 0)
            continue;
        for (std::size_t j = 0; j < g.size() && i + j < deg; ++j)
            h[i + j] += f[i] * g[j];
    }
    reduce(h, P);
    return h;
}

// f(u + c)
Poly poly_shift(const Poly& f, const mpz_class& c, std::size_t deg, const mpz_class& P)
{
    Poly r(deg, 0);
    for (std::size_t d = f.size(); d-- > 0;) {
        // r = r * (u + c) + f[d]
        Poly t(deg, 0);
        for (std::size_t i = 0; i < deg; ++i) {
            t[i] += r[i] * c;
            if (i + 1 < deg)
                t[i + 1] += r[i];
        }
        t[0] += f[d];
        reduce(t, P);
        r = std::move(t);
    }
    return r;
}

// prod_{j=1}^{p-1} (u + c + j)
Poly block(i64 p, const mpz_class& c, std::size_t deg, const mpz_class& P)
{
    Poly r(deg, 0);
    r[0] = 1;
    for (i64 j = 1; j < p; ++j) {
        Poly lin = {mpz_class(c + j), 1};
        r = poly_mul(r, lin, deg, P);
    }
    return r;
}

mpz_class pmod(const mpz_class& x, const mpz_class& P)
{
    mpz_class r = x % P;
    if (r < 0)
        r += P;
    return r;
}

mpz_class mpz_ppow(i64 p, int k)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

mpz_class teichmuller(i64 g, i64 p, int prec)
{
    mpz_class P = mpz_ppow(p, prec), t = g, e = mpz_ppow(p, prec);
    mpz_powm(t.get_mpz_t(), t.get_mpz_t(), e.get_mpz_t(), P.get_mpz_t());
    return t;
}

}  // namespace

mpz_class padic_gamma(i64 p, const mpq_class& x, int M)
{
    if (M < 1)
        throw DomainError("padic_gamma: precision must be at least 1");
    if (p == 2 || !is_prime(p))
        throw DomainError("padic_gamma: needs an odd prime");
    mpz_class P = mpz_ppow(p, M);
    mpz_class den = x.get_den();
    if (den % p == 0)
        throw DomainError("padic_gamma: argument is not in Z_p");
    mpz_class dinv;
    if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t()) == 0)
        throw InternalError("padic_gamma: denominator not invertible");
    mpz_class n = pmod(x.get_num() * dinv, P);
    mpz_class K = n / p;
    i64 r = mpz_class(n % p).get_si();
    std::size_t deg = static_cast<std::size_t>(M);
    // H_L(u) = prod_{k<L} f(u + p k), f(y) = prod_{j<p} (y + j)
    Poly H(deg, 0);
    H[0] = 1;
    mpz_class L = 0;
    std::size_t bits = mpz_sizeinbase(K.get_mpz_t(), 2);
    if (K == 0)
        bits = 0;
    for (std::size_t b = bits; b-- > 0;) {
        if (L > 0) {
            H = poly_mul(H, poly_shift(H, pmod(p * L, P), deg, P), deg, P);
            L *= 2;
        }
        if (mpz_tstbit(K.get_mpz_t(), b)) {
            H = poly_mul(H, block(p, pmod(p * L, P), deg, P), deg, P);
            L += 1;
        }
    }
    mpz_class prod = H[0];
    for (i64 j = 1; j < r; ++j)
        prod = pmod(prod * (K * p + j), P);
    if (mpz_odd_p(n.get_mpz_t()))
        prod = pmod(-prod, P);
    return prod;
}

bool fixed_by_zeta_p_galois(const Cyclotomic& x, i64 p)
{
    i64 m = x.modulus();
    if (m % p != 0)
        return true;
    i64 mp = m / p;
    if (mp % p == 0)
        return false;
    i64 g = smallest_primitive_root(p);
    // c = 1 mod m/p, c = g mod p
    i64 c = mod(1 + mp * mulmod(mod(g - 1, p), invmod(mp % p, p), p), m);
    return x.galois(c) == x;
}

mpz_class teichmuller_embed(const Cyclotomic& x, i64 p, int prec, i64 u)
{
    i64 m = x.modulus();
    i64 mp = m % p == 0 ? m / p : m;
    if ((p - 1) % mp != 0)
        throw DomainError("teichmuller_embed: element is not in Q(zeta_p, zeta_{p-1})");
    mpz_class P = mpz_ppow(p, prec);
    mpz_class T = teichmuller(smallest_primitive_root(p), p, prec);
    mpz_class inv_pm1;
    mpz_class pm1 = p - 1;
    mpz_invert(inv_pm1.get_mpz_t(), pm1.get_mpz_t(), P.get_mpz_t());
    mpz_class acc = 0;
    for (const auto& [k, c] : x.terms()) {
        i64 A = 0, B = k;
        if (m % p == 0) {
            A = mulmod(k % p, invmod(mp % p, p), p);
            B = mp == 1 ? 0 : mulmod(k % mp, invmod(p % mp, mp), mp);
        }
        i64 ex = mod(B * ((p - 1) / mp) % (p - 1) * mod(u, p - 1), p - 1);
        mpz_class t;
        mpz_class e = ex;
        mpz_powm(t.get_mpz_t(), T.get_mpz_t(), e.get_mpz_t(), P.get_mpz_t());
        mpz_class term = c * t;
        if (A != 0)
            term = -term * inv_pm1;
        acc = pmod(acc + term, P);
    }
    mpz_class den = x.denominator();
    if (den % p == 0)
        throw DomainError("teichmuller_embed: denominator divisible by p");
    mpz_class dinv;
    mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t());
    return pmod(acc * dinv, P);
}

std::vector<i64> matching_embeddings(const Cyclotomic& x, i64 p, const mpz_class& target, int prec)
{
    mpz_class P = mpz_ppow(p, prec);
    std::vector<i64> out;
    for (i64 u = 1; u < p - 1 || u == 1; ++u) {
        if (std::gcd(u, p - 1) != 1)
            continue;
        if (teichmuller_embed(x, p, prec, u) == pmod(target, P))
            out.push_back(u);
    }
    return out;
}

mpz_class gamma_monomial(i64 p, int s, const std::vector<std::pair<mpq_class, int>>& factors, int M)
{
    if (s < 0)
        throw DomainError("gamma_monomial: negative power of -p");
    int prec = M + s;
    mpz_class P = mpz_ppow(p, prec);
    mpz_class acc = 1;
    for (const auto& [q, e] : factors) {
        mpz_class g = padic_gamma(p, q, prec);
        if (e < 0) {
            mpz_class inv;
            if (mpz_invert(inv.get_mpz_t(), g.get_mpz_t(), P.get_mpz_t()) == 0)
                throw InternalError("gamma_monomial: Gamma_p value is not a unit");
            g = inv;
        }
        mpz_class t;
        mpz_class ee = std::abs(e);
        mpz_powm(t.get_mpz_t(), g.get_mpz_t(), ee.get_mpz_t(), P.get_mpz_t());
        acc = pmod(acc * t, P);
    }
    mpz_class mp = -p;
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), mp.get_mpz_t(), static_cast<unsigned long>(s));
    return pmod(acc * pw, P);
}

GrossKoblitzReport gross_koblitz_eval(i64 p, i64 k, i64 a, int M)
{
    if (k < 2 || (p - 1) % k != 0)
        throw DomainError("gross_koblitz_eval: k must divide p - 1");
    if (a < 1 || a >= k)
        throw DomainError("gross_koblitz_eval: a must lie in 1..k-1");
    GrossKoblitzReport rep;
    rep.p = p;
    rep.k = k;
    rep.a = a;
    rep.M = M;
    i64 s = a * (p - 1) / k;
    rep.expected_valuation = s;
    Cyclotomic G = gauss_sum(prime_field_char(p, s));
    rep.abs_squared_ok = G * G.conj() == Cyclotomic(static_cast<long>(p));
    Cyclotomic Gp = G.pow(p - 1);
    if (!fixed_by_zeta_p_galois(Gp, p))
        throw InternalError("gross_koblitz_eval: G^(p-1) is not in Q(zeta_{p-1})");
    int prec = M + static_cast<int>(s);
    mpz_class P = mpz_ppow(p, prec), PM = mpz_ppow(p, M);
    mpz_class gam = padic_gamma(p, mpq_class(a, k), prec);
    mpz_class rhs;
    mpz_class pm1 = p - 1;
    mpz_powm(rhs.get_mpz_t(), gam.get_mpz_t(), pm1.get_mpz_t(), PM.get_mpz_t());
    if (s % 2 == 1)
        rhs = pmod(-rhs, PM);
    rep.valuation = -1;
    for (i64 u = 1; u < p - 1 || u == 1; ++u) {
        if (std::gcd(u, p - 1) != 1)
            continue;
        mpz_class e = teichmuller_embed(Gp, p, prec, u);
        i64 v = 0;
        mpz_class t = e;
        while (t != 0 && t % p == 0 && v < prec) {
            t /= p;
            ++v;
        }
        if (e == 0)
            v = prec;
        // chi(g) = zeta^s pairs with the Teichmuller character omega^-s
        if (u == p - 2 || p == 3)
            rep.valuation = v;
        if (v == s && pmod(t, PM) == rhs)
            rep.matching_u.push_back(u);
    }
    return rep;
}

}  // namespace symsq
