#include "symsq/cyclotomic.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "symsq/errors.hpp"

namespace symsq {

namespace {

std::vector<i64> poly_div_exact(const std::vector<i64>& a, const std::vector<i64>& b)
{
    // b monic; returns a / b
    std::vector<i64> r = a;
    std::size_t db = b.size() - 1;
    std::vector<i64> q(a.size() - db, 0);
    for (std::size_t i = a.size(); i-- > db;) {
        i64 c = r[i];
        q[i - db] = c;
        if (c != 0)
            for (std::size_t k = 0; k <= db; ++k)
                r[i - db + k] -= c * b[k];
    }
    return q;
}

std::vector<i64> cyclotomic_squarefree(i64 rad)
{
    std::vector<i64> poly = {-1, 1};
    for (i64 q : prime_factors(rad)) {
        std::vector<i64> up((poly.size() - 1) * q + 1, 0);
        for (std::size_t k = 0; k < poly.size(); ++k)
            up[k * q] = poly[k];
        poly = poly_div_exact(up, poly);
    }
    return poly;
}

}  // namespace

const std::vector<std::pair<i64, i64>>& cyclotomic_polynomial(i64 m)
{
    static std::mutex mu;
    static std::map<i64, std::vector<std::pair<i64, i64>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end())
        return it->second;
    i64 rad = radical(m);
    i64 stretch = m / rad;
    std::vector<i64> base = m == 1 ? std::vector<i64>{-1, 1} : cyclotomic_squarefree(rad);
    std::vector<std::pair<i64, i64>> sparse;
    for (std::size_t k = 0; k < base.size(); ++k)
        if (base[k] != 0)
            sparse.emplace_back(static_cast<i64>(k) * stretch, base[k]);
    return cache.emplace(m, std::move(sparse)).first->second;
}

Cyclotomic::Cyclotomic() = default;

Cyclotomic::Cyclotomic(long v)
{
    if (v != 0)
        terms_.emplace_back(0, mpz_class(v));
}

Cyclotomic::Cyclotomic(const mpq_class& q)
{
    mpq_class c = q;
    c.canonicalize();
    if (c != 0)
        terms_.emplace_back(0, c.get_num());
    den_ = c.get_den();
}

Cyclotomic Cyclotomic::root(const Turn& t, const mpq_class& coeff)
{
    Cyclotomic r(coeff);
    if (r.terms_.empty())
        return r;
    r.m_ = t.den;
    r.terms_[0].first = t.num;
    return r;
}

Cyclotomic Cyclotomic::zeta(i64 m, i64 k)
{
    return root(Turn(k, m));
}

Cyclotomic Cyclotomic::i()
{
    return zeta(4, 1);
}

Cyclotomic Cyclotomic::sqrt_prime(i64 p)
{
    if (p == 2)
        return zeta(8, 1) + zeta(8, 7);
    std::map<Turn, i64> counts;
    for (i64 x = 1; x < p; ++x)
        counts[Turn(x, p)] += powmod(x, (p - 1) / 2, p) == 1 ? 1 : -1;
    Cyclotomic g = from_counts(counts);
    // g^2 = (-1/p) p; for p = 3 mod 4, g = i sqrt(p)
    if (p % 4 == 3)
        g = g * zeta(4, 3);
    return g;
}

Cyclotomic Cyclotomic::from_counts(const std::map<Turn, i64>& counts)
{
    i64 m = 1;
    for (const auto& [t, c] : counts)
        if (c != 0)
            m = lcm64(m, t.den);
    std::vector<mpz_class> v(m);
    for (const auto& [t, c] : counts)
        if (c != 0)
            v[t.num * (m / t.den)] += c;
    return from_dense(m, std::move(v), 1);
}

Cyclotomic Cyclotomic::from_dense(i64 m, std::vector<mpz_class> v, const mpz_class& den)
{
    Cyclotomic r;
    r.m_ = m;
    r.den_ = den;
    for (i64 k = 0; k < m; ++k)
        if (v[k] != 0)
            r.terms_.emplace_back(k, std::move(v[k]));
    r.normalize();
    return r;
}

void Cyclotomic::normalize()
{
    if (terms_.empty()) {
        m_ = 1;
        den_ = 1;
        return;
    }
    mpz_class g = den_;
    for (const auto& t : terms_)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.second.get_mpz_t());
    if (den_ < 0)
        g = -g;
    if (g != 1) {
        for (auto& t : terms_)
            mpz_divexact(t.second.get_mpz_t(), t.second.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
    // shrink the modulus when all exponents share a factor with it
    i64 s = m_;
    for (const auto& t : terms_)
        s = std::gcd(s, t.first);
    if (s > 1) {
        for (auto& t : terms_)
            t.first /= s;
        m_ /= s;
    }
}

std::vector<mpz_class> Cyclotomic::dense_numerators(i64 m) const
{
    std::vector<mpz_class> v(m);
    i64 f = m / m_;
    for (const auto& [k, c] : terms_)
        v[k * f] += c;
    return v;
}

Cyclotomic Cyclotomic::lifted(i64 m) const
{
    if (m % m_ != 0)
        throw DomainError("Cyclotomic::lifted: modulus does not divide target");
    Cyclotomic r = *this;
    i64 f = m / m_;
    for (auto& t : r.terms_)
        t.first *= f;
    r.m_ = m;
    return r;
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const
{
    if (terms_.empty())
        return o;
    if (o.terms_.empty())
        return *this;
    i64 m = lcm64(m_, o.m_);
    mpz_class den = lcm(den_, o.den_);
    mpz_class fa = den / den_, fb = den / o.den_;
    std::map<i64, mpz_class> acc;
    for (const auto& [k, c] : terms_)
        acc[k * (m / m_)] += c * fa;
    for (const auto& [k, c] : o.terms_)
        acc[k * (m / o.m_)] += c * fb;
    Cyclotomic r;
    r.m_ = m;
    r.den_ = den;
    for (auto& [k, c] : acc)
        if (c != 0)
            r.terms_.emplace_back(k, std::move(c));
    r.normalize();
    return r;
}

Cyclotomic Cyclotomic::operator-() const
{
    Cyclotomic r = *this;
    for (auto& t : r.terms_)
        t.second = -t.second;
    return r;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const
{
    return *this + (-o);
}

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const
{
    if (terms_.empty() || o.terms_.empty())
        return Cyclotomic();
    i64 m = lcm64(m_, o.m_);
    i64 fa = m / m_, fb = m / o.m_;
    std::vector<mpz_class> v(m);
    mpz_class tmp;
    for (const auto& [ka, ca] : terms_) {
        i64 base = ka * fa;
        for (const auto& [kb, cb] : o.terms_) {
            i64 k = base + kb * fb;
            if (k >= m)
                k -= m;
            mpz_addmul(v[k].get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
        }
    }
    return from_dense(m, std::move(v), den_ * o.den_);
}

Cyclotomic Cyclotomic::scaled(const mpq_class& q) const
{
    mpq_class c = q;
    c.canonicalize();
    if (c == 0 || terms_.empty())
        return Cyclotomic();
    Cyclotomic r = *this;
    for (auto& t : r.terms_)
        t.second *= c.get_num();
    r.den_ *= c.get_den();
    if (r.den_ < 0) {
        r.den_ = -r.den_;
        for (auto& t : r.terms_)
            t.second = -t.second;
    }
    r.normalize();
    return r;
}

Cyclotomic Cyclotomic::pow(i64 e) const
{
    if (e < 0)
        return inverse().pow(-e);
    Cyclotomic r(1L), b = *this;
    while (e > 0) {
        if (e & 1)
            r = r * b;
        e >>= 1;
        if (e > 0)
            b = b * b;
    }
    return r;
}

Cyclotomic Cyclotomic::conj() const
{
    return galois(-1);
}

Cyclotomic Cyclotomic::galois(i64 t) const
{
    if (std::gcd(mod(t, m_), m_) != 1 && m_ > 1)
        throw DomainError("Cyclotomic::galois: exponent not coprime to modulus");
    Cyclotomic r;
    r.m_ = m_;
    r.den_ = den_;
    std::map<i64, mpz_class> acc;
    for (const auto& [k, c] : terms_)
        acc[mulmod(k, t, m_)] += c;
    for (auto& [k, c] : acc)
        if (c != 0)
            r.terms_.emplace_back(k, std::move(c));
    r.normalize();
    return r;
}

Cyclotomic Cyclotomic::inverse() const
{
    if (terms_.empty())
        throw DomainError("Cyclotomic::inverse of zero");
    if (terms_.size() == 1) {
        const auto& [k, c] = terms_[0];
        mpq_class q(den_, c);
        q.canonicalize();
        return root(Turn(-k, m_), q);
    }
    if (auto mono = as_monomial())
        return root(-mono->second, 1 / mono->first);
    // Gauss sums and epsilon factors have rational absolute square
    Cyclotomic c = conj();
    if (auto n = (c * *this).as_rational(); n && *n != 0)
        return c.scaled(1 / *n);
    i64 deg = euler_phi(m_);
    if (deg > 96)
        throw DomainError("Cyclotomic::inverse: field too large for a norm-based inverse");
    Cyclotomic others(1L);
    for (i64 t = 2; t < m_; ++t)
        if (std::gcd(t, m_) == 1)
            others = others * galois(t);
    auto n = (others * *this).as_rational();
    if (!n || *n == 0)
        throw InternalError("Cyclotomic::inverse: norm is not a nonzero rational");
    return others.scaled(1 / *n);
}

std::vector<mpq_class> Cyclotomic::reduced() const
{
    std::vector<mpz_class> v = dense_numerators(m_);
    const auto& phi = cyclotomic_polynomial(m_);
    i64 deg = phi.back().first;
    mpz_class c;
    for (i64 i = m_ - 1; i >= deg; --i) {
        if (v[i] == 0)
            continue;
        c = v[i];
        for (const auto& [k, b] : phi) {
            if (k == deg)
                continue;
            if (b > 0)
                v[i - deg + k] -= c * b;
            else
                v[i - deg + k] += c * (-b);
        }
        v[i] = 0;
    }
    std::vector<mpq_class> out(deg);
    for (i64 k = 0; k < deg; ++k) {
        out[k] = mpq_class(v[k], den_);
        out[k].canonicalize();
    }
    return out;
}

bool Cyclotomic::is_zero() const
{
    if (terms_.empty())
        return true;
    for (const auto& q : reduced())
        if (q != 0)
            return false;
    return true;
}

bool Cyclotomic::operator==(const Cyclotomic& o) const
{
    return (*this - o).is_zero();
}

std::complex<long double> Cyclotomic::to_complex() const
{
    std::complex<long double> z = 0;
    const long double tau = 2 * std::numbers::pi_v<long double>;
    for (const auto& [k, c] : terms_) {
        long double a = tau * static_cast<long double>(k) / static_cast<long double>(m_);
        z += static_cast<long double>(c.get_d()) * std::complex<long double>(std::cos(a), std::sin(a));
    }
    return z / static_cast<long double>(den_.get_d());
}

std::optional<mpq_class> Cyclotomic::as_rational() const
{
    if (terms_.empty())
        return mpq_class(0);
    auto r = reduced();
    for (std::size_t k = 1; k < r.size(); ++k)
        if (r[k] != 0)
            return std::nullopt;
    return r[0];
}

std::optional<std::pair<mpq_class, Turn>> Cyclotomic::as_monomial() const
{
    if (terms_.empty())
        return std::nullopt;
    if (terms_.size() == 1) {
        const auto& [k, c] = terms_[0];
        mpq_class q(c, den_);
        q.canonicalize();
        Turn t(k, m_);
        if (q < 0) {
            q = -q;
            t = t + Turn(1, 2);
        }
        return std::make_pair(q, t);
    }
    auto z = to_complex();
    if (std::abs(z) < 1e-12L)
        return std::nullopt;
    i64 big = lcm64(m_, 2);
    long double a = std::arg(z) / (2 * std::numbers::pi_v<long double>);
    i64 j = mod(static_cast<i64>(std::llround(a * static_cast<long double>(big))), big);
    Turn t(j, big);
    auto q = (*this * root(-t)).as_rational();
    if (!q || *q <= 0)
        return std::nullopt;
    return std::make_pair(*q, t);
}

std::string Cyclotomic::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    if (den_ != 1)
        os << "(";
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << "-";
        mpz_class a = abs(c);
        if (k == 0) {
            os << a.get_str();
        } else {
            if (a != 1)
                os << a.get_str() << "*";
            os << "z" << m_ << "^" << k;
        }
        first = false;
    }
    if (den_ != 1)
        os << ")/" << den_.get_str();
    return os.str();
}

}  // namespace symsq
