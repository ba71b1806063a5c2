#include "symsq/scaled.hpp"

#include <cmath>
#include <sstream>

#include "symsq/errors.hpp"

namespace symsq {

namespace {

mpz_class floor_q(const mpq_class& q)
{
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Cyclotomic p_int_power(i64 p, const mpz_class& e)
{
    if (e == 0)
        return Cyclotomic(1L);
    mpz_class base;
    mpz_ui_pow_ui(base.get_mpz_t(), static_cast<unsigned long>(p), mpz_class(abs(e)).get_ui());
    mpq_class q = e > 0 ? mpq_class(base) : mpq_class(1, base);
    q.canonicalize();
    return Cyclotomic(q);
}

}  // namespace

ScaledAlgebraic::ScaledAlgebraic() = default;

ScaledAlgebraic::ScaledAlgebraic(long v) : z_(Cyclotomic(v)) {}

ScaledAlgebraic::ScaledAlgebraic(const mpq_class& q) : z_(Cyclotomic(q)) {}

ScaledAlgebraic::ScaledAlgebraic(const Cyclotomic& c) : z_(c) {}

ScaledAlgebraic ScaledAlgebraic::zero()
{
    return ScaledAlgebraic(0L);
}

ScaledAlgebraic ScaledAlgebraic::p_power(i64 p, const mpq_class& e)
{
    ScaledAlgebraic r;
    r.p_ = p;
    r.pe_ = e;
    r.pe_.canonicalize();
    r.clean();
    return r;
}

ScaledAlgebraic ScaledAlgebraic::root(const Turn& t)
{
    return ScaledAlgebraic(Cyclotomic::root(t));
}

ScaledAlgebraic ScaledAlgebraic::symbol(const std::string& name, long e)
{
    ScaledAlgebraic r;
    if (e != 0)
        r.syms_[name] = e;
    return r;
}

ScaledAlgebraic ScaledAlgebraic::sign_symbol(const std::string& name, long e)
{
    ScaledAlgebraic r;
    r.signs_.insert(name);
    if (e % 2 != 0)
        r.syms_[name] = 1;
    return r;
}

void ScaledAlgebraic::clean()
{
    for (auto it = syms_.begin(); it != syms_.end();) {
        if (signs_.count(it->first))
            it->second = ((it->second % 2) + 2) % 2;
        if (it->second == 0)
            it = syms_.erase(it);
        else
            ++it;
    }
    if (pe_ == 0 && p_ != 0)
        p_ = 0;
}

ScaledAlgebraic ScaledAlgebraic::operator*(const ScaledAlgebraic& o) const
{
    ScaledAlgebraic r;
    if (p_ != 0 && o.p_ != 0 && p_ != o.p_)
        throw DomainError("ScaledAlgebraic: mixing powers of different primes");
    r.p_ = p_ != 0 ? p_ : o.p_;
    r.pe_ = pe_ + o.pe_;
    r.z_ = z_ * o.z_;
    r.syms_ = syms_;
    r.signs_ = signs_;
    r.signs_.insert(o.signs_.begin(), o.signs_.end());
    for (const auto& [k, e] : o.syms_)
        r.syms_[k] += e;
    r.clean();
    return r;
}

ScaledAlgebraic ScaledAlgebraic::inverse() const
{
    ScaledAlgebraic r = *this;
    r.pe_ = -pe_;
    r.z_ = z_.inverse();
    for (auto& kv : r.syms_)
        kv.second = -kv.second;
    r.clean();
    return r;
}

ScaledAlgebraic ScaledAlgebraic::operator/(const ScaledAlgebraic& o) const
{
    return *this * o.inverse();
}

ScaledAlgebraic ScaledAlgebraic::operator-() const
{
    ScaledAlgebraic r = *this;
    r.z_ = -z_;
    return r;
}

ScaledAlgebraic ScaledAlgebraic::pow(long e) const
{
    if (e < 0)
        return inverse().pow(-e);
    ScaledAlgebraic r = *this;
    r.pe_ = pe_ * e;
    r.z_ = z_.pow(e);
    for (auto& kv : r.syms_)
        kv.second *= e;
    r.clean();
    return r;
}

ScaledAlgebraic ScaledAlgebraic::conj() const
{
    ScaledAlgebraic r = *this;
    r.z_ = z_.conj();
    return r;
}

ScaledAlgebraic ScaledAlgebraic::operator+(const ScaledAlgebraic& o) const
{
    if (z_.is_zero())
        return o;
    if (o.z_.is_zero())
        return *this;
    if (syms_ != o.syms_)
        throw DomainError("ScaledAlgebraic: adding values with different symbol parts");
    auto [fa, za] = canonical();
    auto [fb, zb] = o.canonical();
    if (fa != fb)
        throw DomainError("ScaledAlgebraic: adding values with incompatible powers of p");
    ScaledAlgebraic r = *this;
    r.pe_ = fa;
    r.p_ = fa == 0 ? 0 : (p_ != 0 ? p_ : o.p_);
    r.z_ = za + zb;
    r.signs_.insert(o.signs_.begin(), o.signs_.end());
    r.clean();
    return r;
}

std::pair<mpq_class, Cyclotomic> ScaledAlgebraic::canonical() const
{
    if (p_ == 0 || pe_ == 0)
        return {mpq_class(0), z_};
    mpz_class whole = floor_q(pe_);
    mpq_class frac = pe_ - mpq_class(whole);
    Cyclotomic z = z_ * p_int_power(p_, whole);
    if (frac == mpq_class(1, 2)) {
        z = z * Cyclotomic::sqrt_prime(p_);
        frac = 0;
    }
    return {frac, z};
}

bool ScaledAlgebraic::operator==(const ScaledAlgebraic& o) const
{
    if (z_.is_zero() || o.z_.is_zero())
        return z_.is_zero() && o.z_.is_zero();
    if (syms_ != o.syms_)
        return false;
    auto [fa, za] = canonical();
    auto [fb, zb] = o.canonical();
    if (fa != fb)
        return false;
    if (fa != 0 && p_ != o.p_)
        return false;
    return za == zb;
}

ScaledAlgebraic ScaledAlgebraic::substitute(const std::string& name, const ScaledAlgebraic& v) const
{
    auto it = syms_.find(name);
    if (it == syms_.end())
        return *this;
    ScaledAlgebraic r = *this;
    long e = it->second;
    r.syms_.erase(name);
    r.signs_.erase(name);
    return r * v.pow(e);
}

ScaledAlgebraic ScaledAlgebraic::substitute(const std::map<std::string, ScaledAlgebraic>& vals) const
{
    ScaledAlgebraic r = *this;
    for (const auto& [k, v] : vals)
        r = r.substitute(k, v);
    return r;
}

ScaledAlgebraic ScaledAlgebraic::abs_squared() const
{
    if (has_symbols())
        throw DomainError("ScaledAlgebraic::abs_squared: value has symbols");
    return *this * conj();
}

std::complex<long double> ScaledAlgebraic::to_complex() const
{
    if (has_symbols())
        throw DomainError("ScaledAlgebraic::to_complex: value has symbols");
    long double scale = p_ == 0 ? 1.0L
                                : std::pow(static_cast<long double>(p_), static_cast<long double>(pe_.get_d()));
    return z_.to_complex() * scale;
}

std::string format_scalar(const Cyclotomic& z)
{
    if (z.is_zero())
        return "0";
    if (auto q = z.as_rational())
        return q->get_str();
    if (auto m = z.as_monomial()) {
        auto [r, t] = *m;
        std::string unit;
        if (t == Turn(1, 4))
            unit = "i";
        else if (t == Turn(3, 4))
            unit = "-i";
        else
            unit = "zeta" + std::to_string(t.den) + "^" + std::to_string(t.num);
        if (r == 1)
            return unit;
        return r.get_str() + "*" + unit;
    }
    return "(" + z.str() + ")";
}

ScaledAlgebraic ScaledAlgebraic::normalized() const
{
    if (z_.is_zero() || p_ == 0)
        return *this;
    auto [frac, z] = canonical();
    auto m = z.as_monomial();
    if (!m)
        return *this;
    mpz_class num = m->first.get_num(), den = m->first.get_den(), P = p_;
    long v = 0;
    while (num % P == 0) {
        num /= P;
        ++v;
    }
    while (den % P == 0) {
        den /= P;
        --v;
    }
    ScaledAlgebraic r = *this;
    r.pe_ = frac + v;
    r.z_ = Cyclotomic::root(m->second, mpq_class(num, den));
    r.clean();
    return r;
}

std::string ScaledAlgebraic::str() const
{
    if (z_.is_zero())
        return "0";
    if (p_ != 0) {
        ScaledAlgebraic n = normalized();
        if (n.pe_ != pe_ || !(n.z_ == z_))
            return n.str_raw();
    }
    return str_raw();
}

std::string ScaledAlgebraic::str_raw() const
{
    std::ostringstream os;
    std::string s = format_scalar(z_);
    bool first = true;
    auto put = [&](const std::string& part) {
        if (!first)
            os << "*";
        os << part;
        first = false;
    };
    if (p_ != 0 && pe_ != 0) {
        if (s == "-1") {
            os << "-";
            s = "1";
        }
        put(std::to_string(p_) + "^(" + pe_.get_str() + ")");
        if (s != "1")
            put(s);
    } else if (s != "1" || syms_.empty()) {
        if (s == "-1" && !syms_.empty())
            os << "-";
        else
            put(s);
    }
    for (const auto& [k, e] : syms_)
        put(e == 1 ? k : k + "^" + std::to_string(e));
    return os.str();
}

std::optional<ScaledAlgebraic> sqrt_monomial(const ScaledAlgebraic& x)
{
    auto mono = x.scalar().as_monomial();
    if (!mono)
        return std::nullopt;
    mpz_class n = mono->first.get_num(), d = mono->first.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        return std::nullopt;
    mpz_class rn = sqrt(n), rd = sqrt(d);
    ScaledAlgebraic r = ScaledAlgebraic(mpq_class(rn, rd)) *
                        ScaledAlgebraic::root(Turn(mono->second.num, 2 * mono->second.den));
    if (x.prime() != 0 && x.p_exponent() != 0)
        r *= ScaledAlgebraic::p_power(x.prime(), x.p_exponent() / 2);
    for (const auto& [name, e] : x.symbols()) {
        if (e % 2 != 0)
            return std::nullopt;
        r *= ScaledAlgebraic::symbol(name, e / 2);
    }
    return r;
}

}  // namespace symsq
