#include "symsq/numtheory.hpp"

#include "symsq/errors.hpp"

namespace symsq {

i64 mod(i64 a, i64 m)
{
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

i64 mulmod(i64 a, i64 b, i64 m)
{
    return static_cast<i64>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

i64 powmod(i64 b, i64 e, i64 m)
{
    if (e < 0)
        return powmod(invmod(b, m), -e, m);
    i64 r = 1 % m;
    b = mod(b, m);
    while (e > 0) {
        if (e & 1)
            r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

i64 invmod(i64 a, i64 m)
{
    i64 g = m, x = 0, x1 = 1, a1 = mod(a, m);
    while (a1 != 0) {
        i64 q = g / a1;
        i64 t = g - q * a1;
        g = a1;
        a1 = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1)
        throw DomainError("invmod: " + std::to_string(a) + " is not invertible mod " + std::to_string(m));
    return mod(x, m);
}

i64 ipow(i64 b, int e)
{
    i64 r = 1;
    for (int i = 0; i < e; ++i)
        r *= b;
    return r;
}

i64 lcm64(i64 a, i64 b)
{
    return a / std::gcd(a, b) * b;
}

bool is_prime(i64 n)
{
    if (n < 2)
        return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

std::vector<i64> prime_factors(i64 n)
{
    std::vector<i64> out;
    for (i64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0)
                n /= d;
        }
    }
    if (n > 1)
        out.push_back(n);
    return out;
}

i64 euler_phi(i64 n)
{
    i64 r = n;
    for (i64 q : prime_factors(n))
        r = r / q * (q - 1);
    return r;
}

i64 radical(i64 n)
{
    i64 r = 1;
    for (i64 q : prime_factors(n))
        r *= q;
    return r;
}

int valuation(i64 x, i64 p)
{
    if (x == 0)
        throw DomainError("valuation of zero");
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

i64 mult_order(i64 a, i64 m)
{
    i64 n = euler_phi(m);
    i64 ord = n;
    for (i64 q : prime_factors(n))
        while (ord % q == 0 && powmod(a, ord / q, m) == 1)
            ord /= q;
    return ord;
}

i64 smallest_primitive_root(i64 p)
{
    if (p == 2)
        return 1;
    for (i64 g = 2; g < p; ++g)
        if (mult_order(g, p) == p - 1)
            return g;
    throw DomainError("no primitive root for " + std::to_string(p));
}

i64 unit_generator(i64 p)
{
    i64 g = smallest_primitive_root(p);
    if (powmod(g, p - 1, p * p) == 1)
        g += p;
    return g;
}

Turn::Turn(i64 n, i64 d)
{
    if (d <= 0)
        throw DomainError("Turn with nonpositive denominator");
    n = mod(n, d);
    i64 g = std::gcd(n, d);
    if (g == 0)
        g = d;
    num = n / g;
    den = d / g;
}

Turn Turn::operator+(const Turn& o) const
{
    i64 l = lcm64(den, o.den);
    return Turn(num * (l / den) + o.num * (l / o.den), l);
}

Turn Turn::operator-(const Turn& o) const
{
    return *this + (-o);
}

Turn Turn::operator-() const
{
    return Turn(-num, den);
}

Turn Turn::operator*(i64 k) const
{
    return Turn(mulmod(num, k, den), den);
}

bool Turn::operator<(const Turn& o) const
{
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

std::string Turn::str() const
{
    return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace symsq
