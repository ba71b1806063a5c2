#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace symsq {

using i64 = std::int64_t;

i64 mod(i64 a, i64 m);
i64 mulmod(i64 a, i64 b, i64 m);
i64 powmod(i64 b, i64 e, i64 m);
i64 invmod(i64 a, i64 m);
i64 ipow(i64 b, int e);
i64 lcm64(i64 a, i64 b);

bool is_prime(i64 n);
std::vector<i64> prime_factors(i64 n);
i64 euler_phi(i64 n);
i64 radical(i64 n);

// Exponent of p in x (x != 0).
int valuation(i64 x, i64 p);

// Multiplicative order of a modulo m (gcd(a, m) = 1).
i64 mult_order(i64 a, i64 m);

// Smallest primitive root modulo the odd prime p.
i64 smallest_primitive_root(i64 p);

// Generator of (Z/p^k)^x for every k >= 1: the smallest primitive root g
// mod p, replaced by g + p when g^(p-1) = 1 mod p^2.
i64 unit_generator(i64 p);

// A root of unity exp(2 pi i num/den), kept reduced with 0 <= num < den.
struct Turn {
    i64 num = 0;
    i64 den = 1;

    Turn() = default;
    Turn(i64 n, i64 d);

    bool is_one() const { return num == 0; }
    Turn operator+(const Turn& o) const;
    Turn operator-(const Turn& o) const;
    Turn operator-() const;
    Turn operator*(i64 k) const;
    bool operator==(const Turn& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Turn& o) const { return !(*this == o); }
    bool operator<(const Turn& o) const;
    std::string str() const;
};

}  // namespace symsq
