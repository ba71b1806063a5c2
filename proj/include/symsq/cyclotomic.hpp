#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "symsq/numtheory.hpp"

namespace symsq {

// Exact element of Q(zeta_m), stored as an integer combination of powers of
// zeta_m over a common positive denominator. The representation is not
// unique (the powers are linearly dependent); equality reduces modulo the
// m-th cyclotomic polynomial. zeta_m embeds as exp(2 pi i / m).
class Cyclotomic {
public:
    Cyclotomic();
    Cyclotomic(long v);  // NOLINT: integers convert implicitly
    Cyclotomic(const mpq_class& q);  // NOLINT

    static Cyclotomic root(const Turn& t, const mpq_class& coeff = 1);
    static Cyclotomic zeta(i64 m, i64 k = 1);
    static Cyclotomic i();
    // Positive real square root of the prime p.
    static Cyclotomic sqrt_prime(i64 p);
    // Sum of roots of unity with integer multiplicities.
    static Cyclotomic from_counts(const std::map<Turn, i64>& counts);

    i64 modulus() const { return m_; }
    std::size_t term_count() const { return terms_.size(); }

    Cyclotomic operator+(const Cyclotomic& o) const;
    Cyclotomic operator-(const Cyclotomic& o) const;
    Cyclotomic operator-() const;
    Cyclotomic operator*(const Cyclotomic& o) const;
    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }
    Cyclotomic scaled(const mpq_class& q) const;
    Cyclotomic pow(i64 e) const;

    // Complex conjugate; equals galois(-1).
    Cyclotomic conj() const;
    // The automorphism zeta -> zeta^t, gcd(t, m) = 1.
    Cyclotomic galois(i64 t) const;
    // Inverse; supported for r * zeta^k and for small fields.
    Cyclotomic inverse() const;

    bool is_zero() const;
    bool operator==(const Cyclotomic& o) const;
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

    std::complex<long double> to_complex() const;
    std::optional<mpq_class> as_rational() const;
    // r * exp(2 pi i t) with r > 0 rational, when the element has that form.
    std::optional<std::pair<mpq_class, Turn>> as_monomial() const;
    // Coefficients on 1, zeta, ..., zeta^(phi(m)-1) after reduction.
    std::vector<mpq_class> reduced() const;
    Cyclotomic lifted(i64 m) const;
    std::string str() const;

    // Raw access: pairs (k, c) meaning (c / denominator()) * zeta_m^k.
    const std::vector<std::pair<i64, mpz_class>>& terms() const { return terms_; }
    const mpz_class& denominator() const { return den_; }

private:
    i64 m_ = 1;
    std::vector<std::pair<i64, mpz_class>> terms_;
    mpz_class den_ = 1;

    void normalize();
    std::vector<mpz_class> dense_numerators(i64 m) const;
    static Cyclotomic from_dense(i64 m, std::vector<mpz_class> v, const mpz_class& den);
};

// Sparse monic cyclotomic polynomial Phi_m as (exponent, coefficient) pairs.
const std::vector<std::pair<i64, i64>>& cyclotomic_polynomial(i64 m);

}  // namespace symsq
