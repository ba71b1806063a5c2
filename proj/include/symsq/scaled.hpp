#pragma once

#include <complex>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <gmpxx.h>

#include "symsq/cyclotomic.hpp"

namespace symsq {

// p^e * z * (monomial in named symbols), with e rational and z cyclotomic.
// Symbols stand for quantities the caller did not make concrete (a_p,
// omega(p), kappa(pi), the p^-s of Weil-Deligne factors, ...). Symbols
// registered as signs take values in {+1, -1}, so their exponents are kept
// mod 2.
class ScaledAlgebraic {
public:
    ScaledAlgebraic();  // the value 1
    ScaledAlgebraic(long v);  // NOLINT
    ScaledAlgebraic(const mpq_class& q);  // NOLINT
    ScaledAlgebraic(const Cyclotomic& c);  // NOLINT

    static ScaledAlgebraic zero();
    static ScaledAlgebraic p_power(i64 p, const mpq_class& e);
    static ScaledAlgebraic root(const Turn& t);
    static ScaledAlgebraic symbol(const std::string& name, long e = 1);
    static ScaledAlgebraic sign_symbol(const std::string& name, long e = 1);

    i64 prime() const { return p_; }
    const mpq_class& p_exponent() const { return pe_; }
    const Cyclotomic& scalar() const { return z_; }
    const std::map<std::string, long>& symbols() const { return syms_; }
    bool has_symbols() const { return !syms_.empty(); }
    bool is_zero() const { return z_.is_zero(); }

    ScaledAlgebraic operator*(const ScaledAlgebraic& o) const;
    ScaledAlgebraic operator/(const ScaledAlgebraic& o) const;
    ScaledAlgebraic operator-() const;
    ScaledAlgebraic& operator*=(const ScaledAlgebraic& o) { return *this = *this * o; }
    ScaledAlgebraic inverse() const;
    ScaledAlgebraic pow(long e) const;
    // Complex conjugate; symbols are left untouched.
    ScaledAlgebraic conj() const;

    // Sum of two values with identical p-exponent and symbol parts.
    ScaledAlgebraic operator+(const ScaledAlgebraic& o) const;

    bool operator==(const ScaledAlgebraic& o) const;
    bool operator!=(const ScaledAlgebraic& o) const { return !(*this == o); }

    ScaledAlgebraic substitute(const std::string& name, const ScaledAlgebraic& v) const;
    ScaledAlgebraic substitute(const std::map<std::string, ScaledAlgebraic>& vals) const;

    // |x|^2 for symbol-free values.
    ScaledAlgebraic abs_squared() const;
    std::complex<long double> to_complex() const;
    // Same value with the scalar reduced to a root of unity times a p-free
    // rational whenever that is possible.
    ScaledAlgebraic normalized() const;
    std::string str() const;

private:
    i64 p_ = 0;
    mpq_class pe_ = 0;
    Cyclotomic z_ = Cyclotomic(1L);
    std::map<std::string, long> syms_;
    std::set<std::string> signs_;

    void clean();
    std::string str_raw() const;
    // (fractional exponent in [0,1), scalar absorbing the rest)
    std::pair<mpq_class, Cyclotomic> canonical() const;
};

std::string format_scalar(const Cyclotomic& z);

// A square root of a monomial value (root of unity times a rational square,
// a power of p and even symbol exponents); nullopt otherwise.
std::optional<ScaledAlgebraic> sqrt_monomial(const ScaledAlgebraic& x);

}  // namespace symsq
