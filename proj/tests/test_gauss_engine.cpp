#include "doctest.h"

#include <random>

#include "symsq/errors.hpp"
#include "symsq/gauss_engine.hpp"

using namespace symsq;

namespace {

// Gamma_p(n) for a small positive integer n straight from the product.
mpz_class gamma_direct(i64 p, i64 n, const mpz_class& P)
{
    mpz_class r = 1;
    for (i64 j = 1; j < n; ++j)
        if (j % p != 0)
            r = r * j % P;
    if (n % 2 == 1)
        r = (P - r) % P;
    return r;
}

mpz_class pw(i64 p, int M)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(M));
    return r;
}

mpz_class md(const mpz_class& x, const mpz_class& P)
{
    mpz_class r = x % P;
    return r < 0 ? r + P : r;
}

}  // namespace

TEST_CASE("finite fields")
{
    for (auto [p, r] : std::vector<std::pair<i64, int>>{{2, 3}, {3, 2}, {5, 2}, {7, 2}, {3, 3}}) {
        auto F = FiniteField::get(p, r);
        // t generates: its powers hit every nonzero element once
        std::vector<int> hit(F->size(), 0);
        for (i64 k = 0; k < F->size() - 1; ++k)
            ++hit[F->exp(k)];
        for (i64 x = 1; x < F->size(); ++x)
            CHECK(hit[x] == 1);
        // trace is additive and norm multiplicative
        for (i64 x = 1; x < F->size(); x += 3)
            for (i64 y = 1; y < F->size(); y += 5) {
                CHECK(F->trace(F->add(x, y)) == mod(F->trace(x) + F->trace(y), p));
                CHECK(F->norm(F->mul(x, y)) == F->norm(x) * F->norm(y) % p);
            }
    }
}

TEST_CASE("gauss sums")
{
    CHECK(gauss_sum(prime_field_char(5, 0)) == Cyclotomic(-1L));
    Cyclotomic g5 = gauss_sum(prime_field_char(5, 2));
    CHECK(g5 * g5 == Cyclotomic(5L));
    CHECK(g5 == Cyclotomic::sqrt_prime(5));
    Cyclotomic g3 = gauss_sum(prime_field_char(3, 1));
    CHECK(g3 * g3 == Cyclotomic(-3L));
    CHECK(g3 == Cyclotomic::zeta(3, 1) - Cyclotomic::zeta(3, 2));
    for (i64 p : {2, 3, 5, 7, 11, 13})
        for (int r : {1, 2}) {
            auto F = FiniteField::get(p, r);
            for (i64 k = 1; k < F->size() - 1; ++k) {
                Cyclotomic g = gauss_sum(FFChar{F, k});
                CHECK(g * g.conj() == Cyclotomic(static_cast<long>(F->size())));
            }
        }
    CHECK_THROWS_AS(gauss_sum(prime_field_char(5, 1), 0), DomainError);
}

TEST_CASE("Davenport-Hasse lifting")
{
    for (i64 p : {2, 3, 5, 7})
        for (int r : {2, 3})
            for (i64 k = 0; k < p - 1; ++k) {
                auto rep = davenport_hasse_check(p, k, r);
                CHECK(rep.corrected_holds);
            }
    auto a = davenport_hasse_check(3, 1, 2);
    CHECK(a.corrected_holds);
    CHECK(!a.printed_holds);
    auto t = davenport_hasse_check(5, 0, 2);
    CHECK(t.lifted == Cyclotomic(-1L));
}

TEST_CASE("p-adic gamma")
{
    mpz_class P = pw(5, 20);
    CHECK(padic_gamma(5, 1, 20) == P - 1);
    CHECK(padic_gamma(5, 2, 20) == 1);
    CHECK(padic_gamma(5, 0, 20) == 1);
    for (i64 p : {3, 5, 7})
        for (i64 n = 0; n < 200; ++n)
            CHECK(padic_gamma(p, n, 6) == gamma_direct(p, n, pw(p, 6)));
    // Gamma_5(1/2)^2 = -1
    mpz_class h = padic_gamma(5, mpq_class(1, 2), 20);
    CHECK(md(h * h, P) == P - 1);
    CHECK_THROWS_AS(padic_gamma(5, mpq_class(1, 5), 10), DomainError);
    CHECK_THROWS_AS(padic_gamma(5, 1, 0), DomainError);
}

TEST_CASE("p-adic gamma functional equation and reflection")
{
    std::mt19937_64 rng(7);
    for (i64 p : {5, 7}) {
        int M = 12;
        mpz_class P = pw(p, M);
        for (int it = 0; it < 100; ++it) {
            i64 num = static_cast<i64>(rng() % 100000), den = 1 + static_cast<i64>(rng() % 40);
            if (den % p == 0)
                continue;
            mpq_class x(num, den);
            x.canonicalize();
            mpz_class g0 = padic_gamma(p, x, M), g1 = padic_gamma(p, x + 1, M);
            // x is a unit iff num is prime to p
            mpz_class xm = md(mpz_class(num) * [&] {
                mpz_class inv, d = den;
                mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), P.get_mpz_t());
                return inv;
            }(), P);
            mpz_class h = num % p != 0 ? md(-xm, P) : P - 1;
            CHECK(g1 == md(h * g0, P));
            // Gamma(x) Gamma(1 - x) = (-1)^R, R in 1..p with R = x mod p
            mpz_class g2 = padic_gamma(p, 1 - x, M);
            i64 R = mpz_class(xm % p).get_si();
            if (R == 0)
                R = p;
            CHECK(md(g0 * g2, P) == (R % 2 == 0 ? mpz_class(1) : P - 1));
        }
    }
}

TEST_CASE("Gross-Koblitz")
{
    for (i64 p : {5, 7})
        for (i64 k = 2; k < p; ++k) {
            if ((p - 1) % k != 0)
                continue;
            for (i64 a = 1; a < k; ++a) {
                auto rep = gross_koblitz_eval(p, k, a, 20);
                CHECK(rep.ok());
                CHECK(rep.valuation == a * (p - 1) / k);
            }
        }
    auto r = gross_koblitz_eval(5, 2, 1, 20);
    CHECK(r.expected_valuation == 2);
    CHECK(gross_koblitz_eval(7, 3, 1, 10).abs_squared_ok);
    CHECK_THROWS_AS(gross_koblitz_eval(7, 4, 1, 10), DomainError);
}
