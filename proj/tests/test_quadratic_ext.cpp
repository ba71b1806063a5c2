#include "doctest.h"

#include <set>

#include "symsq/errors.hpp"
#include "symsq/quadratic_ext.hpp"

using namespace symsq;

namespace {

// Conductor of chi o N by scanning all units of O_K mod p^depth.
int kernel_conductor_K(const KChar& c, int depth)
{
    const QuadExt& K = c.field();
    const UnitGroupK& G = UnitGroupK::get(K, depth);
    int top = 0;
    bool any = false;
    for (std::size_t idx : G.units()) {
        OK z = G.element(idx);
        if (!c.unit_value(z).is_one()) {
            any = true;
            top = std::max(top, ok_valuation(K, OK{mod(z.a - 1, G.modulus()), z.b}, depth));
        }
    }
    return any ? top + 1 : 0;
}

std::vector<QuadExt> fields(i64 p)
{
    if (p == 2) {
        std::vector<QuadExt> out;
        for (i64 d : {5, -1, 3, 2, -2, 6, -6})
            out.push_back(make_quad_ext(2, d));
        return out;
    }
    return {make_quad_ext(p, "unramified"), make_quad_ext(p, "-p"), make_quad_ext(p, "-p*zeta")};
}

}  // namespace

TEST_CASE("quadratic extensions")
{
    QuadExt u = make_quad_ext(5, 2);
    CHECK(!u.ramified);
    CHECK(u.delta == 0);
    CHECK(u.f == 2);
    QuadExt r = make_quad_ext(5, -5);
    CHECK(r.ramified);
    CHECK(r.delta == 1);
    CHECK(r.f == 1);
    QuadExt i2 = make_quad_ext(2, -1);
    CHECK(i2.delta == 2);
    CHECK(i2.pi_a == 1);
    CHECK(i2.pi_b == 1);
    CHECK(make_quad_ext(2, 2).delta == 3);
    CHECK(make_quad_ext(2, 5).delta == 0);
    CHECK_THROWS_AS(make_quad_ext(5, 4), DomainError);
    CHECK_THROWS_AS(make_quad_ext(5, 25 * 6), DomainError);
    CHECK_THROWS_AS(make_quad_ext(2, 17), DomainError);
    for (i64 p : {2, 3, 5, 7})
        for (const QuadExt& K : fields(p))
            CHECK(K.e * K.f == 2);
}

TEST_CASE("unit groups have the right order")
{
    for (i64 p : {2, 3, 5})
        for (const QuadExt& K : fields(p))
            for (int D = 1; D <= (p == 2 ? 3 : 2); ++D) {
                const UnitGroupK& G = UnitGroupK::get(K, D);
                i64 m = G.modulus();
                i64 expect = K.ramified ? m * m - m * m / p : m * m - m * m / (p * p);
                CHECK(static_cast<i64>(G.size()) == expect);
                i64 prod = 1;
                for (i64 d : G.decomposition().orders)
                    prod *= d;
                CHECK(prod == expect);
            }
}

TEST_CASE("characters of K: conductors and conjugation")
{
    for (i64 p : {2, 3, 5})
        for (const QuadExt& K : fields(p)) {
            int D = p == 2 ? 2 : 1;
            for (const KChar& c : unit_characters_K(K, D)) {
                CHECK(kernel_conductor_K(c, D) == c.conductor());
                KChar s = conjugate(c);
                CHECK(s.conductor() == c.conductor());
                CHECK(conjugate(s).same_on_units(c));
                CHECK(sigma_stable(c * s));
            }
        }
    // F_25^x: sigma acts as Frobenius x -> x^5
    QuadExt K = make_quad_ext(5, 2);
    const UnitGroupK& G = UnitGroupK::get(K, 1);
    for (const KChar& c : unit_characters_K(K, 1)) {
        if (c.unit_order() != 24)
            continue;
        KChar s = conjugate(c);
        for (std::size_t idx : G.units())
            CHECK(s.unit_value(G.element(idx)) == c.unit_value(G.element(idx)) * 5);
    }
}

TEST_CASE("omega_K")
{
    MultChar w = omega_K(make_quad_ext(5, 2));
    CHECK(w.conductor() == 0);
    CHECK(w.value_at_p() == ScaledAlgebraic(-1L));
    CHECK(omega_K(make_quad_ext(5, -5)).conductor() == 1);
    CHECK(omega_K(make_quad_ext(2, -1)).conductor() == 2);
    for (i64 p : {2, 3, 5, 7})
        for (const QuadExt& K : fields(p)) {
            MultChar o = omega_K(K);
            CHECK((o * o).conductor() == 0);
            if (p == 2)
                CHECK(o.conductor() == K.delta);
            else
                CHECK(o.conductor() == (K.ramified ? 1 : 0));
            // trivial exactly on the norms of units
            const UnitGroupK& G = UnitGroupK::get(K, p == 2 ? 3 : 1);
            std::set<i64> norms;
            for (std::size_t idx : G.units())
                norms.insert(ok_norm(K, G.element(idx), G.modulus()));
            for (i64 u = 1; u < G.modulus(); ++u)
                if (u % p != 0)
                    CHECK(o.unit_value(u).is_one() == (norms.count(u) > 0));
        }
}

TEST_CASE("norm composition conductors")
{
    QuadExt u5 = make_quad_ext(5, 2);
    CHECK(norm_conductor(make_mult_char(5, 2, 1), u5) == 2);
    CHECK(norm_conductor(unramified_char(5, ScaledAlgebraic(3L)), u5) == 0);
    QuadExt r5 = make_quad_ext(5, -5);
    MultChar w = omega_K(r5);
    MultChar tame = w.with_value_at_p(ScaledAlgebraic(1L));
    CHECK((tame * w).conductor() == 0);
    CHECK(norm_conductor(tame, r5) == 0);
    for (i64 p : {2, 3, 5, 7})
        for (const QuadExt& K : fields(p))
            for (const MultChar& c : unit_characters(p, p == 7 ? 2 : 3)) {
                KChar n = compose_norm(c, K);
                CHECK(n.conductor() == norm_conductor_formula(c, K));
                CHECK(kernel_conductor_K(n, n.depth()) == n.conductor());
                CHECK(sigma_stable(n));
            }
}

TEST_CASE("trace characters")
{
    for (i64 p : {2, 3, 5, 7})
        for (const QuadExt& K : fields(p))
            for (int n : {-1, 0, 1}) {
                AddCharK t = trace_add_char(AddChar::with_conductor(p, n), K);
                CHECK(add_char_conductor_bruteforce(t) == t.n);
            }
    CHECK(trace_add_char(AddChar::standard(5), make_quad_ext(5, 2)).n == 0);
    CHECK(trace_add_char(AddChar::standard(5), make_quad_ext(5, -5)).n == 1);
    CHECK(add_char_conductor_bruteforce(trace_add_char(AddChar::standard(2), make_quad_ext(2, 2))) == 3);
}

TEST_CASE("induced conductors")
{
    for (const QuadExt& K : {make_quad_ext(3, "unramified"), make_quad_ext(3, "-p"), make_quad_ext(2, -1),
                             make_quad_ext(2, 2)}) {
        std::set<int> seen;
        for (const KChar& c : unit_characters_K(K, table_depth(K, 4))) {
            int expect = K.ramified ? K.delta + c.conductor() : 2 * c.conductor();
            CHECK(induced_conductor(c) == expect);
            seen.insert(c.conductor());
        }
        CHECK(seen.size() >= 4);
    }
}

TEST_CASE("norm residue symbol")
{
    for (i64 p : {3, 5, 7, 11, 13}) {
        QuadExt a = make_quad_ext(p, "-p");
        QuadExt b = make_quad_ext(p, "-p*zeta");
        CHECK(norm_residue_symbol(a) == 1);
        CHECK(norm_residue_symbol(b) == -1);
        for (const QuadExt* K : {&a, &b}) {
            // p is a norm iff some N(z) = p * (square unit) modulo p^2
            i64 m = p * p;
            bool found = false;
            for (i64 x = 0; x < m && !found; ++x)
                for (i64 y = 0; y < m && !found; ++y) {
                    i64 n = ok_norm(*K, OK{x, y}, m);
                    if (n % p == 0 && n % m != 0 && legendre(n / p, p) == 1)
                        found = true;
                }
            CHECK((norm_residue_symbol(*K) == 1) == found);
        }
    }
    CHECK_THROWS_AS(norm_residue_symbol(make_quad_ext(5, 2)), DomainError);
}

TEST_CASE("characters from tables")
{
    QuadExt K = make_quad_ext(3, -3);
    const UnitGroupK& G = UnitGroupK::get(K, 1);
    KChar c = unit_characters_K(K, 1).back();
    std::vector<std::array<i64, 4>> table;
    for (std::size_t idx : G.units()) {
        OK z = G.element(idx);
        Turn t = c.unit_value(z);
        table.push_back({z.a, z.b, t.num, t.den});
    }
    CHECK(KChar::from_table(K, 1, table, ScaledAlgebraic(1L)).same_on_units(c));
    table.pop_back();
    CHECK_THROWS_AS(KChar::from_table(K, 1, table, ScaledAlgebraic(1L)), InputError);
    table.push_back({1, 0, 1, 3});
    CHECK_THROWS_AS(KChar::from_table(K, 1, table, ScaledAlgebraic(1L)), InputError);
}
