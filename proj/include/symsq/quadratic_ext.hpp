#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symsq/abelian.hpp"
#include "symsq/padic_chars.hpp"

namespace symsq {

// K = Q_p(sqrt d). O_K = Z_p[x] with x^2 = t1 x + t0.
struct QuadExt {
    i64 p = 2;
    i64 d = 0;  // normalized square-class representative
    bool ramified = false;
    int delta = 0;  // v_p of the discriminant
    int f = 2;      // residue degree
    int e = 1;      // ramification index
    i64 t1 = 0, t0 = 0;
    i64 pi_a = 0, pi_b = 0;  // uniformizer pi_a + pi_b x

    std::string str() const;
    bool operator==(const QuadExt& o) const { return p == o.p && d == o.d; }
};

// square_class is an integer d (any representative of the class), or one of
// "unramified", "-p", "-p*zeta" (zeta a generator of F_p^x).
QuadExt make_quad_ext(i64 p, i64 d);
QuadExt make_quad_ext(i64 p, const std::string& square_class);

// Integral element a + b x of O_K, coefficients reduced mod a power of p.
struct OK {
    i64 a = 0, b = 0;
};

OK ok_mul(const QuadExt& K, const OK& u, const OK& v, i64 m);
OK ok_sigma(const QuadExt& K, const OK& u, i64 m);
i64 ok_norm(const QuadExt& K, const OK& u, i64 m);
i64 ok_trace(const QuadExt& K, const OK& u, i64 m);
OK ok_pow(const QuadExt& K, const OK& u, i64 e, i64 m);
OK ok_inverse(const QuadExt& K, const OK& u, i64 m);
// v_K of a nonzero element known mod p^D (capped at e*D).
int ok_valuation(const QuadExt& K, const OK& u, int D);
// N(pi) = p * unit for ramified K, p^2 for unramified K; returns the unit.
i64 norm_pi_unit(const QuadExt& K, i64 m);
// The unit p / pi^e, as an element of O_K mod m.
OK p_over_pi_e(const QuadExt& K, i64 m);

// (a + b x) / p^k, coefficients modulo p^prec.
struct KFrac {
    OK num;
    int k = 0;
    int prec = 1;
};

// pi^j for any integer j, with numerators modulo p^prec.
KFrac pi_power(const QuadExt& K, int j, int prec);
KFrac kfrac_mul(const QuadExt& K, const KFrac& x, const OK& y);

// The unit group (O_K / p^D)^x with a deterministic cyclic decomposition.
class UnitGroupK {
public:
    static const UnitGroupK& get(const QuadExt& K, int D);

    const QuadExt& field() const { return K_; }
    int depth() const { return D_; }
    i64 modulus() const { return m_; }
    std::size_t size() const { return units_.size(); }
    const std::vector<std::size_t>& units() const { return units_; }
    const AbelianDecomposition& decomposition() const { return dec_; }
    std::size_t index(const OK& z) const;
    OK element(std::size_t idx) const;
    bool is_unit(std::size_t idx) const { return !dec_.coords[idx].empty(); }
    // v_K(z - 1) per unit index, capped at e * D.
    int level(std::size_t idx) const { return level_[idx]; }

private:
    UnitGroupK(const QuadExt& K, int D);

    QuadExt K_;
    int D_;
    i64 m_;
    std::vector<std::size_t> units_;
    AbelianDecomposition dec_;
    std::vector<int> level_;
};

// Character of K^x: exponents on the basis of (O_K/p^D)^x with D = ceil(a/e),
// and a value at the fixed uniformizer.
class KChar {
public:
    KChar() = default;
    static KChar from_exponents(const QuadExt& K, int D, std::vector<i64> exps, const ScaledAlgebraic& value_at_pi,
                                std::optional<ScaledAlgebraic> sigma2 = std::nullopt);
    static KChar from_function(const QuadExt& K, int D, const std::function<Turn(const OK&)>& unit_values,
                               const ScaledAlgebraic& value_at_pi);
    // Entries (a, b, num, den) meaning kappa(a + b x) = exp(2 pi i num/den).
    static KChar from_table(const QuadExt& K, int D, const std::vector<std::array<i64, 4>>& table,
                            const ScaledAlgebraic& value_at_pi);
    static KChar trivial(const QuadExt& K);

    const QuadExt& field() const { return K_; }
    int conductor() const { return a_; }
    int depth() const { return D_; }
    const std::vector<i64>& exponents() const { return exps_; }
    const ScaledAlgebraic& value_at_pi() const { return vpi_; }
    const std::optional<ScaledAlgebraic>& value_at_sigma2() const { return sigma2_; }

    Turn unit_value(const OK& z) const;
    // kappa(pi^v z) for a unit z.
    ScaledAlgebraic value(int v, const OK& z) const;
    KChar at_depth(int D) const;
    bool trivial_on_units() const { return a_ == 0; }
    i64 unit_order() const;

    KChar operator*(const KChar& o) const;
    KChar inverse() const;
    KChar pow(i64 k) const;
    KChar with_value_at_pi(const ScaledAlgebraic& v) const;
    bool same_on_units(const KChar& o) const;
    bool operator==(const KChar& o) const;
    std::string str() const;

private:
    QuadExt K_;
    const UnitGroupK* G_ = nullptr;
    int D_ = 1;
    int a_ = 0;
    std::vector<i64> exps_;
    ScaledAlgebraic vpi_;
    std::optional<ScaledAlgebraic> sigma2_;

    void normalize();
};

// Ceil(a / e): the depth of unit tables needed for conductor a.
int table_depth(const QuadExt& K, int a);

// kappa o sigma.
KChar conjugate(const KChar& kappa);
bool sigma_stable(const KChar& kappa);

// Quadratic character of Q_p^x with kernel N(K^x), found by brute force over
// the quadratic characters of small conductor.
MultChar omega_K(const QuadExt& K);
// chi o N_{K/Q_p}.
KChar compose_norm(const MultChar& chi, const QuadExt& K);
int norm_conductor(const MultChar& chi, const QuadExt& K);
// a(chi) + a(chi omega_K) - a(omega_K), divided by f.
int norm_conductor_formula(const MultChar& chi, const QuadExt& K);

// phi o Tr_{K/Q_p}.
struct AddCharK {
    QuadExt K;
    AddChar base;
    int n = 0;  // conductor in pi-adic terms

    Turn operator()(const KFrac& x) const;
};
AddCharK trace_add_char(const AddChar& phi, const QuadExt& K);
// n(phi_K) by evaluation on pi^j O_K.
int add_char_conductor_bruteforce(const AddCharK& phiK);

// a(Ind kappa) = v(d_K) + f * a(kappa) for a character kappa of K^x.
int induced_conductor(const KChar& kappa);

// (p, K | Q_p) = omega_K(p) for odd p and ramified K.
int norm_residue_symbol(const QuadExt& K);

// Restriction of kappa to Z_p^x as a character of Q_p^x with value kappa(p)
// at p.
MultChar restrict_to_base(const KChar& kappa);

// psi with kappa = psi o N, including the value at p; nullopt when kappa is
// not sigma-stable or psi(p) would need an unavailable square root. The other
// solution is psi * omega_K.
std::optional<MultChar> descend_to_base(const KChar& kappa);

// All characters of (O_K/p^D)^x with value 1 at pi.
std::vector<KChar> unit_characters_K(const QuadExt& K, int D);

}  // namespace symsq
