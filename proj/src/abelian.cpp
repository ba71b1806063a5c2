#include "symsq/abelian.hpp"

#include <utility>

#include "symsq/errors.hpp"

namespace symsq {

namespace {

using Matrix = std::vector<std::vector<i64>>;

// Diagonalizes R by row and column operations, tracking the column
// transform V and its inverse.
void diagonalize(Matrix& R, Matrix& V, Matrix& Vinv)
{
    std::size_t n = R.size();
    V.assign(n, std::vector<i64>(n, 0));
    Vinv.assign(n, std::vector<i64>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        V[i][i] = Vinv[i][i] = 1;
    auto col_add = [&](std::size_t dst, std::size_t src, i64 q) {  // col dst -= q col src
        for (std::size_t i = 0; i < n; ++i) {
            R[i][dst] -= q * R[i][src];
            V[i][dst] -= q * V[i][src];
        }
        for (std::size_t j = 0; j < n; ++j)
            Vinv[src][j] += q * Vinv[dst][j];
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < n; ++i) {
            std::swap(R[i][a], R[i][b]);
            std::swap(V[i][a], V[i][b]);
        }
        std::swap(Vinv[a], Vinv[b]);
    };
    for (std::size_t t = 0; t < n; ++t) {
        while (true) {
            std::size_t bi = n, bj = n;
            i64 best = 0;
            for (std::size_t i = t; i < n; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (R[i][j] != 0 && (best == 0 || std::llabs(R[i][j]) < best)) {
                        best = std::llabs(R[i][j]);
                        bi = i;
                        bj = j;
                    }
            if (bi == n)
                return;
            std::swap(R[t], R[bi]);
            if (bj != t)
                col_swap(t, bj);
            bool clean = true;
            for (std::size_t i = t + 1; i < n; ++i) {
                i64 q = R[i][t] / R[t][t];
                if (q != 0)
                    for (std::size_t j = 0; j < n; ++j)
                        R[i][j] -= q * R[t][j];
                if (R[i][t] != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                i64 q = R[t][j] / R[t][t];
                if (q != 0)
                    col_add(j, t, q);
                if (R[t][j] != 0)
                    clean = false;
            }
            if (clean)
                break;
        }
        if (R[t][t] < 0) {
            for (std::size_t i = 0; i < n; ++i) {
                R[i][t] = -R[i][t];
                V[i][t] = -V[i][t];
            }
            for (std::size_t j = 0; j < n; ++j)
                Vinv[t][j] = -Vinv[t][j];
        }
    }
}

}  // namespace

AbelianDecomposition decompose_abelian(std::size_t universe, const std::vector<std::size_t>& members,
                                       std::size_t identity,
                                       const std::function<std::size_t(std::size_t, std::size_t)>& mul)
{
    std::vector<std::vector<i64>> table(universe);
    std::vector<char> known(universe, 0);
    std::vector<std::size_t> gens;
    std::vector<std::size_t> elems = {identity};
    known[identity] = 1;
    Matrix rel;
    for (std::size_t g : members) {
        if (known[g])
            continue;
        std::size_t j = gens.size();
        for (auto& row : rel)
            row.push_back(0);
        for (std::size_t h : elems)
            table[h].push_back(0);
        std::vector<std::size_t> powers = {identity, g};
        while (!known[powers.back()])
            powers.push_back(mul(powers.back(), g));
        i64 r = static_cast<i64>(powers.size()) - 1;
        std::vector<i64> row = table[powers.back()];
        for (auto& x : row)
            x = -x;
        row[j] += r;
        rel.push_back(row);
        std::size_t old = elems.size();
        for (std::size_t idx = 0; idx < old; ++idx) {
            std::size_t h = elems[idx];
            std::size_t cur = h;
            for (i64 k = 1; k < r; ++k) {
                cur = mul(cur, g);
                if (known[cur])
                    throw InternalError("decompose_abelian: closure is not a group");
                known[cur] = 1;
                table[cur] = table[h];
                table[cur][j] = k;
                elems.push_back(cur);
            }
        }
        gens.push_back(g);
    }
    std::size_t n = gens.size();
    Matrix V, Vinv;
    diagonalize(rel, V, Vinv);
    AbelianDecomposition out;
    i64 group_order = static_cast<i64>(elems.size());
    auto power = [&](std::size_t g, i64 e) {
        std::size_t r = identity, b = g;
        e = mod(e, group_order);
        while (e > 0) {
            if (e & 1)
                r = mul(r, b);
            e >>= 1;
            if (e > 0)
                b = mul(b, b);
        }
        return r;
    };
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i) {
        i64 d = rel[i][i];
        if (d == 1)
            continue;
        if (d <= 0)
            throw InternalError("decompose_abelian: degenerate relation matrix");
        keep.push_back(i);
        out.orders.push_back(d);
        std::size_t h = identity;
        for (std::size_t s = 0; s < n; ++s)
            h = mul(h, power(gens[s], Vinv[i][s]));
        out.generators.push_back(h);
    }
    out.coords.assign(universe, {});
    for (std::size_t h : elems) {
        std::vector<i64> y(keep.size(), 0);
        for (std::size_t k = 0; k < keep.size(); ++k) {
            i64 acc = 0;
            for (std::size_t s = 0; s < n; ++s)
                acc = mod(acc + mulmod(mod(V[s][keep[k]], out.orders[k]), table[h][s], out.orders[k]), out.orders[k]);
            y[k] = acc;
        }
        out.coords[h] = std::move(y);
    }
    return out;
}

}  // namespace symsq
