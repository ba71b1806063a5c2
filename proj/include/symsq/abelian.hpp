#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "symsq/numtheory.hpp"

namespace symsq {

// Finite abelian group given by element indices and a multiplication on
// them, split as a direct sum of cyclic groups Z/d_i. The decomposition is
// deterministic: generators are picked greedily in index order and the
// resulting triangular relation matrix is diagonalized.
struct AbelianDecomposition {
    std::vector<i64> orders;
    std::vector<std::size_t> generators;
    // Coordinates of each member on the generators; empty for non-members.
    std::vector<std::vector<i64>> coords;

    std::size_t rank() const { return orders.size(); }
};

AbelianDecomposition decompose_abelian(std::size_t universe, const std::vector<std::size_t>& members,
                                       std::size_t identity,
                                       const std::function<std::size_t(std::size_t, std::size_t)>& mul);

}  // namespace symsq
