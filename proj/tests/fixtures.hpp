#pragma once

#include <vector>

#include "secord/generator.hpp"
#include "secord/lattice.hpp"
#include "secord/network.hpp"

namespace secord::fixtures {

inline ConstraintNetwork make(std::vector<int> sizes, std::vector<ConstraintSpec> specs) {
    return build_network(sizes, specs);
}

/// w, x, y, z = 0..3; two ternary support tables sharing w and x.
inline ConstraintNetwork twin_ternary() { return twin_ternary_network(); }

/// Three variables over {0, 1}, pairwise different. Arc-consistent, unsatisfiable.
inline ConstraintNetwork triangle() { return not_equal_clique(3, 2); }

/// x0 < x1 over {0, 1, 2}.
inline ConstraintNetwork less_than() {
    return make({3, 3}, {{{0, 1}, Polarity::supports, {{0, 1}, {0, 2}, {1, 2}}}});
}

/// Four variables in a cycle x0-x1-x2-x3-x0 over {0, 1}; x0 = x1, x1 = x2, x2 = x3, x3 != x0.
/// Every value has a support on each edge but no solution exists.
inline ConstraintNetwork odd_cycle() {
    std::vector<ConstraintSpec> s;
    for (VarId i = 0; i < 3; ++i)
        s.push_back({{i, i + 1}, Polarity::supports, {{0, 0}, {1, 1}}});
    s.push_back({{3, 0}, Polarity::supports, {{0, 1}, {1, 0}}});
    return make({2, 2, 2, 2}, s);
}

} // namespace secord::fixtures
