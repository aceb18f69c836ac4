#ifndef FOLRES_TESTS_ORACLE_HPP
#define FOLRES_TESTS_ORACLE_HPP

#include "folres/invariant.hpp"

namespace oracle {

using namespace folres;

struct OracleResult {
    InvVector best;
    Center center;
    long charts = 0;
    long tested = 0;  // admissibility calls
};

/// Maximum of center_inv over aligned admissible centers with weights i/j
/// (1 <= i, j <= 8) in the charts x + a*y + b*y^2 or y + a*x + b*x^2,
/// a, b in {-1, 0, 1}. Two variables, no divisors.
OracleResult brute_force_inv(const Context& ctx, const ReesAlgebra& R, const Foliation& F);

}  // namespace oracle

#endif
