#ifndef FOLRES_INVARIANT_HPP
#define FOLRES_INVARIANT_HPP

#include <string>
#include <vector>

#include "folres/foliation.hpp"
#include "folres/rees.hpp"

namespace folres {

/// Which foliation the recursion currently runs with.
enum class InvMode { Foliated, Log, Plain };

struct PointedInstance {
    Context ctx;
    ReesAlgebra R;
    Foliation F;
};

struct MaximalContact {
    Jet x1;
    int generator = -1;     // index into R.gens
    std::vector<int> word;  // F-generator indices producing the raw element
    int derivation = -1;    // index into F.gens with d(x1) a unit
    Derivation d;
};

/// First derivative word of length ord-1 with a unit F-derivative, normalized.
MaximalContact find_maximal_contact(const Foliation& F, const ReesAlgebra& R, const Rational& a);

struct InvResult {
    InvVector inv;
    Center center;
    std::vector<std::string> trace;
    AdmissibilityVerdict verdict;
};

InvResult inv_at(const PointedInstance& inst);
InvResult inv_at(const Context& ctx, const ReesAlgebra& R, const Foliation& F);

/// Drops generators lying in the ideal of the others.
IdealGens minimalize(const IdealGens& Y);

/// All-ones invariant of length equal to the minimal generator count.
bool check_transverse(const PointedInstance& inst, const IdealGens& Y);

/// u = h(v) with x1(h(v), v) = 0; x1 must have a nonzero linear u-coefficient.
Jet solve_for_variable(const Jet& x1, int u, const RingPtr& hring);

}  // namespace folres

#endif
