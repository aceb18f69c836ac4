#ifndef FOLRES_INSTANCE_HPP
#define FOLRES_INSTANCE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "folres/foliation.hpp"
#include "folres/invariant.hpp"
#include "folres/monres.hpp"
#include "folres/rees.hpp"

namespace folres {

/// Parsed instance file.
///
///   ring x y z
///   divisor x
///   truncation 24
///   ideal x^5 + y; x*y
///   rees x^2@1/2; y@1
///   foliation d/dx; x*d/dx + y*d/dy     (or `foliation D`, `foliation Dlog`)
///   point 0 1 0
///   center transverse x 4
///   center chart x = x + y^2
///   monomial p=0 rows=[[1,1]]
///
/// `#` starts a comment. Without a foliation line the log foliation is used.
struct Instance {
    Context ctx;
    ReesAlgebra R;
    Foliation F;
    std::vector<std::vector<Rational>> points;
    int truncation = 16;
    std::optional<Center> center;
    std::optional<MonomialPresentation> monomial;

    RingPtr ring() const { return ctx.ring; }
    PointedInstance at_origin() const { return {ctx, R, F}; }
};

/// `truncation_override` > 0 replaces the file's truncation line.
Instance parse_instance(const std::string& text, int truncation_override = 0);
Instance load_instance(const std::string& path, int truncation_override = 0);

/// Moves `point` to the origin; divisors not through the point are dropped.
PointedInstance translate(const PointedInstance& inst, const std::vector<Rational>& point);

}  // namespace folres

#endif
