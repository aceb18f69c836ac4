#ifndef FOLRES_BLOWUP_HPP
#define FOLRES_BLOWUP_HPP

#include <string>
#include <utility>
#include <vector>

#include "folres/foliation.hpp"
#include "folres/rees.hpp"

namespace folres {

/// Cobordant blow-up B_+ of a weighted center: x_i -> s^{w_i} x_i' in the
/// center's chart coordinates.
struct Cobordism {
    Center center;
    long w = 1;
    std::vector<long> wi;  // per ambient variable, 0 off the center
    RingPtr target;        // primed center variables, others kept, then s
    int s_index = -1;
    std::vector<Jet> subst;          // image of every chart coordinate
    std::vector<Jet> inverse_chart;  // ambient variables in chart coordinates

    const RingPtr& source() const { return center.ring; }
    bool in_center(int i) const { return wi[i] > 0; }
    Context target_context(const Context& src) const;
};

Cobordism build_cobordant(const Center& C, long multiplier = 1);

enum class TransformMode { Controlled, Strict };
enum class DerivMode { Total, Controlled, Strict };

/// Cofactor together with the power of s that was divided out (or, for
/// derivations, multiplied in).
struct ElementTransform {
    Jet cofactor;
    long exponent = 0;
};

struct DerivationTransform {
    Derivation d;
    long exponent = 0;  // total: d_total = s^exponent * d; otherwise multiplier applied
};

/// Raw pullback of f along the cobordism.
Jet pullback(const Cobordism& B, const Jet& f);
ElementTransform transform_element(const Cobordism& B, const Jet& f, TransformMode mode, const Rational& a = 1);
ReesAlgebra transform_rees(const Cobordism& B, const ReesAlgebra& R, TransformMode mode);
DerivationTransform transform_derivation(const Cobordism& B, const Derivation& d, DerivMode mode);
Foliation transform_foliation(const Cobordism& B, const Foliation& F, TransformMode mode);

/// Chart x_i' = 1: x_i = s~^{w_i}, x_j = s~^{w_j} x_j~ on the center, with
/// the residual mu_{w_i} action recorded.
struct EtaleChart {
    int index = -1;  // ambient index of the chart variable (position of s~)
    long order = 1;
    RingPtr ring;
    std::vector<Jet> subst;                           // per chart coordinate
    std::vector<std::pair<std::string, long>> mu;     // weights of the residual action
};

EtaleChart etale_chart(const Cobordism& B, int i);
EtaleChart etale_chart(const Cobordism& B, const std::string& var);
Context chart_context(const Cobordism& B, const EtaleChart& ch, const Context& src);

ElementTransform chart_transform_element(const Cobordism& B, const EtaleChart& ch, const Jet& f, TransformMode mode,
                                         const Rational& a = 1);
ReesAlgebra chart_transform_rees(const Cobordism& B, const EtaleChart& ch, const ReesAlgebra& R, TransformMode mode);
DerivationTransform chart_transform_derivation(const Cobordism& B, const EtaleChart& ch, const Derivation& d,
                                               DerivMode mode);
Foliation chart_transform_foliation(const Cobordism& B, const EtaleChart& ch, const Foliation& F, TransformMode mode);

/// `x -> s^35*x'` lines for the cobordism.
std::string cobordism_report(const Cobordism& B);
/// Substitution lines plus the `mu` line of a chart.
std::string chart_report(const Cobordism& B, const EtaleChart& ch);

/// Smallest multiplier making every a*w integral for the generator degrees.
long rees_multiplier(const Center& C, const ReesAlgebra& R);

}  // namespace folres

#endif
