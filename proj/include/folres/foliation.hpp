#ifndef FOLRES_FOLIATION_HPP
#define FOLRES_FOLIATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "folres/kernel.hpp"

namespace folres {

/// Vector field: coefficient of d/dv for every ring variable v.
struct Derivation {
    RingPtr ring;
    std::vector<Jet> coef;

    Derivation() = default;
    explicit Derivation(RingPtr r);
    Derivation(RingPtr r, std::vector<Jet> c);
    static Derivation basis(RingPtr r, int i);

    int nvars() const { return ring->nvars(); }
    bool is_zero() const;
    int prec() const;
    /// Coefficient of d/dz lies in (z) for every divisor variable z.
    bool is_logarithmic(const Context& ctx) const;

    Derivation operator+(const Derivation& o) const;
    Derivation operator-(const Derivation& o) const;
    Derivation times(const Jet& f) const;
    Derivation scaled(const Rational& c) const;
    bool operator==(const Derivation& o) const;
};

Derivation parse_derivation(const std::string& text, const RingPtr& ring, int line = 0);
std::string to_string(const Derivation& d);

/// Finite generator list; empty means the zero foliation.
struct Foliation {
    std::vector<Derivation> gens;

    Foliation() = default;
    explicit Foliation(std::vector<Derivation> g) : gens(std::move(g)) {}
    std::size_t size() const { return gens.size(); }
    bool empty() const { return gens.empty(); }
};

std::string to_string(const Foliation& F);

/// D_X: all coordinate derivations.
Foliation full_foliation(const RingPtr& ring);
/// D_X^log: z d/dz for divisor variables, d/dv otherwise.
Foliation log_foliation(const Context& ctx);

Jet apply_derivation(const Derivation& d, const Jet& f);
Derivation lie_bracket(const Derivation& a, const Derivation& b);

struct InvolutivityReport {
    bool involutive = true;
    bool decided = true;
    int degree_bound = 0;
    std::optional<Derivation> witness;
    int first = -1, second = -1;
};
/// Pairwise brackets tested for module membership modulo m^{D+1};
/// D defaults to N-1.
InvolutivityReport check_involutive(const Foliation& F, int D = -1);

using IdealGens = std::vector<Jet>;

IdealGens f_apply_ideal(const Foliation& F, const IdealGens& I);

/// Order value: a nonnegative integer or INFINITE.
struct FOrder {
    bool infinite = false;
    int value = 0;
    static FOrder inf() { return {true, 0}; }
    static FOrder fin(int v) { return {false, v}; }
    bool operator==(const FOrder& o) const { return infinite == o.infinite && (infinite || value == o.value); }
    std::string str() const { return infinite ? "INFINITE" : std::to_string(value); }
};

/// Derivative tower of an ideal under a foliation. Level k holds the raw
/// derivative words of length k that are new modulo the Q-span of all
/// previous levels.
struct Tower {
    struct Elem {
        Jet f;
        std::vector<int> word;  // indices of applied generators, first applied first
        int seed = 0;
    };
    std::vector<std::vector<Elem>> levels;
    int unit_level = -1;  // first level holding a unit
    bool stable = false;  // no further growth
    int precision = kExact;
};

struct TowerOptions {
    int max_level = -1;          // -1: until unit or stable
    bool stop_at_unit = true;
    bool ideal_stabilization = true;
};

Tower build_tower(const Foliation& F, const std::vector<Jet>& seeds, const TowerOptions& opt = {});

FOrder f_order_at(const Foliation& F, const IdealGens& I);

/// Constant-term rank test in the log basis against the generic rank.
bool log_smooth_at(const Foliation& F, const Context& ctx);
/// Generic rank over the fraction field, estimated by evaluation.
int generic_rank(const Foliation& F);
int sm_rank_at(const Foliation& F, const std::vector<Rational>& point);
int matrix_rank(const std::vector<std::vector<Rational>>& rows);

/// Restriction of a split presentation {d/dx1, nabla_j} to V(x1); the
/// nabla_j must have no d/dx1 component.
Foliation restrict_to_hypersurface(const Foliation& split, int x1, RingPtr* hring = nullptr);

/// Ring with one variable removed.
RingPtr drop_variable(const RingPtr& ring, int i);
/// Jet restricted to x_i = 0 on the smaller ring.
Jet restrict_var_zero(const Jet& f, int i, const RingPtr& hring);

}  // namespace folres

#endif
