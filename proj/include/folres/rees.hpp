#ifndef FOLRES_REES_HPP
#define FOLRES_REES_HPP

#include <memory>
#include <string>
#include <vector>

#include "folres/foliation.hpp"
#include "folres/kernel.hpp"

namespace folres {

struct ReesGen {
    Jet f;
    Rational deg;
};

/// Rees algebra presented by generators f t^deg; degree zero is the whole ring.
struct ReesAlgebra {
    RingPtr ring;
    std::vector<ReesGen> gens;

    ReesAlgebra() = default;
    explicit ReesAlgebra(RingPtr r) : ring(std::move(r)) {}
    ReesAlgebra(RingPtr r, std::vector<ReesGen> g);
    bool empty() const { return gens.empty(); }
    /// Some generator is a unit.
    bool trivial() const;
};

std::string to_string(const ReesAlgebra& R);
/// Lines `gen <poly> deg <rational>`.
ReesAlgebra parse_rees(const std::string& text, const RingPtr& ring);

ReesAlgebra rees_from_ideal(const IdealGens& I);
/// (f_i^{n_i}) with n_i = lcm(degrees)/deg_i; no integral closure.
IdealGens ideal_from_rees(const ReesAlgebra& R);
/// Ideal generators of the degree-b piece: minimal products of generators
/// with degree sum at least b.
IdealGens graded_piece(const ReesAlgebra& R, const Rational& b);

/// Rational or INFINITE.
struct ExtRational {
    bool infinite = false;
    Rational value;
    static ExtRational inf() { return {true, 0}; }
    static ExtRational fin(const Rational& v) { return {false, v}; }
    bool operator==(const ExtRational& o) const { return infinite == o.infinite && (infinite || value == o.value); }
    std::string str() const { return infinite ? "INFINITE" : to_string(value); }
};

ExtRational f_order_rees(const Foliation& F, const ReesAlgebra& R);
ReesAlgebra f_infty(const Foliation& F, const ReesAlgebra& R);
bool is_f_invariant(const Foliation& F, const ReesAlgebra& R, int D = -1);

// ---------------------------------------------------------------- invariants

enum class Tier : int { Transverse = 0, Invariant = 1, Divisorial = 2 };

struct InvValue {
    int tier = 0;  // 0 finite, 1 inf+, 2 inf+inf+, 3 padding
    Rational offset;

    static InvValue top() { return {3, 0}; }
    std::string str() const;
};

int compare(const InvValue& a, const InvValue& b);

struct InvVector {
    std::vector<InvValue> entries;
    std::string str() const;
    std::size_t size() const { return entries.size(); }
};

/// Lexicographic after padding with the top element; returns -1, 0 or 1.
int compare_inv(const InvVector& u, const InvVector& v);
bool operator<(const InvVector& u, const InvVector& v);
bool operator==(const InvVector& u, const InvVector& v);
InvVector parse_inv(const std::string& text);

// ---------------------------------------------------------------- centers

struct CenterEntry {
    std::string var;
    Rational weight;
};

/// Weighted center in the coordinates given by `chart` (one jet per
/// ambient variable, named after it).
struct Center {
    RingPtr ring;
    std::vector<Jet> chart;
    std::vector<CenterEntry> transverse, invariant, divisorial;
    Foliation aligned;

    Center() = default;
    explicit Center(RingPtr r);
    bool empty() const { return transverse.empty() && invariant.empty() && divisorial.empty(); }
    std::vector<CenterEntry> entries() const;
    /// Weight of a chart variable, zero when it is not part of the center.
    Rational weight_of(int var) const;
    const std::vector<CenterEntry>& tier(Tier t) const;
    std::vector<CenterEntry>& tier(Tier t);
    void sort_tiers();
    bool identity_chart() const;

    // chart_inverse memo, valid while `chart` equals the stored copy
    mutable std::shared_ptr<const std::pair<std::vector<Jet>, std::vector<Jet>>> inverse_memo;
};

std::string to_string(const Center& C);
Center parse_center(const std::vector<std::pair<int, std::string>>& lines, const RingPtr& ring);

InvVector center_inv(const Center& C);

/// Ambient variables written in the chart coordinates.
std::vector<Jet> chart_inverse(const Center& C);
/// Inverse of a coordinate change given by jets without constant terms.
std::vector<Jet> invert_coordinates(const std::vector<Jet>& phi);
Jet to_chart(const Jet& f, const std::vector<Jet>& inverse);

/// Weighted-degree test of a jet already written in chart coordinates.
bool center_graded_piece(const Center& C, const Jet& f_chart, const Rational& b);

struct AdmissibilityVerdict {
    bool admissible = false;
    int precision = kExact;
    explicit operator bool() const { return admissible; }
};
AdmissibilityVerdict is_admissible(const ReesAlgebra& R, const Center& C);

/// Derivative words of length alpha < a*deg at degree deg - alpha/a.
ReesAlgebra coefficient_rees(const ReesAlgebra& R, const Foliation& F, const Rational& a);

}  // namespace folres

#endif
