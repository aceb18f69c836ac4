#ifndef FOLRES_LINALG_HPP
#define FOLRES_LINALG_HPP

#include <map>
#include <utility>
#include <vector>

#include "folres/kernel.hpp"

namespace folres {

/// Coordinate of a sparse vector: a monomial in a given component.
struct VKey {
    Mono m;
    int comp = 0;
};

struct VKeyLess {
    bool operator()(const VKey& a, const VKey& b) const {
        if (a.m != b.m) return grlex_less(a.m, b.m);
        return a.comp < b.comp;
    }
};

using SVec = std::vector<std::pair<VKey, Rational>>;
/// Linear combination of tagged input rows.
using Combo = std::vector<std::pair<int, Rational>>;

SVec to_svec(const Jet& f, int maxdeg, int comp = 0);
SVec to_svec(const std::vector<Jet>& v, int maxdeg);

/// Incremental row echelon form over Q; pivots sit on the smallest key.
class Echelon {
public:
    explicit Echelon(bool track = false) : track_(track) {}

    /// Adds v when independent of the current rows; returns whether it was added.
    bool insert(const SVec& v, int tag = -1);
    bool contains(const SVec& v) const { return reduce(v).empty(); }
    /// Residual of v; with tracking, `combo` receives v - residual as tags.
    SVec reduce(const SVec& v, Combo* combo = nullptr) const;
    std::size_t rank() const { return rows_.size(); }

private:
    struct Row {
        SVec v;
        std::map<int, Rational> combo;
    };
    bool track_;
    std::map<VKey, Row, VKeyLess> rows_;
};

/// All exponent vectors in n variables of total degree <= d, graded order.
std::vector<Mono> monomials_upto(int n, int d);

/// Membership in (gens) + m^{D+1} at the origin, by linear algebra on
/// monomial multiples.
class IdealMembership {
public:
    IdealMembership(const std::vector<Jet>& gens, int D);
    /// Adds the multiples of one more generator.
    void add(const Jet& g);
    bool contains(const Jet& f) const;
    bool has_unit() const { return unit_; }
    int degree_bound() const { return D_; }

private:
    int D_;
    bool unit_ = false;
    Echelon ech_;
};

bool ideal_contains(const std::vector<Jet>& gens, const Jet& f, int D);

/// Membership of a vector of jets in the module spanned by `gens` modulo
/// m^{D+1} in every component. On success fills `coeffs` (one jet per
/// generator) when requested.
bool module_contains(const std::vector<std::vector<Jet>>& gens, const std::vector<Jet>& v, int D,
                     std::vector<Jet>* coeffs = nullptr);

}  // namespace folres

#endif
