#ifndef FOLRES_TESTS_HELPERS_HPP
#define FOLRES_TESTS_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "folres/foliation.hpp"
#include "folres/kernel.hpp"
#include "folres/rees.hpp"

namespace th {

using namespace folres;

inline RingPtr ring(std::vector<std::string> names, int N = 16) { return make_ring(std::move(names), N); }
inline Jet P(const RingPtr& r, const std::string& s) { return parse_poly(s, r); }
inline Derivation D(const RingPtr& r, const std::string& s) { return Derivation(r, parse_vector_field(s, r)); }
inline Foliation Fol(const RingPtr& r, const std::vector<std::string>& gens) {
    Foliation F;
    for (const auto& g : gens) F.gens.push_back(D(r, g));
    return F;
}
inline ReesAlgebra Rees(const RingPtr& r, const std::vector<std::pair<std::string, Rational>>& gens) {
    ReesAlgebra R(r);
    for (const auto& [f, d] : gens) R.gens.push_back({P(r, f), d});
    return R;
}
inline InvVector inv(const std::string& s) { return parse_inv(s); }

/// Small random polynomial with integer coefficients in [-3, 3].
inline Jet random_poly(std::mt19937& rng, const RingPtr& r, int maxdeg, int terms, bool constant = true) {
    std::uniform_int_distribution<int> coef(-3, 3), deg(constant ? 0 : 1, maxdeg), var(0, r->nvars() - 1);
    std::vector<Term> ts;
    for (int k = 0; k < terms; ++k) {
        Mono m;
        int d = deg(rng);
        for (int j = 0; j < d; ++j) ++m.e[var(rng)];
        int c = coef(rng);
        if (c) ts.push_back({m, c});
    }
    return Jet::from_terms(r, ts);
}

}  // namespace th

#endif
