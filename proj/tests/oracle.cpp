#include "oracle.hpp"

#include <array>
#include <set>

#include "folres/linalg.hpp"

namespace oracle {

namespace {

std::vector<Rational> weight_grid() {
    std::set<Rational> g;
    for (int i = 1; i <= 8; ++i)
        for (int j = 1; j <= 8; ++j) g.insert(Rational(i, j));
    return {g.begin(), g.end()};
}

enum Role { Absent, Transverse, Invariant };

/// Transverse coordinates need independent F-derivatives at the origin,
/// invariant ones an F-stable ideal.
bool eligible(const Foliation& F, const std::vector<Jet>& X, const std::array<Role, 2>& role) {
    IdealGens V;
    for (int k = 0; k < 2; ++k)
        if (role[k] == Invariant) V.push_back(X[k]);
    for (const auto& v : V)
        for (const auto& d : F.gens) {
            Jet h = apply_derivation(d, v);
            if (!h.is_zero() && !ideal_contains(V, h, v.ring()->N - 1)) return false;
        }
    std::vector<std::vector<Rational>> rows;
    int t = 0;
    for (const auto& d : F.gens) {
        std::vector<Rational> row;
        for (int k = 0; k < 2; ++k)
            if (role[k] == Transverse) row.push_back(apply_derivation(d, X[k]).const_term());
        rows.push_back(row);
    }
    for (int k = 0; k < 2; ++k) t += role[k] == Transverse;
    return t == 0 || matrix_rank(rows) == t;
}

Center make_center(const RingPtr& r, const std::vector<Jet>& X, const std::array<Role, 2>& role,
                   const std::array<Rational, 2>& w) {
    Center C(r);
    C.chart = X;
    for (int k = 0; k < 2; ++k) {
        if (role[k] == Transverse) C.transverse.push_back({r->names[k], w[k]});
        if (role[k] == Invariant) C.invariant.push_back({r->names[k], w[k]});
    }
    C.sort_tiers();
    return C;
}

}  // namespace

OracleResult brute_force_inv(const Context& ctx, const ReesAlgebra& R, const Foliation& F) {
    RingPtr r = ctx.ring;
    if (r->nvars() != 2) throw DomainError("oracle works in two variables");
    for (int i = 0; i < 2; ++i)
        if (ctx.is_divisor(i)) throw DomainError("oracle does not handle divisors");
    const std::vector<Rational> grid = weight_grid();
    const Jet x = Jet::var(r, 0), y = Jet::var(r, 1);

    OracleResult out;
    bool have = false;
    auto consider = [&](const Center& C) {
        ++out.tested;
        if (!is_admissible(R, C).admissible) return false;
        InvVector v = center_inv(C);
        if (!have || compare_inv(v, out.best) > 0) {
            out.best = v;
            out.center = C;
            have = true;
        }
        return true;
    };

    for (int orient = 0; orient < 2; ++orient)
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b) {
                if (orient == 1 && a == 0 && b == 0) continue;
                std::vector<Jet> X{x, y};
                if (orient == 0)
                    X[0] = x + y.scaled(a) + (y * y).scaled(b);
                else
                    X[1] = y + x.scaled(a) + (x * x).scaled(b);
                ++out.charts;
                consider(make_center(r, X, {Absent, Absent}, {0, 0}));
                const Role roles[] = {Absent, Transverse, Invariant};
                for (Role r0 : roles)
                    for (Role r1 : roles) {
                        std::array<Role, 2> role{r0, r1};
                        if (role[0] == Absent && role[1] == Absent) continue;
                        if (!eligible(F, X, role)) continue;
                        if (role[0] == Absent || role[1] == Absent) {
                            int k = role[0] == Absent ? 1 : 0;
                            for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
                                std::array<Rational, 2> w{0, 0};
                                w[k] = *it;
                                if (consider(make_center(r, X, role, w))) break;
                            }
                            continue;
                        }
                        // admissible weight pairs form a down-set; walk its staircase
                        int j = static_cast<int>(grid.size()) - 1;
                        for (std::size_t i = 0; i < grid.size() && j >= 0; ++i) {
                            while (j >= 0 && !consider(make_center(r, X, role, {grid[i], grid[j]}))) --j;
                        }
                    }
            }
    return out;
}

}  // namespace oracle
