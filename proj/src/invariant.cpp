#include "folres/invariant.hpp"

#include <algorithm>
#include <sstream>

#include "folres/linalg.hpp"

namespace folres {

MaximalContact find_maximal_contact(const Foliation& F, const ReesAlgebra& R, const Rational& a) {
    for (int gi = 0; gi < static_cast<int>(R.gens.size()); ++gi) {
        const auto& g = R.gens[gi];
        Rational k = a * g.deg;
        if (!is_integer(k) || k <= 0) continue;
        int level = static_cast<int>(k.get_num().get_si());
        Tower T = build_tower(F, {g.f});
        if (T.unit_level != level) continue;
        for (const auto& e : T.levels[level - 1])
            for (int j = 0; j < static_cast<int>(F.gens.size()); ++j) {
                Jet h = apply_derivation(F.gens[j], e.f);
                if (!h.is_unit()) continue;
                MaximalContact mc;
                mc.x1 = e.f.scaled(1 / h.const_term());
                mc.generator = gi;
                mc.word = e.word;
                mc.derivation = j;
                mc.d = F.gens[j];
                return mc;
            }
    }
    throw BudgetError("no maximal contact element found within the precision budget");
}

Jet solve_for_variable(const Jet& x1, int u, const RingPtr& hring) {
    const RingPtr& ring = x1.ring();
    Mono mu;
    mu.e[u] = 1;
    Rational L = x1.coeff(mu);
    if (L == 0) throw DomainError("maximal contact has no linear term in the eliminated variable");
    std::vector<Term> rest;
    bool u_free = true;
    for (const auto& t : x1.terms()) {
        if (t.m == mu) continue;
        if (t.m.e[u]) u_free = false;
        rest.push_back(t);
    }
    Jet r = Jet::from_terms(ring, rest, x1.prec());
    std::vector<Jet> images;
    for (int i = 0, j = 0; i < ring->nvars(); ++i)
        images.push_back(i == u ? Jet::zero(hring) : Jet::var(hring, j++));
    if (u_free) return substitute(r, images, hring).scaled(-1 / L);
    Jet h = Jet::zero(hring);
    for (int it = 0; it <= ring->N + 2; ++it) {
        images[u] = h;
        Jet next = substitute(r, images, hring).scaled(-1 / L);
        if (next == h) return h;
        h = std::move(next);
    }
    return h;
}

namespace {

struct Level {
    InvVector inv;
    Center center;
};

Jet restrict_to(const Jet& f, const std::vector<Jet>& images, const RingPtr& hring) {
    return substitute(f, images, hring);
}

Foliation prune(const Foliation& F) {
    Foliation out;
    Echelon ech;
    for (const auto& d : F.gens) {
        if (d.is_zero()) continue;
        int P = std::max(0, std::min(d.ring->N, d.prec()));
        if (ech.insert(to_svec(d.coef, P))) out.gens.push_back(d);
    }
    return out;
}

/// Kernel lift of phi along d' = d/d(x1): sum_j (-x1)^j/j! d'^j(phi).
Jet lift_along(const Jet& phi, const Jet& x1, const Derivation& dn) {
    const RingPtr& ring = x1.ring();
    Jet term = phi;
    Jet sum = phi;
    Jet xp = Jet::constant(ring, 1);
    Jet mx = -x1;
    for (int j = 1; j <= ring->N; ++j) {
        term = apply_derivation(dn, term);
        if (term.is_zero()) break;
        xp = (xp * mx).scaled(Rational(1, j));
        if (xp.is_zero()) break;
        sum += xp * term;
    }
    return sum;
}

std::string mode_name(InvMode m) {
    switch (m) {
        case InvMode::Foliated: return "foliated";
        case InvMode::Log: return "log";
        default: return "plain";
    }
}

Level lift_tiers(Level L) {
    for (auto& e : L.inv.entries)
        if (e.tier < 2) ++e.tier;
    Center& C = L.center;
    C.divisorial.insert(C.divisorial.begin(), C.invariant.begin(), C.invariant.end());
    C.invariant = C.transverse;
    C.transverse.clear();
    return L;
}

Level recurse(const Context& ctx, ReesAlgebra R, const Foliation& Fin, InvMode mode, int depth,
              std::vector<std::string>& trace) {
    std::vector<ReesGen> kept;
    for (auto& g : R.gens)
        if (!g.f.is_zero()) kept.push_back(std::move(g));
    R.gens = std::move(kept);
    Level out;
    out.center = Center(ctx.ring);
    std::string pre = "level " + std::to_string(depth) + ": ";
    if (R.gens.empty()) {
        trace.push_back(pre + "ord=inf, contact=-, tier-lift=0 (empty)");
        return out;
    }
    if (R.trivial()) {
        out.inv.entries.push_back({0, 0});
        trace.push_back(pre + "ord=0, contact=-, tier-lift=0");
        return out;
    }
    Foliation F = mode == InvMode::Foliated ? Fin
                  : mode == InvMode::Log    ? log_foliation(ctx)
                                            : full_foliation(ctx.ring);
    ExtRational a = f_order_rees(F, R);
    if (a.infinite) {
        if (mode == InvMode::Plain) throw DomainError("nonzero Rees algebra with infinite order under all derivations");
        ReesAlgebra Rinf = f_infty(F, R);
        InvMode next = mode == InvMode::Foliated ? InvMode::Log : InvMode::Plain;
        trace.push_back(pre + "ord=inf, contact=-, tier-lift=1 (" + mode_name(mode) + " -> " + mode_name(next) + ")");
        Context nctx = next == InvMode::Plain ? ctx.without_divisors() : ctx;
        return lift_tiers(recurse(nctx, Rinf, Foliation{}, next, depth + 1, trace));
    }

    MaximalContact mc = find_maximal_contact(F, R, a.value);
    const RingPtr& ring = ctx.ring;
    const Jet& x1 = mc.x1;
    const Derivation& d = mc.d;
    trace.push_back(pre + "ord=" + to_string(a.value) + ", contact=" + to_string(x1) + ", tier-lift=0");

    // variable eliminated on H = V(x1)
    int u = -1;
    for (int i = 0; i < ring->nvars() && u < 0; ++i) {
        Mono m;
        m.e[i] = 1;
        if (d.coef[i].const_term() != 0 && x1.coeff(m) != 0) u = i;
    }
    if (u < 0) throw DomainError("maximal contact is not transverse to its witness derivation");
    if (ctx.is_divisor(u)) throw DomainError("maximal contact along a divisor variable");

    RingPtr hring = drop_variable(ring, u);
    std::vector<bool> hdiv;
    for (int i = 0; i < ring->nvars(); ++i)
        if (i != u) hdiv.push_back(ctx.is_divisor(i));
    Context hctx(hring, hdiv);
    Jet h = solve_for_variable(x1, u, hring);
    std::vector<Jet> images;
    for (int i = 0, j = 0; i < ring->nvars(); ++i) images.push_back(i == u ? h : Jet::var(hring, j++));

    ReesAlgebra C = coefficient_rees(R, F, a.value);
    ReesAlgebra CH(hring);
    for (const auto& g : C.gens) {
        Jet r = restrict_to(g.f, images, hring);
        if (!r.is_zero()) CH.gens.push_back({r, g.deg});
    }

    Foliation FH;
    Jet dx1_inv = inverse(apply_derivation(d, x1));
    Derivation dn = d.times(dx1_inv);
    if (mode == InvMode::Foliated) {
        for (const auto& g : F.gens) {
            Derivation t = g - dn.times(apply_derivation(g, x1));
            Derivation r(hring);
            for (int i = 0, j = 0; i < ring->nvars(); ++i) {
                if (i == u) continue;
                r.coef[j++] = restrict_to(t.coef[i], images, hring);
            }
            FH.gens.push_back(r);
        }
        FH = prune(FH);
    }

    Level sub = recurse(hctx, CH, FH, mode, depth + 1, trace);

    out.inv.entries.push_back({0, a.value});
    out.inv.entries.insert(out.inv.entries.end(), sub.inv.entries.begin(), sub.inv.entries.end());
    Center& Cc = out.center;
    Cc.transverse.push_back({ring->names[u], a.value});
    for (const auto& e : sub.center.transverse) Cc.transverse.push_back(e);
    Cc.invariant = sub.center.invariant;
    Cc.divisorial = sub.center.divisorial;
    Cc.chart[u] = x1;
    for (int i = 0, j = 0; i < ring->nvars(); ++i) {
        if (i == u) continue;
        const Jet& phi = sub.center.chart[j++];
        Jet up = embed(phi, ring);
        Cc.chart[i] = lift_along(up, x1, dn);
    }
    return out;
}

}  // namespace

InvResult inv_at(const Context& ctx, const ReesAlgebra& R, const Foliation& F) {
    for (const auto& d : F.gens) {
        if (!same_ring(d.ring, ctx.ring)) throw DomainError("foliation lives on a different ring");
        if (!d.is_logarithmic(ctx)) throw DomainError("foliation generator is not logarithmic: " + to_string(d));
    }
    ReesAlgebra Rr(ctx.ring);
    for (const auto& g : R.gens) Rr.gens.push_back({g.f.rebased(ctx.ring), g.deg});
    InvResult res;
    Level L = recurse(ctx, Rr, F, InvMode::Foliated, 0, res.trace);
    res.inv = L.inv;
    res.center = L.center;
    if (res.center.empty()) {
        res.verdict.admissible = true;
        res.verdict.precision = ctx.ring->N;
    } else {
        res.verdict = is_admissible(Rr, res.center);
        if (!res.verdict.admissible) throw DomainError("internal: computed center is not admissible");
    }
    return res;
}

InvResult inv_at(const PointedInstance& inst) { return inv_at(inst.ctx, inst.R, inst.F); }

IdealGens minimalize(const IdealGens& Y) {
    IdealGens cur;
    for (const auto& f : Y)
        if (!f.is_zero()) cur.push_back(f);
    for (std::size_t i = 0; i < cur.size();) {
        IdealGens others;
        for (std::size_t j = 0; j < cur.size(); ++j)
            if (j != i) others.push_back(cur[j]);
        int D = cur[i].ring()->N;
        for (const auto& f : cur) D = std::min(D, f.prec());
        if (!others.empty() && ideal_contains(others, cur[i], D))
            cur.erase(cur.begin() + i);
        else
            ++i;
    }
    return cur;
}

bool check_transverse(const PointedInstance& inst, const IdealGens& Y) {
    IdealGens m = minimalize(Y);
    if (m.empty()) return false;
    InvResult r = inv_at(inst.ctx, rees_from_ideal(m), inst.F);
    if (r.inv.size() != m.size()) return false;
    for (const auto& e : r.inv.entries)
        if (e.tier != 0 || e.offset != 1) return false;
    return true;
}

}  // namespace folres
