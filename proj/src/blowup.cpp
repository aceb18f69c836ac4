#include "folres/blowup.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <sstream>

#include "folres/linalg.hpp"
#include "folres/rectify.hpp"

namespace folres {

namespace {

using Exps = std::array<long, kMaxVars>;

/// Monomial substitution source variable k -> prod target^{img[k]}.
struct MonoMap {
    RingPtr target;
    int s = -1;
    std::vector<Exps> img;
    std::vector<Rational> q;  // 1/a_k on the center, 0 elsewhere
    std::vector<long> cost;   // total degree of img[k]
};

struct Pulled {
    std::map<Exps, Rational> terms;
    int src_prec = kExact;
};

Pulled pull(const MonoMap& M, const Jet& f) {
    Pulled P;
    P.src_prec = f.prec();
    int n = static_cast<int>(M.img.size());
    for (const auto& t : f.terms()) {
        Exps e{};
        for (int k = 0; k < n; ++k)
            if (t.m.e[k])
                for (int j = 0; j < kMaxVars; ++j) e[j] += M.img[k][j] * t.m.e[k];
        auto [it, fresh] = P.terms.try_emplace(e, t.c);
        if (!fresh) {
            it->second += t.c;
            if (it->second == 0) P.terms.erase(it);
        }
    }
    return P;
}

long min_sval(const Pulled& P, int s) {
    long m = LONG_MAX;
    for (const auto& [e, c] : P.terms) m = std::min(m, e[s]);
    return m;
}

/// Lower bound for sum cost_k e_k over real e >= 0 with sum e >= P1 and
/// sum q_k e_k >= A.
long lp_bound(const MonoMap& M, long P1, const Rational& A) {
    int n = static_cast<int>(M.img.size());
    bool have = false;
    Rational best;
    auto consider = [&](const Rational& v) {
        if (!have || v < best) best = v;
        have = true;
    };
    for (int k = 0; k < n; ++k) {
        Rational e = P1;
        if (A > 0) {
            if (M.q[k] == 0) continue;
            e = std::max(e, Rational(A / M.q[k]));
        }
        consider(e * M.cost[k]);
    }
    for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
            Rational det = M.q[l] - M.q[k];
            if (det == 0) continue;
            Rational el = (A - M.q[k] * P1) / det;
            Rational ek = P1 - el;
            if (ek < 0 || el < 0) continue;
            consider(ek * M.cost[k] + el * M.cost[l]);
        }
    if (!have) return 0;
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), best.get_num_mpz_t(), best.get_den_mpz_t());
    return c.get_si();
}

/// Jet of P with the s exponent lowered by `shift`.
Jet build(const MonoMap& M, const Pulled& P, long shift, const Rational& A, const char* what) {
    std::vector<Term> terms;
    for (const auto& [e0, c] : P.terms) {
        Exps e = e0;
        e[M.s] -= shift;
        Term t{Mono{}, c};
        for (int j = 0; j < M.target->nvars(); ++j) {
            if (e[j] < 0) throw DomainError(std::string(what) + ": negative power of the exceptional variable");
            if (e[j] > 255) throw BudgetError("exponent overflow in blow-up transform");
            t.m.e[j] = static_cast<std::uint8_t>(e[j]);
        }
        terms.push_back(t);
    }
    long prec = kExact;
    if (P.src_prec < kExact) {
        prec = lp_bound(M, static_cast<long>(P.src_prec) + 1, A) - shift - 1;
        prec = std::min<long>(prec, M.target->N);
        prec = std::max<long>(prec, -1);
    }
    return Jet::from_terms(M.target, std::move(terms), static_cast<int>(prec));
}

Jet div_s(const Jet& f, int s, long v) {
    if (v == 0) return f;
    std::vector<Term> terms;
    for (auto t : f.terms()) {
        if (t.m.e[s] < v) throw DomainError("internal: s-division of a non-multiple");
        t.m.e[s] = static_cast<std::uint8_t>(t.m.e[s] - v);
        terms.push_back(t);
    }
    int p = f.exact() ? kExact : static_cast<int>(f.prec() - v);
    return Jet::from_terms(f.ring(), std::move(terms), p);
}

MonoMap cobordism_map(const Cobordism& B) {
    MonoMap M;
    M.target = B.target;
    M.s = B.s_index;
    int n = B.source()->nvars();
    for (int k = 0; k < n; ++k) {
        Exps e{};
        e[k] = 1;
        if (B.wi[k]) e[B.s_index] = B.wi[k];
        M.img.push_back(e);
        M.q.push_back(B.wi[k] ? Rational(B.wi[k], B.w) : Rational(0));
        M.cost.push_back(1 + B.wi[k]);
    }
    return M;
}

MonoMap chart_map(const Cobordism& B, const EtaleChart& ch) {
    MonoMap M;
    M.target = ch.ring;
    M.s = ch.index;
    int n = B.source()->nvars();
    for (int k = 0; k < n; ++k) {
        Exps e{};
        if (k == ch.index) {
            e[k] = B.wi[k];
        } else {
            e[k] = 1;
            if (B.wi[k]) e[ch.index] = B.wi[k];
        }
        M.img.push_back(e);
        M.q.push_back(B.wi[k] ? Rational(B.wi[k], B.w) : Rational(0));
        M.cost.push_back(k == ch.index ? B.wi[k] : 1 + B.wi[k]);
    }
    return M;
}

Jet in_chart_coords(const Cobordism& B, const Jet& f) {
    Jet g = same_ring(f.ring(), B.source()) ? f.rebased(B.source()) : embed(f, B.source());
    if (B.center.identity_chart()) return g;
    return to_chart(g, B.inverse_chart);
}

Derivation deriv_in_chart_coords(const Cobordism& B, const Derivation& d) {
    Derivation g(B.source());
    for (int k = 0; k < d.nvars(); ++k) g.coef[k] = d.coef[k].rebased(B.source());
    if (B.center.identity_chart()) return g;
    return change_coordinates(g, B.center.chart, B.inverse_chart);
}

long element_shift(const Cobordism& B, const Pulled& P, TransformMode mode, const Rational& a) {
    if (mode == TransformMode::Controlled) {
        Rational aw = a * B.w;
        if (!is_integer(aw)) throw DomainError("controlled transform needs a*w integral; raise the multiplier");
        return aw.get_num().get_si();
    }
    long m = min_sval(P, B.s_index >= 0 ? B.s_index : 0);
    return m == LONG_MAX ? 0 : m;
}

/// Valuation of the total transform: min over components of sval(c_k) - w_k.
long deriv_valuation(const Cobordism& B, const Derivation& dc, std::vector<Pulled>* comps) {
    MonoMap M = cobordism_map(B);
    long m = LONG_MAX;
    for (int k = 0; k < dc.nvars(); ++k) {
        Pulled P = pull(M, dc.coef[k]);
        long v = min_sval(P, M.s);
        if (v != LONG_MAX) m = std::min(m, v - B.wi[k]);
        if (comps) comps->push_back(std::move(P));
    }
    return m;
}

long deriv_multiplier(long m, DerivMode mode) {
    if (m == LONG_MAX) return 0;
    if (mode == DerivMode::Controlled) return std::max(0L, -m);
    if (mode == DerivMode::Strict) return -m;
    return 0;
}

/// Q-linear reduction of generators whose total transforms share a valuation
/// and have dependent initial forms.
std::vector<Derivation> reduce_initial_forms(const Cobordism& B, std::vector<Derivation> gens, bool poles_only) {
    int limit = 4 * (B.target->N + 1) * static_cast<int>(gens.size() + 1);
    for (int it = 0; it < limit; ++it) {
        std::vector<long> val;
        std::vector<SVec> init;
        for (const auto& g : gens) {
            std::vector<Pulled> comps;
            long m = deriv_valuation(B, g, &comps);
            val.push_back(m);
            std::map<VKey, Rational, VKeyLess> acc;
            if (m != LONG_MAX)
                for (int k = 0; k < static_cast<int>(comps.size()); ++k)
                    for (const auto& [e, c] : comps[k].terms) {
                        if (e[B.s_index] - B.wi[k] != m) continue;
                        Mono mm;
                        for (int j = 0; j < B.source()->nvars(); ++j) mm.e[j] = static_cast<std::uint8_t>(e[j]);
                        acc[VKey{mm, k}] += c;
                    }
            init.emplace_back(acc.begin(), acc.end());
        }
        bool changed = false;
        std::vector<long> groups(val.begin(), val.end());
        std::sort(groups.begin(), groups.end());
        groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
        for (long m : groups) {
            if (m == LONG_MAX || (poles_only && m >= 0)) continue;
            Echelon ech(true);
            for (int k = 0; k < static_cast<int>(gens.size()) && !changed; ++k) {
                if (val[k] != m) continue;
                Combo combo;
                SVec r = ech.reduce(init[k], &combo);
                if (!r.empty()) {
                    ech.insert(init[k], k);
                    continue;
                }
                Derivation h = gens[k];
                for (auto& [t, c] : combo) h = h - gens[t].scaled(c);
                if (h.is_zero())
                    gens.erase(gens.begin() + k);
                else
                    gens[k] = h;
                changed = true;
            }
            if (changed) break;
        }
        if (!changed) return gens;
    }
    throw BudgetError("initial-form reduction did not stabilize");
}

/// Gaussian elimination against d/dx_t for transverse chart coordinates.
std::vector<Derivation> eliminate_transverse(const Cobordism& B, std::vector<Derivation> gens) {
    std::vector<bool> pivot(gens.size(), false);
    for (const auto& e : B.center.transverse) {
        int t = B.source()->index_of(e.var);
        int p = -1;
        for (int k = 0; k < static_cast<int>(gens.size()) && p < 0; ++k)
            if (!pivot[k] && gens[k].coef[t].is_unit()) p = k;
        if (p < 0) continue;
        pivot[p] = true;
        gens[p] = gens[p].times(inverse(gens[p].coef[t]));
        for (int k = 0; k < static_cast<int>(gens.size()); ++k)
            if (k != p && !gens[k].coef[t].is_zero()) gens[k] = gens[k] - gens[p].times(gens[k].coef[t]);
    }
    std::vector<Derivation> out;
    for (auto& g : gens)
        if (!g.is_zero()) out.push_back(std::move(g));
    return out;
}

std::vector<Derivation> prepare_foliation(const Cobordism& B, const Foliation& F, TransformMode mode) {
    std::vector<Derivation> gens;
    for (const auto& g : F.gens) gens.push_back(deriv_in_chart_coords(B, g));
    gens = eliminate_transverse(B, std::move(gens));
    return reduce_initial_forms(B, std::move(gens), mode == TransformMode::Controlled);
}

/// Replace Q-dependencies modulo s by their s-quotients.
Foliation saturate(Foliation F, int s) {
    int N = F.empty() ? 0 : F.gens.front().ring->N;
    int limit = 4 * (N + 1) * static_cast<int>(F.size() + 1);
    for (int it = 0; it < limit; ++it) {
        Echelon ech(true);
        bool changed = false;
        for (int k = 0; k < static_cast<int>(F.gens.size()) && !changed; ++k) {
            std::map<VKey, Rational, VKeyLess> acc;
            const auto& g = F.gens[k];
            for (int c = 0; c < g.nvars(); ++c)
                for (const auto& t : g.coef[c].terms())
                    if (!t.m.e[s]) acc[VKey{t.m, c}] += t.c;
            SVec v(acc.begin(), acc.end());
            Combo combo;
            SVec r = ech.reduce(v, &combo);
            if (!r.empty()) {
                ech.insert(v, k);
                continue;
            }
            Derivation h = g;
            for (auto& [t, c] : combo) h = h - F.gens[t].scaled(c);
            if (h.is_zero()) {
                F.gens.erase(F.gens.begin() + k);
            } else {
                // stay logarithmic along s: the s-coefficient keeps one factor
                long m = LONG_MAX;
                for (int c = 0; c < h.nvars(); ++c)
                    for (const auto& t : h.coef[c].terms()) m = std::min<long>(m, t.m.e[s] - (c == s ? 1 : 0));
                if (m <= 0) continue;
                for (auto& c : h.coef) c = div_s(c, s, m);
                F.gens[k] = h;
            }
            changed = true;
        }
        if (!changed) return F;
    }
    throw BudgetError("s-saturation did not stabilize");
}

Foliation prune_zero(Foliation F) {
    Foliation out;
    for (auto& g : F.gens)
        if (!g.is_zero()) out.gens.push_back(std::move(g));
    return out;
}

}  // namespace

Context Cobordism::target_context(const Context& src) const {
    std::vector<bool> d(target->nvars(), false);
    for (int i = 0; i < src.nvars(); ++i) d[i] = src.is_divisor(i);
    d[s_index] = true;
    return Context(target, d);
}

Cobordism build_cobordant(const Center& C, long multiplier) {
    if (multiplier < 1) throw DomainError("multiplier must be positive");
    if (C.empty()) throw DomainError("empty center");
    Cobordism B;
    B.center = C;
    auto ents = C.entries();
    Rational L = ents.front().weight;
    for (const auto& e : ents) L = rat_lcm(L, e.weight);
    L *= multiplier;
    if (!is_integer(L)) throw DomainError("weight lcm is not an integer; raise the multiplier");
    B.w = L.get_num().get_si();
    const RingPtr& ring = C.ring;
    int n = ring->nvars();
    B.wi.assign(n, 0);
    for (const auto& e : ents) {
        int i = ring->index_of(e.var);
        if (i < 0) throw DomainError("center variable '" + e.var + "' not in ring");
        Rational q = L / e.weight;
        if (!is_integer(q)) throw DomainError("w is not a multiple of the weight of " + e.var);
        B.wi[i] = q.get_num().get_si();
    }
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(B.wi[i] ? ring->names[i] + "'" : ring->names[i]);
    std::string s = "s";
    for (int k = 0; std::find(names.begin(), names.end(), s) != names.end(); ++k) s = "s" + std::to_string(k);
    names.push_back(s);
    if (static_cast<int>(names.size()) > kMaxVars) throw DomainError("too many variables for the cobordism");
    B.target = make_ring(names, 250);
    B.s_index = n;
    for (int i = 0; i < n; ++i) {
        Mono m;
        m.e[i] = 1;
        if (B.wi[i]) m.e[n] = static_cast<std::uint8_t>(B.wi[i]);
        B.subst.push_back(Jet::monomial(B.target, m, 1));
    }
    B.inverse_chart = chart_inverse(C);
    return B;
}

Jet pullback(const Cobordism& B, const Jet& f) {
    MonoMap M = cobordism_map(B);
    return build(M, pull(M, in_chart_coords(B, f)), 0, 0, "pullback");
}

ElementTransform transform_element(const Cobordism& B, const Jet& f, TransformMode mode, const Rational& a) {
    MonoMap M = cobordism_map(B);
    Pulled P = pull(M, in_chart_coords(B, f));
    long shift = element_shift(B, P, mode, a);
    ElementTransform t;
    t.exponent = shift;
    t.cofactor = build(M, P, shift, a, "controlled transform (generator not in the center's graded piece)");
    return t;
}

ReesAlgebra transform_rees(const Cobordism& B, const ReesAlgebra& R, TransformMode mode) {
    ReesAlgebra out(B.target);
    for (const auto& g : R.gens) {
        Jet c = transform_element(B, g.f, mode, g.deg).cofactor;
        if (!c.is_zero()) out.gens.push_back({c, g.deg});
    }
    return out;
}

DerivationTransform transform_derivation(const Cobordism& B, const Derivation& d, DerivMode mode) {
    Derivation dc = deriv_in_chart_coords(B, d);
    std::vector<Pulled> comps;
    long m = deriv_valuation(B, dc, &comps);
    MonoMap M = cobordism_map(B);
    DerivationTransform out;
    out.d = Derivation(B.target);
    if (m == LONG_MAX) return out;
    long r = deriv_multiplier(m, mode);
    out.exponent = mode == DerivMode::Total ? m : r;
    long base = mode == DerivMode::Total ? m : -r;
    for (int k = 0; k < dc.nvars(); ++k)
        out.d.coef[k] = build(M, comps[k], B.wi[k] + base, 0, "derivation transform");
    return out;
}

Foliation transform_foliation(const Cobordism& B, const Foliation& F, TransformMode mode) {
    Foliation out;
    if (F.empty()) return out;
    DerivMode dm = mode == TransformMode::Controlled ? DerivMode::Controlled : DerivMode::Strict;
    for (const auto& g : prepare_foliation(B, F, mode)) out.gens.push_back(transform_derivation(B, g, dm).d);
    out = prune_zero(std::move(out));
    if (mode == TransformMode::Strict) out = saturate(std::move(out), B.s_index);
    return out;
}

// ---------------------------------------------------------------- charts

EtaleChart etale_chart(const Cobordism& B, int i) {
    const RingPtr& ring = B.source();
    if (i < 0 || i >= ring->nvars() || !B.in_center(i)) throw DomainError("chart index must be a center variable");
    EtaleChart ch;
    ch.index = i;
    ch.order = B.wi[i];
    int n = ring->nvars();
    std::vector<std::string> names;
    for (int k = 0; k < n; ++k) names.push_back(k == i ? "s~" : (B.wi[k] ? ring->names[k] + "~" : ring->names[k]));
    ch.ring = make_ring(names, ring->N);
    for (int k = 0; k < n; ++k) {
        Mono m;
        if (k == i) {
            m.e[i] = static_cast<std::uint8_t>(B.wi[i]);
        } else {
            m.e[k] = 1;
            if (B.wi[k]) m.e[i] = static_cast<std::uint8_t>(B.wi[k]);
        }
        ch.subst.push_back(Jet::from_terms(make_ring(names, 250), {{m, 1}}));
    }
    ch.mu.push_back({"s~", -1});
    for (int k = 0; k < n; ++k)
        if (k != i && B.wi[k]) ch.mu.push_back({names[k], B.wi[k]});
    return ch;
}

EtaleChart etale_chart(const Cobordism& B, const std::string& var) {
    int i = B.source()->index_of(var);
    if (i < 0) throw DomainError("unknown chart variable '" + var + "'");
    return etale_chart(B, i);
}

Context chart_context(const Cobordism& B, const EtaleChart& ch, const Context& src) {
    std::vector<bool> d(src.nvars(), false);
    for (int k = 0; k < src.nvars(); ++k) d[k] = k == ch.index ? true : src.is_divisor(k);
    (void)B;
    return Context(ch.ring, d);
}

ElementTransform chart_transform_element(const Cobordism& B, const EtaleChart& ch, const Jet& f, TransformMode mode,
                                         const Rational& a) {
    Jet fc = in_chart_coords(B, f);
    // the exponent ledger is the cobordism's; the chart map is injective on monomials
    MonoMap MB = cobordism_map(B);
    long shift = element_shift(B, pull(MB, fc), mode, a);
    MonoMap M = chart_map(B, ch);
    ElementTransform t;
    t.exponent = shift;
    t.cofactor = build(M, pull(M, fc), shift, a, "controlled transform (generator not in the center's graded piece)");
    return t;
}

ReesAlgebra chart_transform_rees(const Cobordism& B, const EtaleChart& ch, const ReesAlgebra& R, TransformMode mode) {
    ReesAlgebra out(ch.ring);
    for (const auto& g : R.gens) {
        Jet c = chart_transform_element(B, ch, g.f, mode, g.deg).cofactor;
        if (!c.is_zero()) out.gens.push_back({c, g.deg});
    }
    return out;
}

namespace {

DerivationTransform chart_derivation_in_coords(const Cobordism& B, const EtaleChart& ch, const Derivation& dc,
                                               DerivMode mode) {
    long m = deriv_valuation(B, dc, nullptr);
    DerivationTransform out;
    out.d = Derivation(ch.ring);
    if (m == LONG_MAX) return out;
    long r = deriv_multiplier(m, mode);
    long base = mode == DerivMode::Total ? m : -r;
    out.exponent = mode == DerivMode::Total ? m : r;
    MonoMap M = chart_map(B, ch);
    int n = dc.nvars();
    int i = ch.index;
    // T_k = tau(c_k) s~^{-w_k - base}; the chart variable's field is
    // (1/w_i)(s~ d/ds~ - sum_j w_j x_j~ d/dx_j~).
    std::vector<Jet> T;
    for (int k = 0; k < n; ++k) {
        long shift = B.wi[k] + base;
        if (k == i) shift -= 1;  // times s~ for the Euler part
        T.push_back(build(M, pull(M, dc.coef[k]), shift, 0, "chart derivation transform"));
    }
    Rational wi(B.wi[i]);
    out.d.coef[i] = T[i].scaled(1 / wi);
    for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        Jet c = T[k];
        if (B.wi[k] && !T[i].is_zero()) {
            // x_k~ * T_i / s~ : T_i carries one extra s~ factor
            Mono xk;
            xk.e[k] = 1;
            Jet ti = div_s(T[i], i, 1).times_mono(xk, 1);
            c -= ti.scaled(Rational(B.wi[k]) / wi);
        }
        out.d.coef[k] = c;
    }
    return out;
}

}  // namespace

DerivationTransform chart_transform_derivation(const Cobordism& B, const EtaleChart& ch, const Derivation& d,
                                               DerivMode mode) {
    return chart_derivation_in_coords(B, ch, deriv_in_chart_coords(B, d), mode);
}

Foliation chart_transform_foliation(const Cobordism& B, const EtaleChart& ch, const Foliation& F, TransformMode mode) {
    Foliation out;
    if (F.empty()) return out;
    DerivMode dm = mode == TransformMode::Controlled ? DerivMode::Controlled : DerivMode::Strict;
    for (const auto& g : prepare_foliation(B, F, mode)) out.gens.push_back(chart_derivation_in_coords(B, ch, g, dm).d);
    out = prune_zero(std::move(out));
    if (mode == TransformMode::Strict) out = saturate(std::move(out), ch.index);
    return out;
}

std::string cobordism_report(const Cobordism& B) {
    std::ostringstream os;
    os << "w " << B.w << "\n";
    for (int i = 0; i < B.source()->nvars(); ++i)
        os << B.source()->names[i] << " -> " << to_string(B.subst[i]) << "\n";
    return os.str();
}

std::string chart_report(const Cobordism& B, const EtaleChart& ch) {
    std::ostringstream os;
    for (int i = 0; i < B.source()->nvars(); ++i)
        os << B.source()->names[i] << " -> " << to_string(ch.subst[i]) << "\n";
    os << "mu " << ch.order << ":";
    for (std::size_t k = 0; k < ch.mu.size(); ++k)
        os << (k ? ", " : " ") << ch.mu[k].first << " -> " << ch.mu[k].second;
    os << "\n";
    return os.str();
}

long rees_multiplier(const Center& C, const ReesAlgebra& R) {
    auto ents = C.entries();
    if (ents.empty()) return 1;
    Rational L = ents.front().weight;
    for (const auto& e : ents) L = rat_lcm(L, e.weight);
    mpz_class m = L.get_den();
    for (const auto& g : R.gens) {
        Rational q = L * m * g.deg;
        m *= q.get_den();
    }
    return m.get_si();
}

}  // namespace folres
