#include "folres/foliation.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "folres/linalg.hpp"

namespace folres {

Derivation::Derivation(RingPtr r) : ring(std::move(r)) {
    coef.assign(ring->nvars(), Jet::zero(ring));
}

Derivation::Derivation(RingPtr r, std::vector<Jet> c) : ring(std::move(r)), coef(std::move(c)) {
    if (static_cast<int>(coef.size()) != ring->nvars()) throw DomainError("derivation arity mismatch");
    for (const auto& j : coef)
        if (!same_ring(j.ring(), ring)) throw DomainError("context mismatch");
}

Derivation Derivation::basis(RingPtr r, int i) {
    Derivation d(r);
    d.coef[i] = Jet::constant(r, 1);
    return d;
}

bool Derivation::is_zero() const {
    return std::all_of(coef.begin(), coef.end(), [](const Jet& j) { return j.is_zero(); });
}

int Derivation::prec() const {
    int p = kExact;
    for (const auto& c : coef) p = std::min(p, c.prec());
    return p;
}

bool Derivation::is_logarithmic(const Context& ctx) const {
    for (int i = 0; i < nvars(); ++i) {
        if (!ctx.is_divisor(i)) continue;
        for (const auto& t : coef[i].terms())
            if (t.m.e[i] == 0) return false;
    }
    return true;
}

Derivation Derivation::operator+(const Derivation& o) const {
    Derivation r = *this;
    for (int i = 0; i < nvars(); ++i) r.coef[i] += o.coef[i];
    return r;
}

Derivation Derivation::operator-(const Derivation& o) const {
    Derivation r = *this;
    for (int i = 0; i < nvars(); ++i) r.coef[i] -= o.coef[i];
    return r;
}

Derivation Derivation::times(const Jet& f) const {
    Derivation r = *this;
    for (auto& c : r.coef) c = c * f;
    return r;
}

Derivation Derivation::scaled(const Rational& c) const {
    Derivation r = *this;
    for (auto& x : r.coef) x = x.scaled(c);
    return r;
}

bool Derivation::operator==(const Derivation& o) const {
    if (!same_ring(ring, o.ring)) return false;
    for (int i = 0; i < nvars(); ++i)
        if (coef[i] != o.coef[i]) return false;
    return true;
}

Derivation parse_derivation(const std::string& text, const RingPtr& ring, int line) {
    return Derivation(ring, parse_vector_field(text, ring, line));
}

std::string to_string(const Derivation& d) {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < d.nvars(); ++i) {
        const Jet& c = d.coef[i];
        if (c.is_zero()) continue;
        std::string basis = "d/d" + d.ring->names[i];
        std::string body;
        bool neg = false;
        if (c.size() == 1) {
            Jet a = c;
            if (c.terms()[0].c < 0) {
                neg = true;
                a = -c;
            }
            std::string s = to_string(a);
            body = s == "1" ? basis : s + "*" + basis;
        } else {
            body = "(" + to_string(c) + ")*" + basis;
        }
        if (first)
            os << (neg ? "-" : "") << body;
        else
            os << (neg ? " - " : " + ") << body;
        first = false;
    }
    return first ? "0" : os.str();
}

std::string to_string(const Foliation& F) {
    if (F.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < F.size(); ++i) {
        if (i) s += "; ";
        s += to_string(F.gens[i]);
    }
    return s;
}

Foliation full_foliation(const RingPtr& ring) {
    Foliation F;
    for (int i = 0; i < ring->nvars(); ++i) F.gens.push_back(Derivation::basis(ring, i));
    return F;
}

Foliation log_foliation(const Context& ctx) {
    Foliation F;
    for (int i = 0; i < ctx.nvars(); ++i) {
        Derivation d(ctx.ring);
        d.coef[i] = ctx.is_divisor(i) ? Jet::var(ctx.ring, i) : Jet::constant(ctx.ring, 1);
        F.gens.push_back(d);
    }
    return F;
}

Jet apply_derivation(const Derivation& d, const Jet& f) {
    if (!same_ring(d.ring, f.ring())) throw DomainError("context mismatch");
    Jet r = Jet::zero(f.ring());
    bool any = false;
    for (int i = 0; i < d.nvars(); ++i) {
        if (d.coef[i].is_zero() && d.coef[i].exact()) continue;
        r += d.coef[i] * f.deriv(i);
        any = true;
    }
    if (!any && !f.exact()) r = r.with_prec(f.prec() - 1);
    return r;
}

Derivation lie_bracket(const Derivation& a, const Derivation& b) {
    if (!same_ring(a.ring, b.ring)) throw DomainError("context mismatch");
    Derivation r(a.ring);
    for (int i = 0; i < a.nvars(); ++i) r.coef[i] = apply_derivation(a, b.coef[i]) - apply_derivation(b, a.coef[i]);
    return r;
}

InvolutivityReport check_involutive(const Foliation& F, int D) {
    InvolutivityReport rep;
    if (F.gens.size() < 2) return rep;
    const RingPtr& ring = F.gens.front().ring;
    if (D < 0) D = ring->N - 1;
    std::vector<std::vector<Jet>> gens;
    int p = kExact;
    for (const auto& g : F.gens) {
        gens.push_back(g.coef);
        p = std::min(p, g.prec());
    }
    for (std::size_t i = 0; i < F.size(); ++i)
        for (std::size_t j = i + 1; j < F.size(); ++j) {
            Derivation br = lie_bracket(F.gens[i], F.gens[j]);
            int bound = std::min(D, br.prec());
            if (bound < 0) {
                rep.decided = false;
                rep.involutive = false;
                rep.first = static_cast<int>(i);
                rep.second = static_cast<int>(j);
                return rep;
            }
            rep.degree_bound = bound;
            if (!module_contains(gens, br.coef, bound)) {
                rep.involutive = false;
                rep.witness = br;
                rep.first = static_cast<int>(i);
                rep.second = static_cast<int>(j);
                return rep;
            }
        }
    return rep;
}

IdealGens f_apply_ideal(const Foliation& F, const IdealGens& I) {
    IdealGens out;
    auto push = [&](const Jet& g) {
        if (g.is_zero()) return;
        for (const auto& h : out)
            if (h == g) return;
        out.push_back(g);
    };
    for (const auto& f : I) push(f);
    for (const auto& f : I)
        for (const auto& d : F.gens) push(apply_derivation(d, f));
    if (out.empty() && !I.empty()) out.push_back(I.front());
    return out;
}

// ---------------------------------------------------------------- towers

namespace {

int effective_bound(const RingPtr& ring, int prec) { return std::min(ring->N, prec); }

}  // namespace

Tower build_tower(const Foliation& F, const std::vector<Jet>& seeds, const TowerOptions& opt) {
    Tower T;
    if (seeds.empty()) {
        T.stable = true;
        return T;
    }
    const RingPtr& ring = seeds.front().ring();
    int P = ring->N;
    for (const auto& s : seeds) P = std::min(P, effective_bound(ring, s.prec()));
    if (P < 0) throw BudgetError("precision exhausted in derivative tower");

    Echelon ech;
    T.levels.emplace_back();
    for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
        const Jet& s = seeds[i];
        if (ech.insert(to_svec(s, P))) {
            T.levels[0].push_back({s, {}, i});
            if (T.unit_level < 0 && s.is_unit()) T.unit_level = 0;
        }
    }
    if (T.levels[0].empty()) {
        T.stable = true;
        T.precision = P;
        return T;
    }
    if (T.unit_level == 0 && opt.stop_at_unit) {
        T.precision = P;
        return T;
    }
    std::optional<IdealMembership> mem;
    std::size_t in_mem = 0;
    for (int k = 1;; ++k) {
        if (opt.max_level >= 0 && k > opt.max_level) break;
        std::vector<Tower::Elem> level;
        bool unit_here = false;
        for (const auto& e : T.levels[k - 1]) {
            for (int j = 0; j < static_cast<int>(F.gens.size()); ++j) {
                Jet g = apply_derivation(F.gens[j], e.f);
                int gp = effective_bound(ring, g.prec());
                if (gp < P) {
                    P = gp;
                    if (P < 0) throw BudgetError("precision exhausted in derivative tower");
                    ech = Echelon();
                    for (auto& lvl : T.levels)
                        for (auto& x : lvl) ech.insert(to_svec(x.f, P));
                    for (auto& x : level) ech.insert(to_svec(x.f, P));
                }
                if (ech.insert(to_svec(g, P))) {
                    std::vector<int> w = e.word;
                    w.push_back(j);
                    if (g.is_unit()) unit_here = true;
                    level.push_back({g, std::move(w), e.seed});
                }
            }
        }
        if (level.empty()) {
            T.stable = true;
            break;
        }
        if (unit_here && T.unit_level < 0) T.unit_level = k;
        bool ideal_stable = false;
        if (opt.ideal_stabilization && k >= 2 && !unit_here) {
            // grown level by level; rebuilt when the precision drops
            if (!mem || mem->degree_bound() != P) {
                mem.emplace(std::vector<Jet>{}, P);
                in_mem = 0;
            }
            for (; in_mem < T.levels.size(); ++in_mem)
                for (auto& x : T.levels[in_mem]) mem->add(x.f.truncated(P));
            ideal_stable = std::all_of(level.begin(), level.end(),
                                       [&](const Tower::Elem& x) { return mem->contains(x.f); });
        }
        T.levels.push_back(std::move(level));
        if (unit_here && opt.stop_at_unit) break;
        if (ideal_stable) {
            T.stable = true;
            break;
        }
    }
    T.precision = P;
    return T;
}

FOrder f_order_at(const Foliation& F, const IdealGens& I) {
    std::vector<Jet> seeds;
    for (const auto& f : I)
        if (!f.is_zero()) seeds.push_back(f);
    if (seeds.empty()) return FOrder::inf();
    Tower T = build_tower(F, seeds);
    if (T.unit_level >= 0) return FOrder::fin(T.unit_level);
    if (T.stable) return FOrder::inf();
    throw BudgetError("derivative chain neither reached a unit nor stabilized");
}

// ---------------------------------------------------------------- ranks

int matrix_rank(const std::vector<std::vector<Rational>>& rows) {
    Echelon ech;
    for (const auto& r : rows) {
        SVec v;
        for (int c = 0; c < static_cast<int>(r.size()); ++c)
            if (r[c] != 0) v.push_back({VKey{Mono{}, c}, r[c]});
        ech.insert(v);
    }
    return static_cast<int>(ech.rank());
}

namespace {

Jet as_polynomial(const Jet& f) {
    if (f.exact()) return f;
    return Jet::from_terms(f.ring(), f.terms(), kExact);
}

std::vector<Rational> sample_point(int n, int k) {
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    std::vector<Rational> p(n);
    for (int i = 0; i < n; ++i) {
        Rational q(primes[(k + 3 * i) % 16], primes[(2 * k + i + 5) % 16] + k);
        q.canonicalize();
        p[i] = q;
    }
    return p;
}

}  // namespace

int sm_rank_at(const Foliation& F, const std::vector<Rational>& point) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& d : F.gens) {
        std::vector<Rational> r;
        for (const auto& c : d.coef) r.push_back(evaluate(as_polynomial(c), point));
        rows.push_back(r);
    }
    return matrix_rank(rows);
}

int generic_rank(const Foliation& F) {
    if (F.empty()) return 0;
    int n = F.gens.front().nvars();
    int best = 0;
    for (int k = 0; k < 8; ++k) best = std::max(best, sm_rank_at(F, sample_point(n, k)));
    return best;
}

bool log_smooth_at(const Foliation& F, const Context& ctx) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& d : F.gens) {
        if (!d.is_logarithmic(ctx)) throw DomainError("generator is not logarithmic");
        std::vector<Rational> r;
        for (int i = 0; i < d.nvars(); ++i) {
            if (ctx.is_divisor(i)) {
                Mono m;
                m.e[i] = 1;
                r.push_back(d.coef[i].coeff(m));
            } else {
                r.push_back(d.coef[i].const_term());
            }
        }
        rows.push_back(r);
    }
    return matrix_rank(rows) == generic_rank(F);
}

// ---------------------------------------------------------------- restriction

RingPtr drop_variable(const RingPtr& ring, int i) {
    std::vector<std::string> names = ring->names;
    names.erase(names.begin() + i);
    return make_ring(names, ring->N);
}

Jet restrict_var_zero(const Jet& f, int i, const RingPtr& hring) {
    std::vector<Term> terms;
    int n = f.ring()->nvars();
    for (const auto& t : f.terms()) {
        if (t.m.e[i]) continue;
        Term nt{Mono{}, t.c};
        for (int k = 0, j = 0; k < n; ++k) {
            if (k == i) continue;
            nt.m.e[j++] = t.m.e[k];
        }
        terms.push_back(nt);
    }
    return Jet::from_terms(hring, std::move(terms), f.prec());
}

Foliation restrict_to_hypersurface(const Foliation& split, int x1, RingPtr* hring_out) {
    if (split.empty()) throw DomainError("empty split presentation");
    const RingPtr& ring = split.gens.front().ring;
    RingPtr hring = drop_variable(ring, x1);
    Foliation out;
    for (const auto& d : split.gens) {
        if (!d.coef[x1].is_zero()) {
            bool is_dx = true;
            for (int i = 0; i < d.nvars(); ++i) {
                const Jet& c = d.coef[i];
                if (i == x1)
                    is_dx = is_dx && c.size() == 1 && c.terms()[0].m.deg() == 0 && c.terms()[0].c == 1;
                else
                    is_dx = is_dx && c.is_zero();
            }
            if (!is_dx) throw DomainError("generators not in split form along " + ring->names[x1]);
            continue;
        }
        Derivation r(hring);
        for (int i = 0, j = 0; i < d.nvars(); ++i) {
            if (i == x1) continue;
            r.coef[j++] = restrict_var_zero(d.coef[i], x1, hring);
        }
        if (!r.is_zero()) out.gens.push_back(r);
    }
    if (hring_out) *hring_out = hring;
    return out;
}

}  // namespace folres
