#include "folres/rees.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "folres/linalg.hpp"

namespace folres {

ReesAlgebra::ReesAlgebra(RingPtr r, std::vector<ReesGen> g) : ring(std::move(r)), gens(std::move(g)) {
    for (const auto& x : gens)
        if (x.deg <= 0) throw DomainError("Rees generator degrees must be positive");
}

bool ReesAlgebra::trivial() const {
    return std::any_of(gens.begin(), gens.end(), [](const ReesGen& g) { return g.f.is_unit(); });
}

std::string to_string(const ReesAlgebra& R) {
    std::ostringstream os;
    for (const auto& g : R.gens) os << "gen " << to_string(g.f) << " deg " << to_string(g.deg) << "\n";
    return os.str();
}

ReesAlgebra parse_rees(const std::string& text, const RingPtr& ring) {
    ReesAlgebra R(ring);
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        line = line.substr(b);
        if (line.rfind("gen ", 0) != 0) throw ParseError(lineno, "expected 'gen <poly> deg <rational>'");
        auto d = line.rfind(" deg ");
        if (d == std::string::npos) throw ParseError(lineno, "missing 'deg'");
        Jet f = parse_poly(line.substr(4, d - 4), ring, lineno);
        std::string ds = line.substr(d + 5);
        ds.erase(ds.find_last_not_of(" \t\r") + 1);
        Rational q;
        try {
            q = parse_rational(ds);
        } catch (const DomainError& e) {
            throw ParseError(lineno, e.what());
        }
        if (q <= 0) throw ParseError(lineno, "degree must be positive");
        R.gens.push_back({f, q});
    }
    return R;
}

ReesAlgebra rees_from_ideal(const IdealGens& I) {
    if (I.empty()) throw DomainError("empty ideal");
    ReesAlgebra R(I.front().ring());
    for (const auto& f : I)
        if (!f.is_zero()) R.gens.push_back({f, 1});
    return R;
}

IdealGens ideal_from_rees(const ReesAlgebra& R) {
    if (R.gens.empty()) throw DomainError("empty Rees algebra");
    Rational b = R.gens.front().deg;
    for (const auto& g : R.gens) b = rat_lcm(b, g.deg);
    IdealGens out;
    for (const auto& g : R.gens) {
        Rational n = b / g.deg;
        if (!is_integer(n)) throw DomainError("degree lcm failed");
        long k = n.get_num().get_si();
        if (g.f.ord() * k > g.f.ring()->N && !g.f.is_zero() && !g.f.is_unit())
            throw BudgetError("power exceeds truncation order");
        out.push_back(pow(g.f, static_cast<int>(k)));
    }
    return out;
}

IdealGens graded_piece(const ReesAlgebra& R, const Rational& b) {
    IdealGens out;
    if (b <= 0) {
        out.push_back(Jet::constant(R.ring, 1));
        return out;
    }
    int m = static_cast<int>(R.gens.size());
    std::vector<int> n(m, 0);
    // Enumerate exponent vectors with sum n_i d_i >= b that are minimal.
    std::function<void(int, Rational)> rec = [&](int i, Rational acc) {
        if (acc >= b) {
            for (int j = 0; j < m; ++j)
                if (n[j] > 0 && acc - R.gens[j].deg >= b) return;
            Jet p = Jet::constant(R.ring, 1);
            for (int j = 0; j < m; ++j)
                if (n[j]) p = p * pow(R.gens[j].f, n[j]);
            out.push_back(p);
            return;
        }
        if (i == m) return;
        for (int k = 0;; ++k) {
            n[i] = k;
            rec(i + 1, acc + k * R.gens[i].deg);
            if (acc + k * R.gens[i].deg >= b) break;
        }
        n[i] = 0;
    };
    rec(0, 0);
    return out;
}

ExtRational f_order_rees(const Foliation& F, const ReesAlgebra& R) {
    if (R.gens.empty()) throw DomainError("empty Rees algebra");
    ExtRational best = ExtRational::inf();
    for (const auto& g : R.gens) {
        FOrder o = f_order_at(F, {g.f});
        if (o.infinite) continue;
        Rational v = Rational(o.value) / g.deg;
        if (best.infinite || v < best.value) best = ExtRational::fin(v);
    }
    return best;
}

namespace {

/// Keep elements independent of the Q-span of those with degree >= theirs.
ReesAlgebra prune_by_span(const RingPtr& ring, std::vector<ReesGen> elems) {
    int P = ring->N;
    for (const auto& e : elems) P = std::min(P, e.f.prec());
    std::stable_sort(elems.begin(), elems.end(), [](const ReesGen& a, const ReesGen& b) { return a.deg > b.deg; });
    Echelon ech;
    ReesAlgebra out(ring);
    for (auto& e : elems)
        if (ech.insert(to_svec(e.f, P))) out.gens.push_back(std::move(e));
    return out;
}

Jet monic(const Jet& f) {
    if (f.is_zero()) return f;
    return f.scaled(1 / f.terms().back().c);
}

}  // namespace

ReesAlgebra f_infty(const Foliation& F, const ReesAlgebra& R) {
    if (F.empty()) return R;
    std::vector<ReesGen> elems;
    for (const auto& g : R.gens) {
        TowerOptions opt;
        opt.stop_at_unit = false;
        Tower T = build_tower(F, {g.f}, opt);
        if (!T.stable) throw BudgetError("F-closure did not stabilize");
        for (std::size_t k = 0; k < T.levels.size(); ++k)
            for (const auto& e : T.levels[k]) elems.push_back({k == 0 ? e.f : monic(e.f), g.deg});
    }
    return prune_by_span(R.ring, std::move(elems));
}

bool is_f_invariant(const Foliation& F, const ReesAlgebra& R, int D) {
    for (const auto& g : R.gens) {
        IdealGens piece = graded_piece(R, g.deg);
        for (const auto& d : F.gens) {
            Jet h = apply_derivation(d, g.f);
            int bound = D >= 0 ? D : std::min(R.ring->N - 1, h.prec());
            if (bound < 0) throw BudgetError("precision exhausted in invariance test");
            if (h.is_zero()) continue;
            if (!ideal_contains(piece, h, bound)) return false;
        }
    }
    return true;
}

ReesAlgebra coefficient_rees(const ReesAlgebra& R, const Foliation& F, const Rational& a) {
    if (a <= 0) throw DomainError("coefficient algebra needs positive order");
    std::vector<ReesGen> elems;
    for (const auto& g : R.gens) {
        Rational ab = a * g.deg;
        mpz_class c;
        mpz_cdiv_q(c.get_mpz_t(), ab.get_num_mpz_t(), ab.get_den_mpz_t());
        int top = static_cast<int>(c.get_si()) - 1;  // alpha < a*b
        if (top < 0) continue;
        TowerOptions opt;
        opt.max_level = top;
        opt.stop_at_unit = false;
        Tower T = build_tower(F, {g.f}, opt);
        for (std::size_t k = 0; k < T.levels.size() && static_cast<int>(k) <= top; ++k)
            for (const auto& e : T.levels[k])
                elems.push_back({k == 0 ? e.f : monic(e.f), g.deg - Rational(static_cast<long>(k)) / a});
    }
    return prune_by_span(R.ring, std::move(elems));
}

// ---------------------------------------------------------------- invariants

std::string InvValue::str() const {
    std::string off = to_string(offset);
    switch (tier) {
        case 0: return off;
        case 1: return "inf+" + off;
        case 2: return "inf+inf+" + off;
        default: return "top";
    }
}

int compare(const InvValue& a, const InvValue& b) {
    if (a.tier != b.tier) return a.tier < b.tier ? -1 : 1;
    if (a.tier == 3) return 0;
    return a.offset < b.offset ? -1 : (b.offset < a.offset ? 1 : 0);
}

std::string InvVector::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) s += ", ";
        s += entries[i].str();
    }
    return s + ")";
}

int compare_inv(const InvVector& u, const InvVector& v) {
    std::size_t n = std::max(u.size(), v.size());
    for (std::size_t i = 0; i < n; ++i) {
        InvValue a = i < u.size() ? u.entries[i] : InvValue::top();
        InvValue b = i < v.size() ? v.entries[i] : InvValue::top();
        int c = compare(a, b);
        if (c) return c;
    }
    return 0;
}

bool operator<(const InvVector& u, const InvVector& v) { return compare_inv(u, v) < 0; }
bool operator==(const InvVector& u, const InvVector& v) { return compare_inv(u, v) == 0; }

InvVector parse_inv(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '(' && c != ')') s += c;
    InvVector v;
    if (s.empty()) return v;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        InvValue x;
        for (;;) {
            if (item.rfind("inf+", 0) == 0) {
                item = item.substr(4);
                ++x.tier;
            } else if (item.rfind("∞+", 0) == 0) {
                item = item.substr(std::string("∞+").size());
                ++x.tier;
            } else {
                break;
            }
        }
        if (item == "top") {
            x = InvValue::top();
        } else {
            if (x.tier > 2) throw DomainError("invalid invariant entry");
            x.offset = parse_rational(item);
            if (x.offset < 0) throw DomainError("negative invariant entry");
        }
        v.entries.push_back(x);
    }
    return v;
}

// ---------------------------------------------------------------- centers

Center::Center(RingPtr r) : ring(std::move(r)) {
    for (int i = 0; i < ring->nvars(); ++i) chart.push_back(Jet::var(ring, i));
}

std::vector<CenterEntry> Center::entries() const {
    std::vector<CenterEntry> out = transverse;
    out.insert(out.end(), invariant.begin(), invariant.end());
    out.insert(out.end(), divisorial.begin(), divisorial.end());
    return out;
}

Rational Center::weight_of(int var) const {
    const std::string& name = ring->names[var];
    for (const auto* t : {&transverse, &invariant, &divisorial})
        for (const auto& e : *t)
            if (e.var == name) return e.weight;
    return 0;
}

const std::vector<CenterEntry>& Center::tier(Tier t) const {
    switch (t) {
        case Tier::Transverse: return transverse;
        case Tier::Invariant: return invariant;
        default: return divisorial;
    }
}

std::vector<CenterEntry>& Center::tier(Tier t) {
    return const_cast<std::vector<CenterEntry>&>(static_cast<const Center&>(*this).tier(t));
}

void Center::sort_tiers() {
    auto by_w = [](const CenterEntry& a, const CenterEntry& b) { return a.weight < b.weight; };
    std::stable_sort(transverse.begin(), transverse.end(), by_w);
    std::stable_sort(invariant.begin(), invariant.end(), by_w);
    std::stable_sort(divisorial.begin(), divisorial.end(), by_w);
}

bool Center::identity_chart() const {
    for (int i = 0; i < static_cast<int>(chart.size()); ++i)
        if (!(chart[i] == Jet::var(ring, i))) return false;
    return true;
}

std::string to_string(const Center& C) {
    std::ostringstream os;
    for (const auto& e : C.transverse) os << "transverse " << e.var << " " << to_string(e.weight) << "\n";
    for (const auto& e : C.invariant) os << "invariant " << e.var << " " << to_string(e.weight) << "\n";
    for (const auto& e : C.divisorial) os << "divisorial " << e.var << " " << to_string(e.weight) << "\n";
    for (int i = 0; i < static_cast<int>(C.chart.size()); ++i)
        if (!(C.chart[i] == Jet::var(C.ring, i)))
            os << "chart " << C.ring->names[i] << " = " << to_string(C.chart[i]) << "\n";
    return os.str();
}

Center parse_center(const std::vector<std::pair<int, std::string>>& lines, const RingPtr& ring) {
    Center C(ring);
    for (const auto& [lineno, raw] : lines) {
        std::istringstream is(raw);
        std::string kind, var;
        is >> kind >> var;
        int idx = ring->index_of(var);
        if (idx < 0) throw ParseError(lineno, "unknown variable '" + var + "'");
        if (kind == "chart") {
            std::string rest;
            std::getline(is, rest);
            auto eq = rest.find('=');
            if (eq == std::string::npos) throw ParseError(lineno, "expected 'chart <var> = <poly>'");
            C.chart[idx] = parse_poly(rest.substr(eq + 1), ring, lineno);
            continue;
        }
        std::string w;
        is >> w;
        Rational q;
        try {
            q = parse_rational(w);
        } catch (const DomainError& e) {
            throw ParseError(lineno, e.what());
        }
        if (q <= 0) throw ParseError(lineno, "center weights must be positive");
        for (const auto& e : C.entries())
            if (e.var == var) throw ParseError(lineno, "variable '" + var + "' listed twice");
        if (kind == "transverse")
            C.transverse.push_back({var, q});
        else if (kind == "invariant")
            C.invariant.push_back({var, q});
        else if (kind == "divisorial")
            C.divisorial.push_back({var, q});
        else
            throw ParseError(lineno, "unknown center line '" + kind + "'");
    }
    C.sort_tiers();
    return C;
}

InvVector center_inv(const Center& C) {
    InvVector v;
    for (const auto& e : C.transverse) v.entries.push_back({0, e.weight});
    for (const auto& e : C.invariant) v.entries.push_back({1, e.weight});
    for (const auto& e : C.divisorial) v.entries.push_back({2, e.weight});
    return v;
}

namespace {

std::vector<std::vector<Rational>> invert_matrix(std::vector<std::vector<Rational>> A) {
    int n = static_cast<int>(A.size());
    std::vector<std::vector<Rational>> I(n, std::vector<Rational>(n, 0));
    for (int i = 0; i < n; ++i) I[i][i] = 1;
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && A[p][c] == 0) ++p;
        if (p == n) throw DomainError("coordinate change is not invertible");
        std::swap(A[p], A[c]);
        std::swap(I[p], I[c]);
        Rational inv = 1 / A[c][c];
        for (int j = 0; j < n; ++j) {
            A[c][j] *= inv;
            I[c][j] *= inv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || A[r][c] == 0) continue;
            Rational f = A[r][c];
            for (int j = 0; j < n; ++j) {
                A[r][j] -= f * A[c][j];
                I[r][j] -= f * I[c][j];
            }
        }
    }
    return I;
}

}  // namespace

std::vector<Jet> invert_coordinates(const std::vector<Jet>& phi) {
    if (phi.empty()) return {};
    RingPtr ring = phi.front().ring();
    int n = ring->nvars();
    if (static_cast<int>(phi.size()) != n) throw DomainError("coordinate change needs one jet per variable");
    std::vector<std::vector<Rational>> L(n, std::vector<Rational>(n, 0));
    std::vector<Jet> Q;
    for (int i = 0; i < n; ++i) {
        if (phi[i].const_term() != 0) throw DomainError("coordinate change must fix the origin");
        Jet lin(ring);
        for (int j = 0; j < n; ++j) {
            Mono m;
            m.e[j] = 1;
            L[i][j] = phi[i].coeff(m);
            lin += Jet::monomial(ring, m, L[i][j]);
        }
        Q.push_back(phi[i] - lin);
    }
    auto Li = invert_matrix(L);
    auto apply_linv = [&](const std::vector<Jet>& v) {
        std::vector<Jet> out(n, Jet::zero(ring));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (Li[i][j] != 0) out[i] += v[j].scaled(Li[i][j]);
        return out;
    };
    std::vector<Jet> X;
    for (int i = 0; i < n; ++i) X.push_back(Jet::var(ring, i));
    std::vector<Jet> psi = apply_linv(X);
    bool nonlinear = std::any_of(Q.begin(), Q.end(), [](const Jet& q) { return !q.is_zero(); });
    if (!nonlinear) return psi;
    // psi is right through degree k; Q has no linear part, so one pass gains a degree
    for (int k = 1; k <= ring->N; ++k) {
        // work in a copy of the ring truncated at k + 1
        RingPtr rk = make_ring(ring->names, k + 1);
        std::vector<Jet> low;
        for (const auto& p : psi) low.push_back(p.truncated(k).rebased(rk));
        std::vector<Jet> rhs(n, Jet::zero(ring));
        for (int i = 0; i < n; ++i)
            rhs[i] = X[i] - substitute(Q[i].truncated(k + 1).rebased(rk), low, rk).rebased(ring).truncated(k + 1);
        psi = apply_linv(rhs);
        for (auto& p : psi) p = p.truncated(k + 1);
    }
    // a polynomial inverse is confirmed exactly
    bool short_poly = std::all_of(Q.begin(), Q.end(), [](const Jet& q) { return q.exact(); });
    for (const auto& p : psi) short_poly = short_poly && p.max_deg() < ring->N;
    if (short_poly) {
        std::vector<Jet> cand;
        for (const auto& p : psi) cand.push_back(Jet::from_terms(ring, p.terms()));
        std::vector<Jet> rhs(n, Jet::zero(ring));
        for (int i = 0; i < n; ++i) rhs[i] = X[i] - substitute(Q[i], cand, ring);
        if (apply_linv(rhs) == cand) return cand;
    }
    for (auto& p : psi) p = p.truncated(ring->N);
    return psi;
}

std::vector<Jet> chart_inverse(const Center& C) {
    if (C.identity_chart()) {
        std::vector<Jet> id;
        for (int i = 0; i < C.ring->nvars(); ++i) id.push_back(Jet::var(C.ring, i));
        return id;
    }
    auto memo = C.inverse_memo;
    if (memo && memo->first == C.chart) return memo->second;
    auto fresh = std::make_shared<const std::pair<std::vector<Jet>, std::vector<Jet>>>(C.chart, invert_coordinates(C.chart));
    C.inverse_memo = fresh;
    return fresh->second;
}

Jet to_chart(const Jet& f, const std::vector<Jet>& inverse) {
    if (inverse.empty()) return f;
    return substitute(f, inverse, inverse.front().ring());
}

bool center_graded_piece(const Center& C, const Jet& f, const Rational& b) {
    int n = C.ring->nvars();
    std::vector<Rational> inv_w(n, 0);
    for (int i = 0; i < n; ++i) {
        Rational w = C.weight_of(i);
        if (w != 0) inv_w[i] = 1 / w;
    }
    for (const auto& t : f.terms()) {
        Rational s = 0;
        for (int i = 0; i < n; ++i)
            if (t.m.e[i]) s += inv_w[i] * t.m.e[i];
        if (s < b) return false;
    }
    return true;
}

AdmissibilityVerdict is_admissible(const ReesAlgebra& R, const Center& C) {
    AdmissibilityVerdict v;
    v.admissible = true;
    v.precision = C.ring->N;
    if (R.gens.empty()) return v;
    std::vector<Jet> inv = chart_inverse(C);
    for (const auto& x : inv) v.precision = std::min(v.precision, x.prec());
    for (const auto& g : R.gens) {
        Jet f = same_ring(g.f.ring(), C.ring) ? g.f.rebased(C.ring) : embed(g.f, C.ring);
        Jet h = to_chart(f, inv);
        v.precision = std::min(v.precision, h.prec());
        if (!center_graded_piece(C, h, g.deg)) v.admissible = false;
    }
    return v;
}

}  // namespace folres
