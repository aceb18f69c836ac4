#include "folres/monres.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace folres {

int MonomialPresentation::m() const {
    if (!w_names.empty()) return static_cast<int>(w_names.size());
    return rows.empty() ? 0 : static_cast<int>(rows.front().size());
}

RingPtr MonomialPresentation::ring(int N) const {
    std::vector<std::string> names;
    for (int i = 0; i < p; ++i) names.push_back(i < static_cast<int>(free_names.size()) ? free_names[i] : "v" + std::to_string(i + 1));
    for (int k = 0; k < m(); ++k) names.push_back(k < static_cast<int>(w_names.size()) ? w_names[k] : "w" + std::to_string(k + 1));
    return make_ring(names, N);
}

int MonomialPresentation::matrix_rank() const { return folres::matrix_rank(rows); }

namespace {

std::string strip(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    return s;
}

std::vector<std::vector<Rational>> parse_rows(const std::string& text, int lineno) {
    std::string s = strip(text);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw ParseError(lineno, "rows must be [[...],...]");
    std::vector<std::vector<Rational>> rows;
    std::size_t i = 1;
    while (i + 1 < s.size()) {
        if (s[i] == ',') {
            ++i;
            continue;
        }
        if (s[i] != '[') throw ParseError(lineno, "expected '[' in rows");
        auto j = s.find(']', i);
        if (j == std::string::npos) throw ParseError(lineno, "unterminated row");
        std::vector<Rational> row;
        std::stringstream is(s.substr(i + 1, j - i - 1));
        std::string item;
        while (std::getline(is, item, ',')) {
            try {
                row.push_back(parse_rational(item));
            } catch (const DomainError& e) {
                throw ParseError(lineno, e.what());
            }
        }
        rows.push_back(row);
        i = j + 1;
    }
    for (const auto& r : rows)
        if (r.size() != rows.front().size()) throw ParseError(lineno, "ragged rows");
    return rows;
}

}  // namespace

MonomialPresentation parse_monomial(const std::string& line, int lineno) {
    MonomialPresentation M;
    std::string s = line;
    if (s.rfind("monomial", 0) == 0) s = s.substr(8);
    auto pp = s.find("p=");
    if (pp == std::string::npos) throw ParseError(lineno, "monomial block needs p=<int>");
    try {
        M.p = std::stoi(s.substr(pp + 2));
    } catch (const std::exception&) {
        throw ParseError(lineno, "bad p value");
    }
    if (M.p < 0) throw ParseError(lineno, "p must be nonnegative");
    auto rp = s.find("rows=");
    if (rp == std::string::npos) throw ParseError(lineno, "monomial block needs rows=[[...]]");
    int depth = 0;
    std::size_t end = rp + 5;
    for (; end < s.size(); ++end) {
        if (s[end] == '[') ++depth;
        if (s[end] == ']' && --depth == 0) break;
    }
    if (depth != 0 || end >= s.size()) throw ParseError(lineno, "unbalanced brackets in rows");
    M.rows = parse_rows(s.substr(rp + 5, end - rp - 4), lineno);
    auto vp = s.find("vars", end);
    if (vp != std::string::npos) {
        std::istringstream is(s.substr(vp + 4));
        std::vector<std::string> names;
        std::string t;
        while (is >> t)
            if (t.find("..") == std::string::npos) names.push_back(t);
        int m = M.rows.empty() ? 0 : static_cast<int>(M.rows.front().size());
        if (!names.empty()) {
            if (static_cast<int>(names.size()) != M.p + m) throw ParseError(lineno, "vars count must be p + columns");
            M.free_names.assign(names.begin(), names.begin() + M.p);
            M.w_names.assign(names.begin() + M.p, names.end());
        }
    }
    return M;
}

std::string to_string(const MonomialPresentation& M) {
    std::ostringstream os;
    os << "p=" << M.p << " rows=[";
    for (std::size_t j = 0; j < M.rows.size(); ++j) {
        os << (j ? "," : "") << "[";
        for (std::size_t k = 0; k < M.rows[j].size(); ++k) os << (k ? "," : "") << to_string(M.rows[j][k]);
        os << "]";
    }
    os << "]";
    return os.str();
}

Foliation monomial_to_foliation(const MonomialPresentation& M, const RingPtr& ring) {
    if (ring->nvars() != M.p + M.m()) throw DomainError("ring does not match the monomial presentation");
    Foliation F;
    for (int i = 0; i < M.p; ++i) F.gens.push_back(Derivation::basis(ring, i));
    for (const auto& row : M.rows) {
        Derivation d(ring);
        for (int k = 0; k < M.m(); ++k)
            if (row[k] != 0) d.coef[M.p + k] = Jet::var(ring, M.p + k).scaled(row[k]);
        if (!d.is_zero()) F.gens.push_back(d);
    }
    return F;
}

IdealGens smrank_center(const MonomialPresentation& M, const RingPtr& ring) {
    IdealGens out;
    for (int k = 0; k < M.m(); ++k) {
        bool nz = std::any_of(M.rows.begin(), M.rows.end(), [&](const std::vector<Rational>& r) { return r[k] != 0; });
        if (nz) out.push_back(Jet::var(ring, M.p + k));
    }
    return out;
}

namespace {

struct Pivoted {
    MonomialPresentation next;
    int pivots = 0;
};

/// Normal form at a point where the w_k (k in P) are units: each pivot turns
/// one coordinate into a free direction.
Pivoted pivot(const MonomialPresentation& M, const std::vector<int>& P, const std::vector<std::string>& names_after,
              const std::string& s_name) {
    auto rows = M.rows;
    std::vector<std::string> free = names_after;  // first p are the old free names
    free.resize(M.p);
    std::vector<bool> pivoted(M.m(), false);
    int piv = 0;
    for (int k : P) {
        int r = -1;
        for (int j = 0; j < static_cast<int>(rows.size()) && r < 0; ++j)
            if (rows[j][k] != 0) r = j;
        if (r < 0) continue;
        Rational c = rows[r][k];
        for (auto& x : rows[r]) x /= c;
        for (int j = 0; j < static_cast<int>(rows.size()); ++j) {
            if (j == r || rows[j][k] == 0) continue;
            Rational f = rows[j][k];
            for (int l = 0; l < M.m(); ++l) rows[j][l] -= f * rows[r][l];
        }
        rows.erase(rows.begin() + r);
        pivoted[k] = true;
        free.push_back(names_after[M.p + k]);
        ++piv;
    }
    Pivoted out;
    out.pivots = piv;
    out.next.p = M.p + piv;
    out.next.free_names = free;
    std::vector<int> keep;
    for (int k = 0; k < M.m(); ++k)
        if (!pivoted[k]) keep.push_back(k);
    for (int k : keep) out.next.w_names.push_back(names_after[M.p + k]);
    out.next.w_names.push_back(s_name);
    for (const auto& r : rows) {
        std::vector<Rational> nr;
        for (int k : keep) nr.push_back(r[k]);
        nr.push_back(0);
        if (std::any_of(nr.begin(), nr.end(), [](const Rational& x) { return x != 0; })) out.next.rows.push_back(nr);
    }
    return out;
}

bool rows_zero(const MonomialPresentation& M) {
    for (const auto& r : M.rows)
        for (const auto& x : r)
            if (x != 0) return false;
    return true;
}

}  // namespace

MonresReport monomial_resolve(const MonomialPresentation& M0, int max_rounds) {
    MonresReport rep;
    std::vector<std::pair<MonomialPresentation, int>> queue{{M0, 1}};
    std::set<std::string> seen;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        MonomialPresentation M = queue[qi].first;
        int round = queue[qi].second;
        if (rows_zero(M)) continue;
        if (round > max_rounds) throw BudgetError("monomial resolution exceeded the round budget");
        RingPtr ring = M.ring(16);
        std::string key = std::to_string(round) + "|" + to_string(M);
        for (const auto& n : ring->names) key += " " + n;
        if (!seen.insert(key).second) continue;
        rep.rounds = std::max(rep.rounds, round);

        Foliation F = monomial_to_foliation(M, ring);
        IdealGens J = smrank_center(M, ring);
        Center C(ring);
        std::vector<int> cols;
        for (int k = 0; k < M.m(); ++k) {
            bool nz = std::any_of(M.rows.begin(), M.rows.end(), [&](const std::vector<Rational>& r) { return r[k] != 0; });
            if (nz) {
                cols.push_back(k);
                C.invariant.push_back({ring->names[M.p + k], 1});
            }
        }
        Cobordism B = build_cobordant(C);
        Foliation G = transform_foliation(B, F, TransformMode::Controlled);
        Foliation Gs = transform_foliation(B, F, TransformMode::Strict);

        MonresStep step;
        step.round = round;
        step.presentation = M;
        for (const auto& e : C.invariant) step.center.push_back(e.var);

        // expected: same matrix on the primed coordinates
        Foliation expect;
        for (int i = 0; i < M.p; ++i) expect.gens.push_back(Derivation::basis(B.target, i));
        for (const auto& row : M.rows) {
            Derivation d(B.target);
            for (int k = 0; k < M.m(); ++k)
                if (row[k] != 0) d.coef[M.p + k] = Jet::var(B.target, M.p + k).scaled(row[k]);
            if (!d.is_zero()) expect.gens.push_back(d);
        }
        step.matrix_preserved = G.gens.size() == expect.gens.size() &&
                                std::equal(G.gens.begin(), G.gens.end(), expect.gens.begin());
        step.strict_equals_controlled =
            Gs.gens.size() == G.gens.size() && std::equal(G.gens.begin(), G.gens.end(), Gs.gens.begin());
        if (!step.matrix_preserved) rep.ok = false;

        int n = ring->nvars();
        std::vector<Rational> origin(n, 0);
        int before = sm_rank_at(F, origin);
        int full = M.p + M.matrix_rank();
        std::vector<std::string> after_names = B.target->names;
        int ncols = static_cast<int>(cols.size());
        for (int mask = 1; mask < (1 << ncols); ++mask) {
            std::vector<int> P;
            std::vector<Rational> pt(B.target->nvars(), 0);
            std::string label;
            for (int b = 0; b < ncols; ++b)
                if (mask & (1 << b)) {
                    P.push_back(cols[b]);
                    pt[M.p + cols[b]] = 1;
                    label += (label.empty() ? "" : ",") + B.target->names[M.p + cols[b]] + "=1";
                }
            MonresSample smp;
            smp.point = pt;
            smp.label = label;
            smp.smrank_before = before;
            smp.smrank_after = sm_rank_at(G, pt);
            if (smp.smrank_after <= before) rep.ok = false;
            std::string sname = "s" + std::to_string(round);
            std::vector<std::string> names = after_names;
            Pivoted nx = pivot(M, P, names, sname);
            if (nx.pivots + M.p != smp.smrank_after) rep.ok = false;
            smp.terminal = rows_zero(nx.next);
            if (smp.terminal) {
                if (smp.smrank_after != full) rep.ok = false;
                std::vector<Jet> shift;
                for (int i = 0; i < B.target->nvars(); ++i) {
                    Jet v = Jet::var(B.target, i);
                    if (pt[i] != 0) v += Jet::constant(B.target, pt[i]);
                    shift.push_back(v);
                }
                Foliation T;
                for (const auto& g : G.gens) {
                    Derivation d(B.target);
                    for (int i = 0; i < g.nvars(); ++i) d.coef[i] = substitute(g.coef[i], shift, B.target);
                    T.gens.push_back(d);
                }
                std::vector<bool> div(B.target->nvars(), false);
                div[B.s_index] = true;
                smp.log_smooth = log_smooth_at(T, Context(B.target, div));
                if (!smp.log_smooth) rep.ok = false;
            } else {
                queue.push_back({nx.next, round + 1});
            }
            step.samples.push_back(smp);
        }
        rep.steps.push_back(std::move(step));
    }
    return rep;
}

std::string MonresReport::str() const {
    std::ostringstream os;
    for (const auto& st : steps) {
        os << "round " << st.round << ": " << to_string(st.presentation) << " center (";
        for (std::size_t i = 0; i < st.center.size(); ++i) os << (i ? ", " : "") << st.center[i];
        os << ")" << (st.matrix_preserved ? " matrix preserved" : " MATRIX CHANGED")
           << (st.strict_equals_controlled ? ", strict = controlled" : ", strict != controlled") << "\n";
        for (const auto& s : st.samples) {
            os << "  sample " << s.label << ": sm-rank " << s.smrank_before << " -> " << s.smrank_after;
            if (s.terminal) os << (s.log_smooth ? " (log-smooth)" : " (NOT log-smooth)");
            os << "\n";
        }
    }
    os << "rounds " << rounds << (ok ? " ok" : " FAILED") << "\n";
    return os.str();
}

}  // namespace folres
