#include "folres/linalg.hpp"

#include <algorithm>

namespace folres {

SVec to_svec(const Jet& f, int maxdeg, int comp) {
    SVec v;
    for (const auto& t : f.terms()) {
        if (t.m.deg() > maxdeg) break;
        v.push_back({VKey{t.m, comp}, t.c});
    }
    return v;
}

SVec to_svec(const std::vector<Jet>& vec, int maxdeg) {
    std::map<VKey, Rational, VKeyLess> acc;
    for (int i = 0; i < static_cast<int>(vec.size()); ++i)
        for (const auto& t : vec[i].terms()) {
            if (t.m.deg() > maxdeg) break;
            acc.emplace(VKey{t.m, i}, t.c);
        }
    return SVec(acc.begin(), acc.end());
}

SVec Echelon::reduce(const SVec& v, Combo* combo) const {
    std::map<VKey, Rational, VKeyLess> w(v.begin(), v.end());
    std::map<int, Rational> used;
    auto it = w.begin();
    while (it != w.end()) {
        auto r = rows_.find(it->first);
        if (r == rows_.end() || it->second == 0) {
            if (it->second == 0) {
                it = w.erase(it);
            } else {
                ++it;
            }
            continue;
        }
        Rational c = it->second;
        VKey key = it->first;
        for (const auto& [k, x] : r->second.v) {
            auto [jt, fresh] = w.try_emplace(k, -c * x);
            if (!fresh) jt->second -= c * x;
        }
        if (track_ && combo)
            for (const auto& [tag, x] : r->second.combo) used[tag] += c * x;
        w.erase(key);
        it = w.upper_bound(key);
    }
    SVec out;
    for (auto& [k, x] : w)
        if (x != 0) out.push_back({k, x});
    if (combo) {
        combo->clear();
        for (auto& [tag, x] : used)
            if (x != 0) combo->push_back({tag, x});
    }
    return out;
}

bool Echelon::insert(const SVec& v, int tag) {
    Combo c;
    SVec r = reduce(v, track_ ? &c : nullptr);
    if (r.empty()) return false;
    Rational lead = r.front().second;
    Row row;
    for (auto& [k, x] : r) row.v.push_back({k, x / lead});
    if (track_) {
        // r = v - sum(c); normalized row = r / lead
        row.combo[tag] += 1 / lead;
        for (auto& [t, x] : c) row.combo[t] -= x / lead;
    }
    VKey pivot = row.v.front().first;
    rows_.emplace(pivot, std::move(row));
    return true;
}

std::vector<Mono> monomials_upto(int n, int d) {
    std::vector<Mono> out;
    if (d < 0) return out;
    out.push_back(Mono{});
    std::vector<Mono> layer{Mono{}};
    for (int k = 1; k <= d; ++k) {
        std::vector<Mono> next;
        for (const auto& m : layer) {
            int last = 0;
            for (int i = 0; i < n; ++i)
                if (m.e[i]) last = i;
            for (int i = last; i < n; ++i) {
                Mono x = m;
                x.e[i] += 1;
                next.push_back(x);
            }
        }
        std::sort(next.begin(), next.end(), grlex_less);
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

IdealMembership::IdealMembership(const std::vector<Jet>& gens, int D) : D_(D) {
    for (const auto& g : gens)
        if (g.is_unit()) unit_ = true;
    if (unit_) return;
    for (const auto& g : gens) add(g);
}

namespace {

/// x_i * v, dropping the part above degree D.
SVec shift(const SVec& v, int i, int D) {
    SVec out;
    out.reserve(v.size());
    for (const auto& [k, c] : v) {
        if (k.m.deg() + 1 > D) break;
        VKey nk = k;
        nk.m.e[i] += 1;
        out.push_back({nk, c});
    }
    return out;
}

/// Inserts v and closes the span under multiplication by the variables.
void insert_closed(Echelon& ech, const SVec& v, int n, int D) {
    std::vector<SVec> queue;
    if (ech.insert(v)) queue.push_back(v);
    while (!queue.empty()) {
        SVec w = std::move(queue.back());
        queue.pop_back();
        for (int i = 0; i < n; ++i) {
            SVec x = shift(w, i, D);
            if (!x.empty() && ech.insert(x)) queue.push_back(std::move(x));
        }
    }
}

}  // namespace

void IdealMembership::add(const Jet& g) {
    if (unit_ || g.is_zero()) return;
    if (g.is_unit()) {
        unit_ = true;
        return;
    }
    if (g.ord() > D_) return;
    // the span of all monomial multiples is the closure under the variables
    insert_closed(ech_, to_svec(g, D_), g.ring()->nvars(), D_);
}

bool IdealMembership::contains(const Jet& f) const {
    if (unit_) return true;
    return ech_.contains(to_svec(f, D_));
}

bool ideal_contains(const std::vector<Jet>& gens, const Jet& f, int D) {
    return IdealMembership(gens, D).contains(f);
}

bool module_contains(const std::vector<std::vector<Jet>>& gens, const std::vector<Jet>& v, int D,
                     std::vector<Jet>* coeffs) {
    if (v.empty()) return true;
    const RingPtr& ring = v.front().ring();
    int n = ring->nvars();
    Echelon ech(coeffs != nullptr);
    std::vector<std::pair<int, Mono>> tags;
    // each queued row is m * gens[j]; closing under the variables spans all multiples
    for (int j = 0; j < static_cast<int>(gens.size()); ++j) {
        int o = kExact;
        for (const auto& c : gens[j]) o = std::min(o, c.ord());
        if (o > D) continue;
        std::vector<std::pair<SVec, Mono>> queue;
        auto push = [&](SVec row, const Mono& m) {
            int tag = static_cast<int>(tags.size());
            tags.push_back({j, m});
            if (ech.insert(row, tag)) queue.push_back({std::move(row), m});
        };
        push(to_svec(gens[j], D), Mono{});
        while (!queue.empty()) {
            auto [w, m] = std::move(queue.back());
            queue.pop_back();
            for (int i = 0; i < n; ++i) {
                SVec x = shift(w, i, D);
                if (x.empty()) continue;
                Mono mx = m;
                mx.e[i] += 1;
                push(std::move(x), mx);
            }
        }
    }
    Combo combo;
    SVec r = ech.reduce(to_svec(v, D), coeffs ? &combo : nullptr);
    if (!r.empty()) return false;
    if (coeffs) {
        coeffs->assign(gens.size(), Jet::zero(ring));
        for (auto& [tag, x] : combo) {
            auto [j, m] = tags[tag];
            (*coeffs)[j] += Jet::monomial(ring, m, x);
        }
    }
    return true;
}

}  // namespace folres
