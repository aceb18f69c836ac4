#include "folres/rectify.hpp"

#include <algorithm>

#include "folres/linalg.hpp"
#include "folres/rees.hpp"

namespace folres {

std::vector<Jet> RectifiedChart::inverse() const { return invert_coordinates(images); }

RectifiedChart rectify_coordinate(const Derivation& d, int x1, int budget) {
    const RingPtr& ring = d.ring;
    if (x1 < 0 || x1 >= ring->nvars()) throw DomainError("bad transverse variable");
    if (!d.coef[x1].is_unit()) throw DomainError("d(" + ring->names[x1] + ") is not a unit");
    if (budget < 0 || budget > ring->N) throw DomainError("rectification budget exceeds truncation order");
    RectifiedChart ch;
    ch.x1 = x1;
    ch.budget = budget;
    ch.rescaled = d.times(inverse(d.coef[x1]));
    Jet mx = -Jet::var(ring, x1);
    for (int i = 0; i < ring->nvars(); ++i) {
        if (i == x1) {
            ch.images.push_back(Jet::var(ring, i));
            continue;
        }
        Jet term = Jet::var(ring, i);  // d^j(y)
        Jet xp = Jet::constant(ring, 1);  // (-x1)^j / j!
        Jet sum = term;
        for (int j = 1; j <= budget; ++j) {
            term = apply_derivation(ch.rescaled, term);
            xp = (xp * mx).scaled(Rational(1, j));
            if (term.is_zero()) break;
            if (term.prec() < 0) throw BudgetError("precision exhausted during rectification");
            sum += xp * term;
        }
        ch.images.push_back(sum);
    }
    return ch;
}

int rectification_certificate(const RectifiedChart& chart) {
    int best = kExact;
    for (int i = 0; i < static_cast<int>(chart.images.size()); ++i) {
        if (i == chart.x1) continue;
        Jet g = apply_derivation(chart.rescaled, chart.images[i]);
        for (const auto& t : g.terms()) best = std::min(best, static_cast<int>(t.m.e[chart.x1]));
    }
    return best;
}

Jet lift(const RectifiedChart& chart, const Jet& f) {
    const RingPtr& ring = chart.ring();
    std::vector<Jet> imgs;
    for (const auto& name : f.ring()->names) {
        int i = ring->index_of(name);
        if (i < 0 || i == chart.x1) throw DomainError("'" + name + "' is not a hyperplane variable");
        imgs.push_back(chart.images[i]);
    }
    return substitute(f, imgs, ring);
}

Derivation change_coordinates(const Derivation& d, const std::vector<Jet>& phi, const std::vector<Jet>& inverse) {
    const RingPtr& ring = d.ring;
    Derivation out(ring);
    for (int k = 0; k < ring->nvars(); ++k) out.coef[k] = substitute(apply_derivation(d, phi[k]), inverse, ring);
    return out;
}

namespace {

Jet drop_var_terms(const Jet& f, int i) {
    std::vector<Term> keep;
    for (const auto& t : f.terms())
        if (!t.m.e[i]) keep.push_back(t);
    return Jet::from_terms(f.ring(), std::move(keep), f.prec());
}

std::vector<Jet> as_vector(const Derivation& d) { return d.coef; }

}  // namespace

SplitFoliation split_foliation(const Foliation& F, int x1, const Derivation& d) {
    const RingPtr& ring = d.ring;
    SplitFoliation out;
    out.chart = rectify_coordinate(d, x1, ring->N);
    const auto& phi = out.chart.images;
    std::vector<Jet> inv = out.chart.inverse();
    const Derivation& dn = out.chart.rescaled;

    Derivation dx = Derivation::basis(ring, x1);
    out.gens.gens.push_back(dx);
    std::vector<Derivation> moved;  // rectified input generators
    int P = ring->N;
    Echelon ech;
    ech.insert(to_svec(as_vector(dx), P));
    for (const auto& g : F.gens) {
        moved.push_back(change_coordinates(g, phi, inv));
        Derivation t = g - dn.times(g.coef[x1]);
        Derivation tn = change_coordinates(t, phi, inv);
        // constant in x1: coefficients restricted to x1 = 0
        Derivation nabla(ring);
        for (int k = 0; k < ring->nvars(); ++k)
            nabla.coef[k] = k == x1 ? Jet::zero(ring) : drop_var_terms(tn.coef[k], x1);
        P = std::min(P, nabla.prec());
        if (nabla.is_zero()) continue;
        if (ech.insert(to_svec(as_vector(nabla), std::max(P, 0)))) out.gens.gens.push_back(nabla);
    }
    for (const auto& g : moved) P = std::min(P, g.prec());
    int D = std::min(ring->N - 1, P);
    if (D < 0) throw BudgetError("precision exhausted while splitting");

    std::vector<std::vector<Jet>> split_rows, input_rows;
    for (const auto& g : out.gens.gens) split_rows.push_back(as_vector(g));
    for (const auto& g : moved) input_rows.push_back(as_vector(g));
    bool ok = true;
    for (const auto& g : moved) ok = ok && module_contains(split_rows, as_vector(g), D);
    for (const auto& g : out.gens.gens) ok = ok && module_contains(input_rows, as_vector(g), D);
    if (!ok) throw DomainError("foliation is not involutive along " + ring->names[x1] + " (split certificate failed)");
    out.certified = true;
    out.certified_degree = D;
    return out;
}

SplitFoliation split_foliation(const Foliation& F, int x1) {
    for (const auto& g : F.gens)
        if (g.coef[x1].is_unit()) return split_foliation(F, x1, g);
    throw DomainError("no generator is transverse to " + (F.empty() ? std::string("x1") : F.gens[0].ring->names[x1]));
}

bool is_independent(const Derivation& nabla, int x1, const Derivation& dx1) {
    if (!nabla.coef[x1].is_zero()) return false;
    return lie_bracket(nabla, dx1).is_zero();
}

}  // namespace folres
