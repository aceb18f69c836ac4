#include "folres/driver.hpp"

#include <algorithm>
#include <deque>
#include <json.hpp>
#include <sstream>

namespace folres {

namespace {

struct Branch {
    Context ctx;
    ReesAlgebra R;
    Foliation F;
    std::string label;
    int depth = 0;
};

/// Moves a chart's objects onto a ring with readable names: s~ becomes
/// e<k>, barred variables lose their tilde.
struct Renamer {
    RingPtr to;
    std::vector<Jet> images;

    Renamer(const RingPtr& from, int k) {
        std::vector<std::string> names;
        for (const auto& n : from->names) {
            std::string m = n;
            if (n == "s~") {
                m = "e" + std::to_string(k);
            } else if (!n.empty() && n.back() == '~') {
                m = n.substr(0, n.size() - 1);
            }
            while (std::count(names.begin(), names.end(), m)) m += "_";
            names.push_back(m);
        }
        to = make_ring(names, from->N);
        for (int i = 0; i < to->nvars(); ++i) images.push_back(Jet::var(to, i));
    }
    Jet operator()(const Jet& f) const { return substitute(f, images, to); }
    ReesAlgebra operator()(const ReesAlgebra& R) const {
        ReesAlgebra out(to);
        for (const auto& g : R.gens) out.gens.push_back({(*this)(g.f), g.deg});
        return out;
    }
    Foliation operator()(const Foliation& F) const {
        Foliation out;
        for (const auto& d : F.gens) {
            Derivation t(to);
            for (int i = 0; i < to->nvars(); ++i) t.coef[i] = (*this)(d.coef[i]);
            out.gens.push_back(t);
        }
        return out;
    }
    Context operator()(const Context& c) const { return Context(to, c.divisor); }
};

std::string mode_label(TransformMode m) { return m == TransformMode::Controlled ? "controlled" : "strict"; }

bool done(const Branch& b, const RunConfig& cfg, std::string& why) {
    if (b.R.gens.empty()) {
        why = "zero ideal";
        return true;
    }
    if (b.R.trivial()) {
        why = "trivial";
        return true;
    }
    if (cfg.mode == TransformMode::Controlled && is_principal_monomial(b.ctx, b.R)) {
        why = "principal monomial";
        return true;
    }
    return false;
}

std::string point_label(const std::vector<Rational>& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + to_string(p[i]);
    return s + ")";
}

bool int_root(const mpz_class& a, unsigned long k, mpz_class& r) {
    if (a < 0) {
        if (k % 2 == 0) return false;
        mpz_class m = -a;
        if (!int_root(m, k, r)) return false;
        r = -r;
        return true;
    }
    return mpz_root(r.get_mpz_t(), a.get_mpz_t(), k) != 0;
}

std::vector<Rational> chart_coords_of(const Center& C, const std::vector<Rational>& p) {
    std::vector<Rational> c;
    for (const auto& phi : C.chart) {
        if (!phi.exact()) throw BudgetError("cannot evaluate a truncated chart at a point");
        c.push_back(evaluate(phi, p));
    }
    return c;
}

}  // namespace

bool is_principal_monomial(const Context& ctx, const ReesAlgebra& R) {
    IdealGens I;
    for (const auto& f : ideal_from_rees(R))
        if (!f.is_zero()) I.push_back(f);
    if (I.empty()) return false;
    for (const auto& g : I) {
        const Mono& m = g.terms().front().m;
        bool ok = true;
        for (int i = 0; i < ctx.nvars() && ok; ++i)
            if (m.e[i] && !ctx.is_divisor(i)) ok = false;
        if (!ok || m.deg() > g.prec()) continue;
        auto divisible = [&](const Jet& f) {
            for (const auto& t : f.terms())
                if (!m.divides(t.m)) return false;
            return f.prec() >= m.deg();
        };
        bool all = true;
        for (const auto& f : I) all = all && divisible(f);
        if (all) return true;
    }
    return false;
}

TrackResult track_point(const Cobordism& B, const EtaleChart& ch, const std::vector<Rational>& point) {
    TrackResult out;
    const RingPtr& src = B.source();
    std::string name = src->names[ch.index];
    std::vector<Rational> c = chart_coords_of(B.center, point);
    bool on_center = true;
    for (int k = 0; k < src->nvars(); ++k)
        if (B.in_center(k) && c[k] != 0) on_center = false;
    ChartPoint cp{name, c};
    if (on_center) {
        cp.coords[ch.index] = 0;
        out.points.push_back(cp);
        return out;
    }
    if (c[ch.index] == 0) return out;  // outside this chart
    unsigned long w = static_cast<unsigned long>(B.wi[ch.index]);
    mpz_class rn, rd;
    if (!int_root(c[ch.index].get_num(), w, rn) || !int_root(c[ch.index].get_den(), w, rd)) {
        out.skipped.push_back(name + "-chart: " + to_string(c[ch.index]) + " has no rational root of order " +
                              std::to_string(w));
        return out;
    }
    Rational s(rn, rd);
    s.canonicalize();
    cp.coords[ch.index] = s;
    for (int k = 0; k < src->nvars(); ++k) {
        if (k == ch.index || !B.in_center(k)) continue;
        Rational sp = 1;
        for (long j = 0; j < B.wi[k]; ++j) sp *= s;
        cp.coords[k] = c[k] / sp;
    }
    out.points.push_back(cp);
    return out;
}

TrackResult track_point(const Cobordism& B, const std::vector<Rational>& point) {
    TrackResult out;
    for (const auto& e : B.center.entries()) {
        auto r = track_point(B, etale_chart(B, e.var), point);
        out.points.insert(out.points.end(), r.points.begin(), r.points.end());
        out.skipped.insert(out.skipped.end(), r.skipped.begin(), r.skipped.end());
    }
    return out;
}

RunResult principalize(const Instance& inst, const RunConfig& cfg) {
    if (cfg.max_steps < 1) throw DomainError("max steps must be at least 1");
    for (const auto& d : inst.F.gens)
        if (!d.is_logarithmic(inst.ctx)) throw DomainError("foliation generator is not logarithmic: " + to_string(d));
    auto inv_rep = check_involutive(inst.F);
    if (inv_rep.decided && !inv_rep.involutive) throw DomainError("foliation is not involutive");

    RunResult res;
    std::deque<Branch> queue;
    queue.push_back({inst.ctx, inst.R, inst.F, "origin", 0});
    for (const auto& p : inst.points) {
        PointedInstance t = translate(inst.at_origin(), p);
        queue.push_back({t.ctx, t.R, t.F, point_label(p), 0});
    }
    int stepno = 0;
    while (!queue.empty()) {
        Branch b = std::move(queue.front());
        queue.pop_front();
        std::string why;
        if (done(b, cfg, why)) {
            res.finished.push_back(b.label + ": " + why);
            continue;
        }
        InvResult ir = inv_at(b.ctx, b.R, b.F);
        if (cfg.stop_pattern && ir.inv == *cfg.stop_pattern) {
            res.finished.push_back(b.label + ": stop pattern " + ir.inv.str());
            continue;
        }
        if (b.depth >= cfg.max_steps) {
            if (!cfg.budget_throws) {
                res.finished.push_back(b.label + ": step budget, invariant " + ir.inv.str());
                continue;
            }
            throw BudgetError("step budget exhausted at " + b.label + " with invariant " + ir.inv.str());
        }

        TraceStep st;
        st.step = ++stepno;
        st.point = b.label;
        st.before = ir.inv;
        st.center = ir.center;
        Cobordism B = build_cobordant(ir.center, rees_multiplier(ir.center, b.R) * cfg.multiplier);
        st.cobordism = cobordism_report(B);
        for (const auto& e : ir.center.entries()) {
            EtaleChart ch = etale_chart(B, e.var);
            Context cctx = chart_context(B, ch, b.ctx);
            ReesAlgebra cR = chart_transform_rees(B, ch, b.R, cfg.mode);
            Foliation cF = chart_transform_foliation(B, ch, b.F, cfg.mode);
            Renamer rn(ch.ring, b.depth + 1);
            Branch nb{rn(cctx), rn(cR), rn(cF), b.label + "/" + e.var, b.depth + 1};

            std::vector<std::pair<std::string, std::vector<Rational>>> pts;
            pts.push_back({"origin", std::vector<Rational>(ch.ring->nvars(), 0)});
            if (cfg.unit_samples)
                for (int k = 0; k < ch.ring->nvars(); ++k)
                    if (k != ch.index && B.in_center(k)) {
                        std::vector<Rational> p(ch.ring->nvars(), 0);
                        p[k] = 1;
                        pts.push_back({nb.ctx.ring->names[k] + "=1", p});
                    }
            for (const auto& [label, p] : pts) {
                ChartSample smp;
                smp.chart = e.var;
                smp.label = label;
                PointedInstance here{nb.ctx, nb.R, nb.F};
                bool origin = label == "origin";
                try {
                    if (!origin) here = translate(here, p);
                    smp.after = inv_at(here.ctx, here.R, here.F).inv;
                } catch (const BudgetError& ex) {
                    smp.note = std::string("skipped: ") + ex.what();
                    res.skipped.push_back(b.label + "/" + e.var + " " + label + ": " + ex.what());
                    st.samples.push_back(smp);
                    if (origin) throw;
                    continue;
                }
                smp.dropped = compare_inv(smp.after, st.before) < 0;
                if (!smp.dropped)
                    res.violations.push_back("step " + std::to_string(st.step) + " at " + b.label + ", " + e.var +
                                             "-chart " + label + ": " + smp.after.str() + " is not below " +
                                             st.before.str());
                smp.continued = origin;
                st.samples.push_back(smp);
            }
            queue.push_back(std::move(nb));
        }
        res.steps.push_back(std::move(st));
    }
    return res;
}

std::string RunResult::str() const {
    std::ostringstream os;
    for (const auto& st : steps) {
        os << "step " << st.step << " at " << st.point << ": inv " << st.before.str() << "\n";
        std::istringstream cs(to_string(st.center));
        for (std::string l; std::getline(cs, l);) os << "  center " << l << "\n";
        std::istringstream bs(st.cobordism);
        for (std::string l; std::getline(bs, l);) os << "  " << l << "\n";
        for (const auto& s : st.samples) {
            os << "  " << s.chart << "-chart " << s.label << ": ";
            if (!s.note.empty())
                os << s.note;
            else
                os << s.after.str() << (s.dropped ? " < " : " NOT < ") << st.before.str();
            os << "\n";
        }
    }
    for (const auto& f : finished) os << "done " << f << "\n";
    for (const auto& s : skipped) os << "skipped " << s << "\n";
    for (const auto& v : violations) os << "violation " << v << "\n";
    return os.str();
}

std::string RunResult::json() const {
    using ojson = nlohmann::ordered_json;
    ojson doc;
    doc["steps"] = ojson::array();
    for (const auto& st : steps) {
        ojson j;
        j["step"] = st.step;
        j["point"] = st.point;
        j["before"] = st.before.str();
        ojson c;
        auto tier = [](const std::vector<CenterEntry>& es) {
            ojson a = ojson::array();
            for (const auto& e : es) a.push_back({{"var", e.var}, {"weight", to_string(e.weight)}});
            return a;
        };
        c["transverse"] = tier(st.center.transverse);
        c["invariant"] = tier(st.center.invariant);
        c["divisorial"] = tier(st.center.divisorial);
        ojson chart = ojson::object();
        for (int i = 0; i < static_cast<int>(st.center.chart.size()); ++i)
            chart[st.center.ring->names[i]] = to_string(st.center.chart[i]);
        c["chart"] = chart;
        j["center"] = c;
        j["cobordism"] = st.cobordism;
        ojson samples = ojson::array();
        for (const auto& s : st.samples) {
            ojson o;
            o["chart"] = s.chart;
            o["sample"] = s.label;
            o["after"] = s.note.empty() ? ojson(s.after.str()) : ojson(nullptr);
            o["dropped"] = s.dropped;
            o["note"] = s.note;
            samples.push_back(o);
        }
        j["samples"] = samples;
        doc["steps"].push_back(j);
    }
    doc["finished"] = finished;
    doc["skipped"] = skipped;
    doc["violations"] = violations;
    doc["ok"] = ok();
    return doc.dump(2);
}

std::string blowup_report(const Instance& inst, const std::optional<std::string>& chart, TransformMode mode) {
    Center C;
    if (inst.center) {
        C = *inst.center;
    } else {
        C = inv_at(inst.ctx, inst.R, inst.F).center;
        if (C.empty()) throw DomainError("nothing to blow up: the invariant is empty");
    }
    Cobordism B = build_cobordant(C, inst.R.gens.empty() ? 1 : rees_multiplier(C, inst.R));
    std::ostringstream os;
    std::string m = mode_label(mode);
    if (!chart) {
        os << cobordism_report(B);
        for (const auto& g : inst.R.gens)
            os << m << " " << to_string(transform_element(B, g.f, mode, g.deg).cofactor) << "\n";
        Foliation G = transform_foliation(B, inst.F, mode);
        for (const auto& d : G.gens) os << m << " foliation " << to_string(d) << "\n";
        return os.str();
    }
    EtaleChart ch = etale_chart(B, *chart);
    os << chart_report(B, ch);
    for (const auto& g : inst.R.gens)
        os << m << " " << to_string(chart_transform_element(B, ch, g.f, mode, g.deg).cofactor) << "\n";
    Foliation G = chart_transform_foliation(B, ch, inst.F, mode);
    for (const auto& d : G.gens) os << m << " foliation " << to_string(d) << "\n";
    return os.str();
}

}  // namespace folres
