#include "folres/instance.hpp"

#include <fstream>
#include <sstream>

namespace folres {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream is(s);
    std::string item;
    while (std::getline(is, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

Rational rational_at(const std::string& s, int lineno) {
    try {
        return parse_rational(s);
    } catch (const DomainError& e) {
        throw ParseError(lineno, e.what());
    }
}

struct Line {
    int no;
    std::string key, rest;
};

}  // namespace

Instance parse_instance(const std::string& text, int truncation_override) {
    std::vector<Line> lines;
    std::istringstream is(text);
    std::string raw;
    for (int no = 1; std::getline(is, raw); ++no) {
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty()) continue;
        auto sp = raw.find_first_of(" \t");
        Line L{no, raw.substr(0, sp), sp == std::string::npos ? "" : trim(raw.substr(sp + 1))};
        lines.push_back(L);
    }

    Instance inst;
    std::vector<std::string> names;
    int ring_line = 0;
    for (const auto& L : lines) {
        if (L.key == "ring") {
            if (ring_line) throw ParseError(L.no, "duplicate ring line");
            names = words(L.rest);
            ring_line = L.no;
            if (names.empty()) throw ParseError(L.no, "ring needs at least one variable");
            if (static_cast<int>(names.size()) > kMaxVars)
                throw ParseError(L.no, "at most " + std::to_string(kMaxVars) + " variables");
        } else if (L.key == "truncation") {
            try {
                inst.truncation = std::stoi(L.rest);
            } catch (const std::exception&) {
                throw ParseError(L.no, "truncation must be an integer");
            }
            if (inst.truncation < 1 || inst.truncation > 250) throw ParseError(L.no, "truncation out of range 1..250");
        }
    }
    if (truncation_override > 0) inst.truncation = truncation_override;

    bool have_mono = false;
    for (const auto& L : lines)
        if (L.key == "monomial") {
            inst.monomial = parse_monomial(L.key + " " + L.rest, L.no);
            have_mono = true;
        }
    if (!ring_line) {
        if (!have_mono) throw ParseError(1, "missing ring line");
        names = inst.monomial->ring()->names;
    }

    RingPtr ring = make_ring(names, inst.truncation);
    std::vector<bool> div(names.size(), false);
    inst.R = ReesAlgebra(ring);
    bool have_fol = false, have_R = false;
    std::string fol_keyword;
    std::vector<std::pair<int, std::string>> center_lines;
    for (const auto& L : lines) {
        if (L.key == "ring" || L.key == "truncation" || L.key == "monomial") continue;
        if (L.key == "divisor") {
            for (const auto& v : words(L.rest)) {
                int i = ring->index_of(v);
                if (i < 0) throw ParseError(L.no, "unknown variable '" + v + "'");
                div[i] = true;
            }
        } else if (L.key == "ideal") {
            for (const auto& p : split(L.rest, ';')) inst.R.gens.push_back({parse_poly(p, ring, L.no), 1});
            have_R = true;
        } else if (L.key == "rees") {
            for (const auto& item : split(L.rest, ';')) {
                auto at = item.rfind('@');
                if (at == std::string::npos) throw ParseError(L.no, "rees generator needs '@<degree>'");
                Rational d = rational_at(trim(item.substr(at + 1)), L.no);
                if (d <= 0) throw ParseError(L.no, "rees degrees must be positive");
                inst.R.gens.push_back({parse_poly(item.substr(0, at), ring, L.no), d});
            }
            have_R = true;
        } else if (L.key == "foliation") {
            if (have_fol) throw ParseError(L.no, "duplicate foliation line");
            have_fol = true;
            std::string r = trim(L.rest);
            if (r == "D" || r == "Dlog") {
                fol_keyword = r;
                continue;
            }
            for (const auto& d : split(r, ';')) inst.F.gens.push_back(Derivation(ring, parse_vector_field(d, ring, L.no)));
        } else if (L.key == "point") {
            auto ws = words(L.rest);
            if (ws.size() != names.size()) throw ParseError(L.no, "point needs one coordinate per variable");
            std::vector<Rational> p;
            for (const auto& w : ws) p.push_back(rational_at(w, L.no));
            inst.points.push_back(p);
        } else if (L.key == "center") {
            center_lines.push_back({L.no, L.rest});
        } else {
            throw ParseError(L.no, "unknown directive '" + L.key + "'");
        }
    }
    inst.ctx = Context(ring, div);

    if (!fol_keyword.empty()) inst.F = fol_keyword == "D" ? full_foliation(ring) : log_foliation(inst.ctx);
    if (!have_fol) inst.F = inst.monomial && !ring_line ? monomial_to_foliation(*inst.monomial, ring) : log_foliation(inst.ctx);
    if (!center_lines.empty()) inst.center = parse_center(center_lines, ring);
    if (!have_R && !have_mono && !inst.center) throw ParseError(lines.empty() ? 1 : lines.back().no, "missing ideal or rees line");
    return inst;
}

Instance load_instance(const std::string& path, int truncation_override) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str(), truncation_override);
}

PointedInstance translate(const PointedInstance& inst, const std::vector<Rational>& point) {
    const RingPtr& ring = inst.ctx.ring;
    if (static_cast<int>(point.size()) != ring->nvars()) throw DomainError("point has the wrong dimension");
    std::vector<Jet> shift;
    std::vector<bool> div = inst.ctx.divisor;
    for (int i = 0; i < ring->nvars(); ++i) {
        Jet v = Jet::var(ring, i);
        if (point[i] != 0) {
            v += Jet::constant(ring, point[i]);
            div[i] = false;
        }
        shift.push_back(v);
    }
    PointedInstance out{Context(ring, div), ReesAlgebra(ring), {}};
    for (const auto& g : inst.R.gens) out.R.gens.push_back({substitute(g.f, shift, ring), g.deg});
    for (const auto& d : inst.F.gens) {
        Derivation t(ring);
        for (int i = 0; i < ring->nvars(); ++i) t.coef[i] = substitute(d.coef[i], shift, ring);
        out.F.gens.push_back(t);
    }
    return out;
}

}  // namespace folres
