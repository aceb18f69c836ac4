#include "folres/kernel.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

namespace folres {

Rational parse_rational(const std::string& s) {
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0) throw DomainError("bad rational literal '" + s + "'");
    q.canonicalize();
    if (q.get_den() == 0) throw DomainError("zero denominator in '" + s + "'");
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Rational rat_lcm(const Rational& a, const Rational& b) {
    mpz_class num, den;
    mpz_lcm(num.get_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
    mpz_gcd(den.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r;
    for (int i = 0; i < kMaxVars; ++i) {
        int s = a.e[i] + b.e[i];
        if (s > 255) throw BudgetError("exponent overflow");
        r.e[i] = static_cast<std::uint8_t>(s);
    }
    return r;
}

int Ring::index_of(const std::string& v) const {
    for (int i = 0; i < nvars(); ++i)
        if (names[i] == v) return i;
    return -1;
}

RingPtr make_ring(std::vector<std::string> names, int N) {
    if (static_cast<int>(names.size()) > kMaxVars) throw DomainError("too many variables");
    if (N < 1) throw DomainError("truncation order must be positive");
    if (N > 250) throw DomainError("truncation order too large");
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j]) throw DomainError("duplicate variable '" + names[i] + "'");
    auto r = std::make_shared<Ring>();
    r->names = std::move(names);
    r->N = N;
    return r;
}

bool same_ring(const RingPtr& a, const RingPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->names == b->names && a->N == b->N;
}

Context::Context(RingPtr r, std::vector<bool> d) : ring(std::move(r)), divisor(std::move(d)) {
    if (static_cast<int>(divisor.size()) != ring->nvars()) throw DomainError("divisor flag count mismatch");
}

void check_same_ring(const Jet& a, const Jet& b) {
    if (!same_ring(a.ring(), b.ring())) throw DomainError("context mismatch");
}

// ---------------------------------------------------------------- Jet

Jet Jet::constant(RingPtr r, const Rational& c) {
    Jet j(std::move(r));
    if (c != 0) j.t_.push_back({Mono{}, c});
    return j;
}

Jet Jet::var(RingPtr r, int i) {
    Mono m;
    m.e[i] = 1;
    return monomial(std::move(r), m, 1);
}

Jet Jet::monomial(RingPtr r, const Mono& m, const Rational& c) {
    Jet j(std::move(r));
    if (c != 0 && m.deg() <= j.ring_->N) j.t_.push_back({m, c});
    if (m.deg() > j.ring_->N && c != 0) j.prec_ = j.ring_->N;
    return j;
}

Jet Jet::from_terms(RingPtr r, std::vector<Term> terms, int prec) {
    Jet j(std::move(r));
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return grlex_less(a.m, b.m); });
    for (auto& t : terms) {
        if (!j.t_.empty() && j.t_.back().m == t.m)
            j.t_.back().c += t.c;
        else
            j.t_.push_back(std::move(t));
    }
    j.prec_ = prec;
    j.normalize();
    return j;
}

void Jet::normalize() {
    int cap = std::min(prec_, ring_ ? ring_->N : kExact);
    bool dropped = false;
    std::vector<Term> out;
    out.reserve(t_.size());
    for (auto& t : t_) {
        if (t.c == 0) continue;
        if (t.m.deg() > cap) {
            dropped = true;
            continue;
        }
        out.push_back(std::move(t));
    }
    t_ = std::move(out);
    if (dropped && prec_ > cap) prec_ = cap;
}

int Jet::lo() const {
    int o = ord();
    return std::min(o, sat_add(prec_, 1));
}

Rational Jet::coeff(const Mono& m) const {
    auto it = std::lower_bound(t_.begin(), t_.end(), m,
                               [](const Term& t, const Mono& k) { return grlex_less(t.m, k); });
    if (it != t_.end() && it->m == m) return it->c;
    return 0;
}

Rational Jet::const_term() const {
    if (!t_.empty() && t_.front().m.deg() == 0) return t_.front().c;
    return 0;
}

bool Jet::is_unit() const {
    if (prec_ < 0) throw BudgetError("precision exhausted before the constant term");
    return const_term() != 0;
}

bool is_unit(const Jet& f) { return f.is_unit(); }

Jet Jet::operator-() const {
    Jet r = *this;
    for (auto& t : r.t_) t.c = -t.c;
    return r;
}

Jet add_impl(const Jet& a, const Jet& b, int sign) {
    check_same_ring(a, b);
    Jet r(a.ring_);
    r.prec_ = std::min(a.prec_, b.prec_);
    r.t_.reserve(a.t_.size() + b.t_.size());
    std::size_t i = 0, j = 0;
    while (i < a.t_.size() || j < b.t_.size()) {
        if (j == b.t_.size() || (i < a.t_.size() && grlex_less(a.t_[i].m, b.t_[j].m))) {
            r.t_.push_back(a.t_[i++]);
        } else if (i == a.t_.size() || grlex_less(b.t_[j].m, a.t_[i].m)) {
            Term t = b.t_[j++];
            if (sign < 0) t.c = -t.c;
            r.t_.push_back(std::move(t));
        } else {
            Rational c = sign < 0 ? Rational(a.t_[i].c - b.t_[j].c) : Rational(a.t_[i].c + b.t_[j].c);
            if (c != 0) r.t_.push_back({a.t_[i].m, c});
            ++i;
            ++j;
        }
    }
    r.normalize();
    return r;
}

Jet operator+(const Jet& a, const Jet& b) { return add_impl(a, b, 1); }
Jet operator-(const Jet& a, const Jet& b) { return add_impl(a, b, -1); }
Jet& Jet::operator+=(const Jet& o) { return *this = add_impl(*this, o, 1); }
Jet& Jet::operator-=(const Jet& o) { return *this = add_impl(*this, o, -1); }

Jet Jet::scaled(const Rational& c) const {
    if (c == 0) {
        Jet z(ring_);
        z.prec_ = prec_;
        return z;
    }
    Jet r = *this;
    for (auto& t : r.t_) t.c *= c;
    return r;
}

Jet Jet::times_mono(const Mono& m, const Rational& c) const {
    Jet r(ring_);
    int d = m.deg();
    r.prec_ = sat_add(prec_, d);
    if (c == 0) return r;
    for (const auto& t : t_) r.t_.push_back({mono_mul(t.m, m), t.c * c});
    r.normalize();
    return r;
}

namespace {

/// Monomials of degree <= top in n variables, ranked in grlex order and
/// addressed by the mixed-radix key sum e_i (top + 1)^i.
struct DenseBox {
    int n = 0, top = 0;
    std::vector<int> rank;
    std::vector<Mono> monos;
};

constexpr long kDenseBoxLimit = 1L << 18;

DenseBox* dense_box(int n, int top) {
    if (n <= 0 || top <= 0) return nullptr;
    long size = 1;
    for (int i = 0; i < n; ++i) {
        size *= top + 1;
        if (size > kDenseBoxLimit) return nullptr;
    }
    thread_local std::map<std::pair<int, int>, std::unique_ptr<DenseBox>> cache;
    auto& slot = cache[{n, top}];
    if (slot) return slot.get();
    auto box = std::make_unique<DenseBox>();
    box->n = n;
    box->top = top;
    box->rank.assign(size, -1);
    std::vector<std::pair<Mono, long>> all;
    for (long k = 0; k < size; ++k) {
        Mono m;
        long rest = k;
        int d = 0;
        for (int i = 0; i < n; ++i) {
            m.e[i] = static_cast<std::uint8_t>(rest % (top + 1));
            d += m.e[i];
            rest /= top + 1;
        }
        if (d <= top) all.push_back({m, k});
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return grlex_less(a.first, b.first); });
    for (std::size_t i = 0; i < all.size(); ++i) {
        box->rank[all[i].second] = static_cast<int>(i);
        box->monos.push_back(all[i].first);
    }
    slot = std::move(box);
    return slot.get();
}

}  // namespace

Jet operator*(const Jet& a, const Jet& b) {
    check_same_ring(a, b);
    Jet r(a.ring_);
    int N = a.ring_->N;
    int p = std::min(sat_add(a.lo(), b.prec_), sat_add(b.lo(), a.prec_));
    if (a.t_.empty() || b.t_.empty()) {
        r.prec_ = p;
        return r;
    }
    int cap = std::min(p, N);
    bool dropped = false;
    if (a.t_.size() == 1 || b.t_.size() == 1) {
        const Jet& s = a.t_.size() == 1 ? a : b;
        const Jet& o = a.t_.size() == 1 ? b : a;
        const Term& st = s.t_.front();
        for (const auto& t : o.t_) {
            if (t.m.deg() + st.m.deg() > cap) {
                dropped = true;
                continue;
            }
            r.t_.push_back({mono_mul(t.m, st.m), t.c * st.c});
        }
    } else if (DenseBox* box = dense_box(a.ring_->nvars(), std::min(cap, a.max_deg() + b.max_deg()))) {
        // products indexed by grlex rank inside the box of degree <= top
        const int n = box->n, top = box->top;
        auto key = [&](const Mono& m) {
            long k = 0;
            for (int i = n - 1; i >= 0; --i) k = k * (top + 1) + m.e[i];
            return k;
        };
        std::vector<long> kb(b.t_.size());
        std::vector<char> ib(b.t_.size());
        for (std::size_t j = 0; j < b.t_.size(); ++j) {
            kb[j] = key(b.t_[j].m);
            ib[j] = mpz_cmp_ui(b.t_[j].c.get_den_mpz_t(), 1) == 0;
        }
        thread_local std::vector<mpq_class> buf;
        thread_local std::vector<char> used;
        thread_local std::vector<int> touched;
        if (buf.size() < box->monos.size()) {
            buf.resize(box->monos.size());
            used.resize(box->monos.size(), 0);
        }
        touched.clear();
        mpq_class tmp;
        for (const auto& x : a.t_) {
            int dx = x.m.deg();
            long kx = key(x.m);
            bool ix = mpz_cmp_ui(x.c.get_den_mpz_t(), 1) == 0;
            for (std::size_t j = 0; j < b.t_.size(); ++j) {
                const auto& y = b.t_[j];
                if (dx + y.m.deg() > cap) {
                    dropped = true;
                    break;
                }
                int rk = box->rank[kx + kb[j]];
                mpq_ptr acc = buf[rk].get_mpq_t();
                if (!used[rk]) {
                    used[rk] = 1;
                    touched.push_back(rk);
                    mpq_mul(acc, x.c.get_mpq_t(), y.c.get_mpq_t());
                } else if (ix && ib[j] && mpz_cmp_ui(mpq_denref(acc), 1) == 0) {
                    // integers: skip the canonicalization
                    mpz_addmul(mpq_numref(acc), mpq_numref(x.c.get_mpq_t()), mpq_numref(y.c.get_mpq_t()));
                } else {
                    mpq_mul(tmp.get_mpq_t(), x.c.get_mpq_t(), y.c.get_mpq_t());
                    mpq_add(buf[rk].get_mpq_t(), buf[rk].get_mpq_t(), tmp.get_mpq_t());
                }
            }
        }
        std::sort(touched.begin(), touched.end());
        r.t_.reserve(touched.size());
        for (int rk : touched) {
            used[rk] = 0;
            if (sgn(buf[rk]) != 0) r.t_.push_back({box->monos[rk], buf[rk]});
        }
    } else {
        std::map<Mono, Rational, MonoLess> acc;
        for (const auto& x : a.t_) {
            int dx = x.m.deg();
            for (const auto& y : b.t_) {
                if (dx + y.m.deg() > cap) {
                    dropped = true;
                    break;  // b is degree-sorted
                }
                auto [it, fresh] = acc.try_emplace(mono_mul(x.m, y.m), x.c * y.c);
                if (!fresh) it->second += x.c * y.c;
            }
        }
        r.t_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (c != 0) r.t_.push_back({m, c});
    }
    r.prec_ = p;
    if (dropped && r.prec_ > N) r.prec_ = N;
    r.normalize();
    return r;
}

Jet jet_mul(const Jet& a, const Jet& b) { return a * b; }

Jet pow(const Jet& a, int k) {
    Jet r = Jet::constant(a.ring(), 1);
    Jet base = a;
    while (k > 0) {
        if (k & 1) r = r * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return r;
}

Jet Jet::deriv(int i) const {
    Jet r(ring_);
    r.prec_ = prec_ >= kExact ? kExact : prec_ - 1;
    for (const auto& t : t_) {
        if (t.m.e[i] == 0) continue;
        Mono m = t.m;
        m.e[i] -= 1;
        r.t_.push_back({m, t.c * static_cast<long>(t.m.e[i])});
    }
    std::sort(r.t_.begin(), r.t_.end(), [](const Term& a, const Term& b) { return grlex_less(a.m, b.m); });
    r.normalize();
    return r;
}

Jet Jet::truncated(int k) const {
    Jet r = *this;
    if (r.prec_ > k && !(exact() && max_deg() <= k)) r.prec_ = k;
    r.normalize();
    return r;
}

Jet Jet::rebased(RingPtr r) const {
    if (!r || r->nvars() != ring_->nvars()) throw DomainError("rebase across different variable counts");
    Jet j = *this;
    j.ring_ = std::move(r);
    j.normalize();
    return j;
}

Jet Jet::with_prec(int p) const {
    Jet j = *this;
    j.prec_ = std::min(p, prec_);
    j.normalize();
    return j;
}

bool Jet::operator==(const Jet& o) const {
    if (!same_ring(ring_, o.ring_) || prec_ != o.prec_ || t_.size() != o.t_.size()) return false;
    for (std::size_t i = 0; i < t_.size(); ++i)
        if (t_[i].m != o.t_[i].m || t_[i].c != o.t_[i].c) return false;
    return true;
}

bool Jet::agrees_upto(const Jet& o, int k) const {
    Jet d = (*this - o);
    return d.t_.empty() || d.t_.front().m.deg() > k;
}

Jet substitute(const Jet& f, const std::vector<Jet>& images, const RingPtr& target) {
    int n = f.ring()->nvars();
    if (static_cast<int>(images.size()) != n) throw DomainError("substitution arity mismatch");
    for (const auto& g : images)
        if (!same_ring(g.ring(), target)) throw DomainError("substitution image in wrong context");
    Jet out = Jet::zero(target);
    if (!f.exact()) {
        int mlo = kExact;
        for (const auto& g : images) mlo = std::min(mlo, g.lo());
        long long cap = (static_cast<long long>(f.prec()) + 1) * mlo - 1;
        if (mlo == 0) throw BudgetError("cannot substitute a truncated series into non-vanishing images");
        out = out.with_prec(static_cast<int>(std::min<long long>(cap, kExact)));
    }
    std::vector<std::vector<Jet>> powers(n);
    auto power = [&](int i, int e) -> const Jet& {
        auto& pw = powers[i];
        if (pw.empty()) pw.push_back(Jet::constant(target, 1));
        while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * images[i]);
        return pw[e];
    };
    // Horner in one variable at a time over the terms sharing the earlier exponents
    std::function<Jet(std::vector<const Term*>&, int)> horner = [&](std::vector<const Term*>& ts, int v) -> Jet {
        if (v == n) {
            Rational c = 0;
            for (const Term* t : ts) c += t->c;
            return Jet::constant(target, c);
        }
        std::stable_sort(ts.begin(), ts.end(), [v](const Term* a, const Term* b) { return a->m.e[v] > b->m.e[v]; });
        Jet acc = Jet::zero(target);
        int prev = -1;
        std::size_t i = 0;
        while (i < ts.size()) {
            int e = ts[i]->m.e[v];
            std::size_t j = i;
            while (j < ts.size() && ts[j]->m.e[v] == e) ++j;
            std::vector<const Term*> group(ts.begin() + i, ts.begin() + j);
            if (prev >= 0) acc = acc * power(v, prev - e);
            acc += horner(group, v + 1);
            prev = e;
            i = j;
        }
        if (prev > 0) acc = acc * power(v, prev);
        return acc;
    };
    if (f.is_zero()) return out;
    std::vector<const Term*> all;
    all.reserve(f.size());
    for (const auto& t : f.terms()) all.push_back(&t);
    Jet val = horner(all, 0);
    return f.exact() ? val : out + val;
}

Jet substitute_named(const Jet& f, const std::vector<std::pair<std::string, Jet>>& map,
                     const RingPtr& target) {
    const Ring& src = *f.ring();
    std::vector<Jet> images;
    images.reserve(src.nvars());
    std::vector<bool> used(src.nvars(), false);
    for (const auto& t : f.terms())
        for (int i = 0; i < src.nvars(); ++i)
            if (t.m.e[i]) used[i] = true;
    for (int i = 0; i < src.nvars(); ++i) {
        const Jet* img = nullptr;
        for (const auto& [name, j] : map)
            if (name == src.names[i]) img = &j;
        if (img) {
            images.push_back(*img);
            continue;
        }
        int k = target->index_of(src.names[i]);
        if (k >= 0)
            images.push_back(Jet::var(target, k));
        else if (!used[i])
            images.push_back(Jet::zero(target));
        else
            throw DomainError("variable '" + src.names[i] + "' has no image");
    }
    return substitute(f, images, target);
}

Jet embed(const Jet& f, const RingPtr& target) {
    const Ring& src = *f.ring();
    std::vector<int> where(src.nvars(), -1);
    for (int i = 0; i < src.nvars(); ++i) where[i] = target->index_of(src.names[i]);
    std::vector<Term> terms;
    for (const auto& t : f.terms()) {
        Term nt{Mono{}, t.c};
        for (int i = 0; i < src.nvars(); ++i) {
            if (!t.m.e[i]) continue;
            if (where[i] < 0) throw DomainError("variable '" + src.names[i] + "' missing in target");
            nt.m.e[where[i]] = t.m.e[i];
        }
        terms.push_back(nt);
    }
    return Jet::from_terms(target, std::move(terms), f.prec());
}

Rational evaluate(const Jet& f, const std::vector<Rational>& point) {
    if (!f.exact()) throw BudgetError("evaluation of a truncated series away from the origin");
    Rational v = 0;
    for (const auto& t : f.terms()) {
        Rational x = t.c;
        for (int i = 0; i < f.ring()->nvars(); ++i)
            for (int k = 0; k < t.m.e[i]; ++k) x *= point[i];
        v += x;
    }
    return v;
}

Jet inverse(const Jet& u) {
    if (!u.is_unit()) throw DomainError("inverse of a non-unit");
    Rational c = u.const_term();
    Jet r = u.scaled(1 / c) - Jet::constant(u.ring(), 1);  // u/c = 1 + r
    Rational ic = 1 / c;
    if (r.is_zero() && r.exact()) return Jet::constant(u.ring(), ic);
    Jet sum = Jet::constant(u.ring(), 1);
    Jet term = Jet::constant(u.ring(), 1);
    Jet mr = -r;
    for (int k = 1; k <= u.ring()->N; ++k) {
        term = term * mr;
        if (term.is_zero() && term.prec() >= u.ring()->N) break;
        sum += term;
    }
    if (sum.prec() > u.ring()->N) sum = sum.with_prec(std::min(u.prec(), u.ring()->N));
    return sum.scaled(ic);
}

// ---------------------------------------------------------------- printing

std::string mono_string(const Mono& m, const Ring& ring) {
    std::string s;
    for (int i = 0; i < ring.nvars(); ++i) {
        if (!m.e[i]) continue;
        if (!s.empty()) s += "*";
        s += ring.names[i];
        if (m.e[i] > 1) s += "^" + std::to_string(m.e[i]);
    }
    return s;
}

std::string to_string(const Jet& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    const auto& ts = f.terms();
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
        Rational c = it->c;
        bool neg = c < 0;
        if (neg) c = -c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        std::string ms = mono_string(it->m, *f.ring());
        if (ms.empty())
            os << c.get_str();
        else if (c == 1)
            os << ms;
        else
            os << c.get_str() << "*" << ms;
    }
    return os.str();
}

// ---------------------------------------------------------------- parsing

namespace {

struct Tok {
    enum Kind { Num, Ident, Basis, Op, End } kind;
    std::string text;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '~';
}

std::vector<Tok> lex(const std::string& s, int line) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Tok::Num, s.substr(i, j - i)});
            i = j;
        } else if (c == 'd' && i + 2 < s.size() && s[i + 1] == '/' && s[i + 2] == 'd' && i + 3 < s.size() &&
                   ident_start(s[i + 3])) {
            std::size_t j = i + 3;
            while (j < s.size() && ident_char(s[j])) ++j;
            out.push_back({Tok::Basis, s.substr(i + 3, j - i - 3)});
            i = j;
        } else if (ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j])) ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i)});
            i = j;
        } else if (std::string("+-*/^()").find(c) != std::string::npos) {
            out.push_back({Tok::Op, std::string(1, c)});
            ++i;
        } else {
            throw ParseError(line, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::End, ""});
    return out;
}

// A parsed value is either a scalar jet or a vector field (one jet per variable).
struct Val {
    bool field = false;
    Jet poly;
    std::vector<Jet> comp;
};

class Parser {
public:
    Parser(const std::string& s, RingPtr ring, int line, bool allow_fields)
        : toks_(lex(s, line)), ring_(std::move(ring)), line_(line), fields_(allow_fields) {
        big_ = make_ring(ring_->names, 250);
    }

    Val parse() {
        Val v = expr();
        if (toks_[pos_].kind != Tok::End) fail("trailing input '" + toks_[pos_].text + "'");
        return v;
    }

    RingPtr big() const { return big_; }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }
    const Tok& peek() const { return toks_[pos_]; }
    bool is_op(const char* o) const { return peek().kind == Tok::Op && peek().text == o; }

    Val scalar(const Jet& j) { return Val{false, j, {}}; }

    Val add(Val a, const Val& b, int sign) {
        if (a.field != b.field) fail("cannot add a function and a vector field");
        if (!a.field) return scalar(sign > 0 ? a.poly + b.poly : a.poly - b.poly);
        for (std::size_t i = 0; i < a.comp.size(); ++i)
            a.comp[i] = sign > 0 ? a.comp[i] + b.comp[i] : a.comp[i] - b.comp[i];
        return a;
    }

    Val mul(const Val& a, const Val& b) {
        if (a.field && b.field) fail("product of two vector fields");
        if (!a.field && !b.field) return scalar(a.poly * b.poly);
        const Val& f = a.field ? a : b;
        const Jet& p = a.field ? b.poly : a.poly;
        Val r = f;
        for (auto& c : r.comp) c = c * p;
        return r;
    }

    Val expr() {
        Val v;
        if (is_op("-")) {
            ++pos_;
            v = neg(term());
        } else {
            if (is_op("+")) ++pos_;
            v = term();
        }
        while (is_op("+") || is_op("-")) {
            int sign = peek().text == "+" ? 1 : -1;
            ++pos_;
            v = add(v, term(), sign);
        }
        return v;
    }

    Val neg(Val v) {
        if (!v.field) return scalar(-v.poly);
        for (auto& c : v.comp) c = -c;
        return v;
    }

    Val term() {
        Val v = power();
        while (is_op("*") || is_op("/")) {
            bool div = peek().text == "/";
            ++pos_;
            Val w = power();
            if (div) {
                if (w.field || w.poly.size() > 1 || (w.poly.size() == 1 && w.poly.terms()[0].m.deg() != 0))
                    fail("division only by nonzero rational constants");
                if (w.poly.is_zero()) fail("division by zero");
                Rational c = 1 / w.poly.const_term();
                if (v.field)
                    for (auto& x : v.comp) x = x.scaled(c);
                else
                    v.poly = v.poly.scaled(c);
            } else {
                v = mul(v, w);
            }
        }
        return v;
    }

    Val power() {
        Val b = atom();
        if (is_op("^")) {
            ++pos_;
            if (peek().kind != Tok::Num) fail("exponent must be a nonnegative integer");
            int e = std::stoi(peek().text);
            ++pos_;
            if (b.field) fail("power of a vector field");
            b.poly = pow(b.poly, e);
        }
        return b;
    }

    Val atom() {
        const Tok& t = peek();
        if (t.kind == Tok::Num) {
            ++pos_;
            return scalar(Jet::constant(big_, Rational(mpz_class(t.text))));
        }
        if (t.kind == Tok::Ident) {
            int k = ring_->index_of(t.text);
            if (k < 0) fail("unknown variable '" + t.text + "'");
            ++pos_;
            return scalar(Jet::var(big_, k));
        }
        if (t.kind == Tok::Basis) {
            if (!fields_) fail("vector field basis in a function");
            int k = ring_->index_of(t.text);
            if (k < 0) fail("unknown variable '" + t.text + "' in d/d" + t.text);
            ++pos_;
            Val v;
            v.field = true;
            v.comp.assign(ring_->nvars(), Jet::zero(big_));
            v.comp[k] = Jet::constant(big_, 1);
            return v;
        }
        if (is_op("(")) {
            ++pos_;
            Val v = expr();
            if (!is_op(")")) fail("missing ')'");
            ++pos_;
            return v;
        }
        if (is_op("-")) {
            ++pos_;
            return neg(power());
        }
        fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected token '" + t.text + "'");
    }

    std::vector<Tok> toks_;
    std::size_t pos_ = 0;
    RingPtr ring_, big_;
    int line_;
    bool fields_;
};

Jet shrink(const Jet& j, const RingPtr& ring, int line) {
    if (j.max_deg() > ring->N)
        throw ParseError(line, "degree " + std::to_string(j.max_deg()) + " exceeds truncation order " +
                                   std::to_string(ring->N));
    return j.rebased(ring);
}

}  // namespace

Jet parse_poly(const std::string& text, const RingPtr& ring, int line) {
    Parser p(text, ring, line, false);
    Val v = p.parse();
    return shrink(v.poly, ring, line);
}

std::vector<Jet> parse_vector_field(const std::string& text, const RingPtr& ring, int line) {
    Parser p(text, ring, line, true);
    Val v = p.parse();
    if (!v.field) {
        if (v.poly.is_zero()) return std::vector<Jet>(ring->nvars(), Jet::zero(ring));
        throw ParseError(line, "expected a vector field 'poly * d/dv + ...'");
    }
    std::vector<Jet> out;
    for (auto& c : v.comp) out.push_back(shrink(c, ring, line));
    return out;
}

}  // namespace folres
