#ifndef FOLRES_KERNEL_HPP
#define FOLRES_KERNEL_HPP

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace folres {

using Rational = mpq_class;

/// Input or mathematical precondition violated (CLI exit code 1).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Truncation or step budget exhausted (CLI exit code 2).
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input.
class ParseError : public DomainError {
public:
    ParseError(int line, const std::string& msg)
        : DomainError("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

constexpr int kMaxVars = 16;
/// Precision value of an exact polynomial.
constexpr int kExact = 1 << 28;

inline int sat_add(int a, int b) {
    long long s = static_cast<long long>(a) + b;
    return s >= kExact ? kExact : static_cast<int>(s);
}

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);
/// Smallest positive rational that is an integer multiple of both.
Rational rat_lcm(const Rational& a, const Rational& b);
bool is_integer(const Rational& q);

/// Exponent vector.
struct Mono {
    std::array<std::uint8_t, kMaxVars> e{};

    int deg() const {
        int d = 0;
        for (auto v : e) d += v;
        return d;
    }
    bool operator==(const Mono& o) const { return e == o.e; }
    bool operator!=(const Mono& o) const { return e != o.e; }
    bool divides(const Mono& o) const {
        for (int i = 0; i < kMaxVars; ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }
};

/// Graded order: total degree first, then lexicographic with the first
/// variable most significant. Ascending.
inline bool grlex_less(const Mono& a, const Mono& b) {
    int da = a.deg(), db = b.deg();
    if (da != db) return da < db;
    return std::memcmp(a.e.data(), b.e.data(), kMaxVars) < 0;
}

struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const { return grlex_less(a, b); }
};

Mono mono_mul(const Mono& a, const Mono& b);

/// Variable names plus the truncation order N.
struct Ring {
    std::vector<std::string> names;
    int N = 16;

    int nvars() const { return static_cast<int>(names.size()); }
    int index_of(const std::string& v) const;  // -1 when absent
};
using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(std::vector<std::string> names, int N);
bool same_ring(const RingPtr& a, const RingPtr& b);

/// A ring together with the divisor flags of its variables.
struct Context {
    RingPtr ring;
    std::vector<bool> divisor;

    Context() = default;
    Context(RingPtr r, std::vector<bool> d);
    explicit Context(RingPtr r) : Context(r, std::vector<bool>(r->nvars(), false)) {}
    int nvars() const { return ring->nvars(); }
    bool is_divisor(int i) const { return divisor[i]; }
    Context without_divisors() const { return Context(ring); }
};

struct Term {
    Mono m;
    Rational c;
};

/// Truncated power series. `prec` is the largest degree up to which every
/// coefficient is exact; exact polynomials carry kExact.
class Jet {
public:
    Jet() = default;
    explicit Jet(RingPtr r) : ring_(std::move(r)) {}

    static Jet zero(RingPtr r) { return Jet(std::move(r)); }
    static Jet constant(RingPtr r, const Rational& c);
    static Jet var(RingPtr r, int i);
    static Jet monomial(RingPtr r, const Mono& m, const Rational& c);
    static Jet from_terms(RingPtr r, std::vector<Term> terms, int prec = kExact);

    const RingPtr& ring() const { return ring_; }
    const std::vector<Term>& terms() const { return t_; }
    int prec() const { return prec_; }
    bool exact() const { return prec_ >= kExact; }
    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }

    /// Lowest stored degree (kExact for the zero jet).
    int ord() const { return t_.empty() ? kExact : t_.front().m.deg(); }
    /// Guaranteed lower bound on the true order.
    int lo() const;
    int max_deg() const { return t_.empty() ? -1 : t_.back().m.deg(); }
    Rational coeff(const Mono& m) const;
    Rational const_term() const;
    /// Nonzero constant term; requires prec >= 0.
    bool is_unit() const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet scaled(const Rational& c) const;
    Jet times_mono(const Mono& m, const Rational& c) const;
    Jet deriv(int i) const;
    /// Drop all terms above degree k and cap the precision at k.
    Jet truncated(int k) const;
    /// Same coefficients, different ring object with identical names.
    Jet rebased(RingPtr r) const;
    Jet with_prec(int p) const;

    /// Exact structural equality including precision.
    bool operator==(const Jet& o) const;
    bool operator!=(const Jet& o) const { return !(*this == o); }
    /// Coefficients agree in every degree up to k.
    bool agrees_upto(const Jet& o, int k) const;

private:
    void normalize();
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet add_impl(const Jet& a, const Jet& b, int sign);

    RingPtr ring_;
    std::vector<Term> t_;  // grlex ascending, no zeros
    int prec_ = kExact;
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet jet_mul(const Jet& a, const Jet& b);
Jet pow(const Jet& a, int k);
void check_same_ring(const Jet& a, const Jet& b);

/// Composition f(images) truncated at the target ring's N.
Jet substitute(const Jet& f, const std::vector<Jet>& images, const RingPtr& target);
/// Substitute a subset of variables by name; others map to same-named
/// target variables (or must be absent from f).
Jet substitute_named(const Jet& f, const std::vector<std::pair<std::string, Jet>>& map,
                     const RingPtr& target);
/// Move a jet to a ring that contains all its variables by name.
Jet embed(const Jet& f, const RingPtr& target);
bool is_unit(const Jet& f);
/// Value at a rational point (exact polynomials only).
Rational evaluate(const Jet& f, const std::vector<Rational>& point);

/// Power series inverse of a unit.
Jet inverse(const Jet& u);

// Parsing and printing.
Jet parse_poly(const std::string& text, const RingPtr& ring, int line = 0);
/// Parse `poly * d/dv + ...`; one coefficient jet per ring variable.
std::vector<Jet> parse_vector_field(const std::string& text, const RingPtr& ring, int line = 0);
std::string to_string(const Jet& f);
std::string mono_string(const Mono& m, const Ring& ring);

}  // namespace folres

#endif
