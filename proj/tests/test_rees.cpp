#include <doctest.h>

#include "folres/linalg.hpp"
#include "helpers.hpp"

using namespace th;

namespace {

Center center(const RingPtr& r, std::vector<CenterEntry> t, std::vector<CenterEntry> i = {},
              std::vector<CenterEntry> d = {}) {
    Center C(r);
    C.transverse = std::move(t);
    C.invariant = std::move(i);
    C.divisorial = std::move(d);
    C.sort_tiers();
    return C;
}

bool same_span(const ReesAlgebra& a, const ReesAlgebra& b) {
    // as graded families: every generator of one lies in the matching piece of the other
    auto inside = [](const ReesAlgebra& x, const ReesAlgebra& y) {
        for (const auto& g : x.gens)
            if (!ideal_contains(graded_piece(y, g.deg), g.f, g.f.ring()->N)) return false;
        return true;
    };
    return inside(a, b) && inside(b, a);
}

}  // namespace

TEST_CASE("ideals and Rees algebras") {
    auto r = ring({"x", "y"});
    auto R = rees_from_ideal({P(r, "x^5 + y")});
    REQUIRE(R.gens.size() == 1);
    CHECK(R.gens[0].deg == 1);
    CHECK(rees_from_ideal({P(r, "1")}).trivial());
    auto I = ideal_from_rees(Rees(r, {{"x", Rational(1, 2)}, {"y", Rational(1, 3)}}));
    REQUIRE(I.size() == 2);
    CHECK(I[0] == P(r, "x^2"));
    CHECK(I[1] == P(r, "y^3"));
    CHECK(ideal_from_rees(Rees(r, {{"x", 1}})) == IdealGens{P(r, "x")});
    std::mt19937 rng(2);
    for (int it = 0; it < 10; ++it) {
        Jet f = random_poly(rng, r, 3, 4);
        if (f.is_zero()) continue;
        CHECK(ideal_from_rees(rees_from_ideal({f})) == IdealGens{f});
    }
}

TEST_CASE("F-order of Rees algebras") {
    auto r = ring({"x", "y"});
    auto Fx = Fol(r, {"d/dx"});
    CHECK(f_order_rees(Fx, Rees(r, {{"x^5 + y", 1}})) == ExtRational::fin(5));
    CHECK(f_order_rees(Fx, Rees(r, {{"x", Rational(1, 5)}})) == ExtRational::fin(5));
    CHECK(f_order_rees(Fx, Rees(r, {{"y", 1}})).infinite);
}

TEST_CASE("F-infinity closure") {
    auto r = ring({"x", "y"});
    auto Fx = Fol(r, {"d/dx"});
    auto a = f_infty(Fx, Rees(r, {{"y", 1}}));
    CHECK(same_span(a, Rees(r, {{"y", 1}})));
    auto b = f_infty(Fx, Rees(r, {{"x*y", 1}}));
    CHECK(same_span(b, Rees(r, {{"x*y", 1}, {"y", 1}})));
    auto R = Rees(r, {{"x^2 + y", 1}});
    CHECK(same_span(f_infty(Foliation{}, R), R));
    std::mt19937 rng(9);
    for (int it = 0; it < 10; ++it) {
        auto Ri = rees_from_ideal({random_poly(rng, r, 3, 3, false)});
        if (Ri.gens.front().f.is_zero()) continue;
        CHECK(is_f_invariant(Fx, f_infty(Fx, Ri)));
    }
}

TEST_CASE("F-invariance") {
    auto r = ring({"x", "y"});
    CHECK(is_f_invariant(Fol(r, {"d/dx"}), Rees(r, {{"y", 1}})));
    CHECK_FALSE(is_f_invariant(Fol(r, {"d/dx"}), Rees(r, {{"x", 1}})));
    CHECK(is_f_invariant(Fol(r, {"x*d/dx"}), Rees(r, {{"x", 1}})));
}

TEST_CASE("center membership and admissibility") {
    auto r = ring({"x", "y"});
    Center C = center(r, {{"x", 5}}, {{"y", 1}});
    CHECK(center_graded_piece(C, P(r, "x^5 + y"), 1));
    CHECK_FALSE(center_graded_piece(center(r, {{"x", 2}}), P(r, "x"), 1));
    CHECK(center_graded_piece(C, P(r, "1"), 0));
    CHECK(is_admissible(Rees(r, {{"x^5 + y", 1}}), C).admissible);
    CHECK_FALSE(is_admissible(Rees(r, {{"x", 1}}), center(r, {{"x", 2}})).admissible);
    CHECK(is_admissible(ReesAlgebra(r), C).admissible);
}

TEST_CASE("admissibility is antitone") {
    auto r = ring({"x", "y"});
    std::mt19937 rng(21);
    for (int it = 0; it < 30; ++it) {
        Jet f = random_poly(rng, r, 4, 4, false), g = random_poly(rng, r, 4, 4, false);
        if (f.is_zero() || g.is_zero()) continue;
        ReesAlgebra R1 = rees_from_ideal({f}), R2 = rees_from_ideal({f, g});
        for (int a = 1; a <= 4; ++a)
            for (int b = 1; b <= 4; ++b) {
                Center C = center(r, {{"x", a}, {"y", b}});
                bool adm1 = is_admissible(R1, C).admissible;
                if (is_admissible(R2, C).admissible) CHECK(adm1);
                Center Cb = center(r, {{"x", a + 1}, {"y", b}});
                if (is_admissible(R1, Cb).admissible) CHECK(adm1);
            }
    }
}

TEST_CASE("coefficient Rees algebra") {
    auto r = ring({"x", "y"});
    auto Fx = Fol(r, {"d/dx"});
    auto C = coefficient_rees(Rees(r, {{"x^5 + y", 1}}), Fx, 5);
    bool has_x = false;
    for (const auto& g : C.gens)
        if (g.deg == Rational(1, 5) && g.f == P(r, "x")) has_x = true;
    CHECK(has_x);
    CHECK(same_span(coefficient_rees(Rees(r, {{"x^2", 1}}), Fx, 2), Rees(r, {{"x^2", 1}, {"x", Rational(1, 2)}})));
    auto A = Rees(r, {{"x", 1}, {"y", 1}});
    CHECK(same_span(coefficient_rees(A, Fx, 1), A));
    std::mt19937 rng(4);
    for (int it = 0; it < 15; ++it) {
        Jet f = random_poly(rng, r, 4, 4, false);
        auto R = rees_from_ideal({f});
        ExtRational a = f_order_rees(Fx, R);
        if (f.is_zero() || a.infinite) continue;
        auto Cr = coefficient_rees(R, Fx, a.value);
        CHECK(ideal_contains(graded_piece(Cr, 1), f, r->N));
        CHECK(f_order_rees(Fx, Cr) == a);
    }
}

TEST_CASE("invariant values and their order") {
    auto r = ring({"x", "y", "z"});
    CHECK(center_inv(center(r, {{"x", 5}}, {{"y", 1}})).str() == "(5, inf+1)");
    CHECK(center_inv(center(r, {{"x", 1}, {"y", 1}})).str() == "(1, 1)");
    CHECK(center_inv(center(r, {}, {}, {{"z", 3}})).str() == "(inf+inf+3)");
    CHECK(inv("(2, 3)") < inv("(2, 4)"));
    CHECK(inv("(2, 4)") < inv("(2)"));
    CHECK(inv("(2)") < inv("(3, 3)"));
    CHECK(inv("(3, 3)") < inv("(inf+1, inf+5)"));
    CHECK(inv("(∞+1)") == inv("(inf+1)"));
    CHECK(compare_inv(center_inv(center(r, {{"x", 2}, {"y", 2}})), center_inv(center(r, {{"y", 2}, {"x", 2}}))) == 0);
}

TEST_CASE("center files") {
    auto r = ring({"x", "y"});
    Center C = parse_center({{3, "transverse x 5"}, {4, "invariant y 1"}, {5, "chart x = x + y^2"}}, r);
    CHECK(center_inv(C).str() == "(5, inf+1)");
    CHECK(C.chart[0] == P(r, "x + y^2"));
    CHECK_THROWS_AS(parse_center({{9, "transverse q 1"}}, r), ParseError);
    CHECK_THROWS_AS(parse_center({{9, "transverse x -1"}}, r), ParseError);
}
