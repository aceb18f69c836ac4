#include <doctest.h>

#include "helpers.hpp"

using namespace th;

TEST_CASE("applying derivations") {
    auto r = ring({"x", "y"});
    CHECK(apply_derivation(D(r, "d/dx"), P(r, "x^5 + y")) == P(r, "5*x^4"));
    CHECK(apply_derivation(D(r, "x*d/dx + y^2*d/dy"), P(r, "x")) == P(r, "x"));
    auto r3 = ring({"x", "y"}, 4);
    Jet ey = P(r3, "y*(1 + x + 1/2*x^2 + 1/6*x^3)");
    Jet h = apply_derivation(D(r3, "d/dx - y*d/dy"), ey);
    CHECK(h.agrees_upto(Jet::zero(r3), 3));
}

TEST_CASE("brackets") {
    auto r = ring({"x", "y", "z"});
    CHECK(lie_bracket(D(r, "d/dx"), D(r, "d/dy")).is_zero());
    CHECK(lie_bracket(D(r, "d/dx"), D(r, "x*d/dy")) == D(r, "d/dy"));
    CHECK(lie_bracket(D(r, "x*d/dx"), D(r, "y*d/dy")).is_zero());
}

TEST_CASE("bracket antisymmetry and Jacobi") {
    std::mt19937 rng(3);
    auto r = ring({"x", "y"}, 8);
    auto rd = [&] { return Derivation(r, {random_poly(rng, r, 2, 3), random_poly(rng, r, 2, 3)}); };
    for (int it = 0; it < 20; ++it) {
        Derivation a = rd(), b = rd(), c = rd();
        CHECK((lie_bracket(a, b) + lie_bracket(b, a)).is_zero());
        Derivation j = lie_bracket(a, lie_bracket(b, c)) + lie_bracket(b, lie_bracket(c, a)) +
                       lie_bracket(c, lie_bracket(a, b));
        for (const auto& k : j.coef) CHECK(k.agrees_upto(Jet::zero(r), 5));
    }
}

TEST_CASE("involutivity") {
    auto r = ring({"x", "y", "z"});
    CHECK(check_involutive(Fol(r, {"d/dx", "d/dy"})).involutive);
    auto rep = check_involutive(Fol(r, {"d/dx", "d/dy + x*d/dz"}));
    CHECK_FALSE(rep.involutive);
    REQUIRE(rep.witness);
    CHECK(*rep.witness == D(r, "d/dz"));
    auto r2 = ring({"x", "y"});
    CHECK(check_involutive(Fol(r2, {"(x^2 + y^2)*d/dx + x*y*d/dy"})).involutive);
}

TEST_CASE("F applied to an ideal") {
    auto r = ring({"x", "y"});
    auto J = f_apply_ideal(Fol(r, {"d/dx"}), {P(r, "x^5 + y")});
    REQUIRE(J.size() == 2);
    CHECK(J[0] == P(r, "x^5 + y"));
    CHECK(J[1] == P(r, "5*x^4"));
    CHECK(f_apply_ideal(Foliation{}, {P(r, "y")}) == IdealGens{P(r, "y")});
    CHECK(f_apply_ideal(Fol(r, {"d/dx"}), {P(r, "1")}).front() == P(r, "1"));
}

TEST_CASE("F-order") {
    auto r = ring({"x", "y"});
    auto Fx = Fol(r, {"d/dx"});
    CHECK(f_order_at(Fx, {P(r, "x^5 + y")}) == FOrder::fin(5));
    CHECK(f_order_at(Fx, {P(r, "1")}) == FOrder::fin(0));
    CHECK(f_order_at(Fx, {P(r, "y")}).infinite);
}

TEST_CASE("F-order is additive, monotone and drops under differentiation") {
    std::mt19937 rng(17);
    auto r = ring({"x", "y"}, 16);
    auto Fx = Fol(r, {"d/dx"});
    auto Fxy = Fol(r, {"d/dx", "d/dy"});
    int checked = 0;
    for (int it = 0; it < 40; ++it) {
        Jet f = random_poly(rng, r, 3, 4, false), g = random_poly(rng, r, 3, 4, false);
        if (f.is_zero() || g.is_zero()) continue;
        FOrder a = f_order_at(Fxy, {f}), b = f_order_at(Fxy, {g});
        FOrder ab = f_order_at(Fxy, {f * g});
        if (!a.infinite && !b.infinite) {
            CHECK(ab == FOrder::fin(a.value + b.value));
            ++checked;
        }
        FOrder ax = f_order_at(Fx, {f});
        CHECK((ax.infinite || ax.value >= a.value));
        FOrder both = f_order_at(Fxy, {f, g});
        CHECK((a.infinite || both.value <= a.value));
        if (!a.infinite && a.value >= 1) {
            IdealGens d1 = f_apply_ideal(Fxy, {f});
            CHECK(f_order_at(Fxy, d1) == FOrder::fin(a.value - 1));
        }
        auto r3 = ring({"x", "y", "t"}, 16);
        Foliation F3{{Derivation::basis(r3, 0), Derivation::basis(r3, 1)}};
        CHECK(f_order_at(F3, {embed(f, r3)}) == a);
    }
    CHECK(checked > 10);
}

TEST_CASE("log smoothness and sm-rank") {
    auto r = ring({"x", "y"});
    auto F = Fol(r, {"x*d/dx + y^2*d/dy"});
    CHECK(log_smooth_at(F, Context(r, {true, false})));
    CHECK_FALSE(log_smooth_at(F, Context(r)));
    CHECK(log_smooth_at(Fol(r, {"d/dx"}), Context(r, {false, true})));
    auto w = ring({"w1", "w2"});
    auto M = Fol(w, {"w1*d/dw1 + w2*d/dw2"});
    CHECK(sm_rank_at(M, {0, 0}) == 0);
    CHECK(sm_rank_at(M, {1, 0}) == 1);
    CHECK(sm_rank_at(Fol(r, {"d/dx"}), {3, 4}) == 1);
}

TEST_CASE("restriction of split presentations") {
    auto r = ring({"x", "y"});
    RingPtr h;
    auto R1 = restrict_to_hypersurface(Fol(r, {"d/dx", "d/dy"}), 0, &h);
    REQUIRE(R1.size() == 1);
    CHECK(R1.gens[0] == Derivation::basis(h, 0));
    CHECK(restrict_to_hypersurface(Fol(r, {"d/dx"}), 0).empty());
    auto r3 = ring({"x", "y", "z"});
    auto R3 = restrict_to_hypersurface(Fol(r3, {"d/dx", "y*d/dy + z*d/dz"}), 0, &h);
    REQUIRE(R3.size() == 1);
    CHECK(R3.gens[0] == D(h, "y*d/dy + z*d/dz"));
}
