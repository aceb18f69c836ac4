#include <doctest.h>

#include "folres/invariant.hpp"
#include "helpers.hpp"

using namespace th;

namespace {

InvResult run(const RingPtr& r, const std::vector<std::string>& ideal, const std::vector<std::string>& fol,
              std::vector<bool> div = {}) {
    IdealGens I;
    for (const auto& s : ideal) I.push_back(P(r, s));
    Context ctx = div.empty() ? Context(r) : Context(r, div);
    Foliation F = fol.empty() ? log_foliation(ctx) : Fol(r, fol);
    return inv_at(ctx, rees_from_ideal(I), F);
}

}  // namespace

TEST_CASE("maximal contact") {
    auto r = ring({"x", "y"});
    auto Fx = Fol(r, {"d/dx"});
    auto mc = find_maximal_contact(Fx, Rees(r, {{"x^5 + y", 1}}), 5);
    CHECK(mc.x1 == P(r, "x"));
    CHECK(mc.d == D(r, "d/dx"));
    CHECK(find_maximal_contact(Fx, Rees(r, {{"x", 1}}), 1).x1 == P(r, "x"));
    auto mc2 = find_maximal_contact(full_foliation(r), Rees(r, {{"x^2 + y^3", 1}}), 2);
    CHECK(mc2.x1 == P(r, "x"));
}

TEST_CASE("invariant of x^5 + y along d/dx") {
    auto r = ring({"x", "y"});
    auto res = run(r, {"x^5 + y"}, {"d/dx"});
    CHECK(res.inv.str() == "(5, inf+1)");
    REQUIRE(res.center.transverse.size() == 1);
    CHECK(res.center.transverse[0].var == "x");
    CHECK(res.center.transverse[0].weight == 5);
    REQUIRE(res.center.invariant.size() == 1);
    CHECK(res.center.invariant[0].var == "y");
    CHECK(res.center.invariant[0].weight == 1);
    CHECK(res.verdict.admissible);
}

TEST_CASE("small invariants") {
    auto r = ring({"x", "y"});
    auto y = run(r, {"y"}, {"d/dx"});
    CHECK(y.inv.str() == "(inf+1)");
    REQUIRE(y.center.invariant.size() == 1);
    CHECK(y.center.invariant[0].var == "y");
    CHECK(run(r, {"1 + x"}, {"d/dx"}).inv.str() == "(0)");
    CHECK(run(r, {"x^2 - y^3"}, {"d/dx", "d/dy"}).inv.str() == "(2, 3)");
    CHECK(run(r, {"x*y"}, {}, {true, true}).inv.str() == "(inf+inf+2, inf+inf+2)");
}

TEST_CASE("coordinate subspaces are transverse") {
    auto r = ring({"x", "y", "z"});
    PointedInstance inst{Context(r), ReesAlgebra(r), Fol(r, {"d/dx", "d/dy"})};
    CHECK(check_transverse(inst, {P(r, "x")}));
    CHECK_FALSE(check_transverse(inst, {P(r, "z")}));
    CHECK(check_transverse(inst, {P(r, "x"), P(r, "y")}));
    CHECK(minimalize({P(r, "x"), P(r, "x*y"), P(r, "y")}).size() == 2);
}

TEST_CASE("first entry is the F-order and the center is certified") {
    std::mt19937 rng(8);
    auto r = ring({"x", "y"});
    std::vector<Foliation> cat{Fol(r, {"d/dx"}), Fol(r, {"d/dx", "d/dy"}), Fol(r, {"d/dx + y*d/dy"})};
    int n = 0;
    for (int it = 0; it < 30; ++it) {
        Jet f = random_poly(rng, r, 4, 4, false);
        if (f.is_zero()) continue;
        const Foliation& F = cat[it % cat.size()];
        ReesAlgebra R = rees_from_ideal({f});
        InvResult res = inv_at(Context(r), R, F);
        ExtRational a = f_order_rees(F, R);
        if (!a.infinite) {
            REQUIRE(res.inv.size() >= 1);
            CHECK(res.inv.entries[0].tier == 0);
            CHECK(res.inv.entries[0].offset == a.value);
        }
        CHECK(is_admissible(R, res.center).admissible);
        CHECK(compare_inv(center_inv(res.center), res.inv) == 0);
        ++n;
    }
    CHECK(n > 20);
}

TEST_CASE("invariant does not depend on generator order") {
    auto r = ring({"x", "z"});
    auto F = Fol(r, {"d/dx", "d/dz"});
    auto a = inv_at(Context(r), Rees(r, {{"x^2 + z^2", 1}, {"x*z", 1}}), F);
    auto b = inv_at(Context(r), Rees(r, {{"x*z", 1}, {"x^2 + z^2", 1}}), F);
    CHECK(a.inv == b.inv);
}

TEST_CASE("monotonicity and invariant inputs") {
    auto r = ring({"x", "y"});
    auto Fx = Fol(r, {"d/dx"});
    auto Fxy = Fol(r, {"d/dx", "d/dy"});
    std::mt19937 rng(13);
    for (int it = 0; it < 15; ++it) {
        Jet f = random_poly(rng, r, 3, 3, false), g = random_poly(rng, r, 3, 3, false);
        if (f.is_zero() || g.is_zero()) continue;
        auto small = inv_at(Context(r), rees_from_ideal({f}), Fx).inv;
        auto big = inv_at(Context(r), rees_from_ideal({f, g}), Fx).inv;
        CHECK(compare_inv(small, big) >= 0);
        auto wider = inv_at(Context(r), rees_from_ideal({f}), Fxy).inv;
        CHECK(compare_inv(small, wider) >= 0);
    }
    auto res = inv_at(Context(r), Rees(r, {{"y^2", 1}}), Fx);
    CHECK(res.center.transverse.empty());
}

TEST_CASE("adjoining a free variable") {
    auto r = ring({"x", "y"});
    auto r3 = ring({"x", "y", "t"});
    for (auto f : {"x^5 + y", "x^2 - y^3", "y", "x*y + y^3"}) {
        auto a = run(r, {f}, {"d/dx"});
        auto b = run(r3, {f}, {"d/dx"});
        CHECK(a.inv == b.inv);
    }
}
