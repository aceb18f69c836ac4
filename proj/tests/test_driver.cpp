#include <doctest.h>

#include "folres/driver.hpp"
#include "helpers.hpp"

using namespace th;

namespace {

Center center(const RingPtr& r, std::vector<CenterEntry> t) {
    Center C(r);
    C.transverse = std::move(t);
    return C;
}

std::string example(const std::string& name) { return std::string(FOLRES_SOURCE_DIR) + "/examples/" + name; }

}  // namespace

TEST_CASE("instance files") {
    Instance a = parse_instance("ring x y\ndivisor x\ntruncation 20\nrees x^2@1/2; y@1\nfoliation x*d/dx\npoint 0 1\n");
    CHECK(a.ring()->N == 20);
    CHECK(a.ctx.is_divisor(0));
    REQUIRE(a.R.gens.size() == 2);
    CHECK(a.R.gens[0].deg == Rational(1, 2));
    CHECK(a.points.size() == 1);
    CHECK(parse_instance("ring x y\nideal x\nfoliation D\n", 30).ring()->N == 30);
    CHECK(parse_instance("ring x y\ndivisor y\nideal x\n").F.gens[1] == D(parse_instance("ring x y\nideal x\n").ring(), "y*d/dy"));
    try {
        parse_instance("ring x y\nideal x + \nfoliation D\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_instance("ring x\nbogus 1\n"), ParseError);
    CHECK_THROWS_AS(parse_instance("ideal x\n"), ParseError);
    CHECK_THROWS_AS(load_instance("/nonexistent.fol"), DomainError);
}

TEST_CASE("principalization runs") {
    Instance a = parse_instance("ring x y\nideal x^5 + y\nfoliation d/dx\n");
    RunResult r = principalize(a);
    REQUIRE(r.steps.size() == 1);
    CHECK(r.steps[0].before.str() == "(5, inf+1)");
    CHECK(r.ok());
    bool x_origin = false;
    for (const auto& s : r.steps[0].samples)
        if (s.chart == "x" && s.label == "origin") x_origin = compare_inv(s.after, r.steps[0].before) < 0;
    CHECK(x_origin);
    RunConfig strict;
    strict.mode = TransformMode::Strict;
    RunResult rs = principalize(a, strict);
    CHECK(rs.ok());
    for (const auto& f : rs.finished) CHECK(f.find("trivial") != std::string::npos);

    Instance b = parse_instance("ring x y\nideal x\nfoliation D\n");
    RunResult rb = principalize(b);
    REQUIRE(rb.steps.size() == 1);
    CHECK(rb.steps[0].center.transverse.size() == 1);
    CHECK(rb.finished.size() == 1);

    Instance c = parse_instance("ring x y\ndivisor x y\nideal x*y\nfoliation Dlog\n");
    RunResult rc = principalize(c);
    CHECK(rc.steps.empty());
    REQUIRE(rc.finished.size() == 1);
    CHECK(rc.finished[0].find("principal monomial") != std::string::npos);
}

TEST_CASE("budgets and stop patterns") {
    Instance a = parse_instance("ring x y z\nideal x^2 + y^2*z + z^3\nfoliation d/dx; d/dy\n");
    RunConfig one;
    one.max_steps = 1;
    CHECK_THROWS_AS(principalize(a, one), BudgetError);
    RunConfig stop;
    stop.stop_pattern = parse_inv("(2, inf+1)");
    RunResult r = principalize(a, stop);
    CHECK(r.steps.empty());
    CHECK_THROWS_AS(principalize(parse_instance("ring x y z\nideal x\nfoliation d/dx; d/dy + x*d/dz\n")), DomainError);
}

TEST_CASE("runs are deterministic") {
    Instance a = parse_instance("ring x y z\nideal x^2 + y^2*z + z^3\nfoliation d/dx; d/dy\n");
    CHECK(principalize(a).json() == principalize(a).json());
    CHECK(principalize(a).str() == principalize(a).str());
}

TEST_CASE("tracking points through charts") {
    auto r = ring({"x", "y"});
    Cobordism B = build_cobordant(center(r, {{"x", 1}, {"y", 1}}));
    auto o = track_point(B, {0, 0});
    REQUIRE(o.points.size() == 2);
    CHECK(o.points[0].chart == "x");
    CHECK(o.points[0].coords == std::vector<Rational>{0, 0});
    CHECK(o.points[1].chart == "y");
    auto p = track_point(B, {0, 1});
    REQUIRE(p.points.size() == 1);
    CHECK(p.points[0].chart == "y");
    CHECK(p.points[0].coords == std::vector<Rational>{0, 1});  // x~ = 0, s~ = 1
    Cobordism Bx = build_cobordant(center(r, {{"x", 1}}));
    auto q = track_point(Bx, {0, 5});
    REQUIRE(q.points.size() == 1);
    CHECK(q.points[0].coords == std::vector<Rational>{0, 5});
    Cobordism B2 = build_cobordant(center(r, {{"x", 1}, {"y", Rational(1, 2)}}));
    auto irr = track_point(B2, etale_chart(B2, "y"), {0, 2});
    CHECK(irr.points.empty());
    CHECK(irr.skipped.size() == 1);
}

TEST_CASE("shipped examples") {
    Instance e = load_instance(example("ex155.fol"));
    CHECK(inv_at(e.at_origin()).inv.str() == "(5, inf+1)");
    Instance u = load_instance(example("unit.fol"));
    CHECK(f_order_rees(u.F, u.R) == ExtRational::fin(0));
    Instance w = load_instance(example("ex510.fol"));
    std::string rep = blowup_report(w, std::string("x"), TransformMode::Controlled);
    CHECK(rep.find("x -> s~^35") != std::string::npos);
    CHECK(rep.find("controlled s~^7*z~^21 + z~^20 + y~^7 + 1") != std::string::npos);
}
