#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "folres/driver.hpp"
#include "folres/instance.hpp"
#include "folres/invariant.hpp"
#include "folres/monres.hpp"

using namespace folres;

namespace {

struct Options {
    std::string file;
    std::string mode = "controlled";
    int max_steps = 8;
    int truncation = 0;
    bool json = false;
    std::string chart;
    std::string stop;
};

TransformMode parse_mode(const std::string& m) {
    if (m == "controlled") return TransformMode::Controlled;
    if (m == "strict") return TransformMode::Strict;
    throw DomainError("mode must be 'controlled' or 'strict'");
}

nlohmann::ordered_json center_json(const Center& C) {
    nlohmann::ordered_json c;
    auto tier = [](const std::vector<CenterEntry>& es) {
        auto a = nlohmann::ordered_json::array();
        for (const auto& e : es) a.push_back({{"var", e.var}, {"weight", to_string(e.weight)}});
        return a;
    };
    c["transverse"] = tier(C.transverse);
    c["invariant"] = tier(C.invariant);
    c["divisorial"] = tier(C.divisorial);
    return c;
}

int run(const std::string& cmd, const Options& o) {
    Instance inst = load_instance(o.file, o.truncation);
    TransformMode mode = parse_mode(o.mode);
    if (cmd == "order") {
        ExtRational a = f_order_rees(inst.F, inst.R);
        if (o.json)
            std::cout << nlohmann::ordered_json{{"order", a.str()}}.dump(2) << "\n";
        else
            std::cout << a.str() << "\n";
    } else if (cmd == "inv" || cmd == "center") {
        InvResult r = inv_at(inst.at_origin());
        if (o.json) {
            nlohmann::ordered_json j;
            j["inv"] = r.inv.str();
            j["center"] = center_json(r.center);
            j["precision"] = r.verdict.precision;
            if (cmd == "inv") j["trace"] = r.trace;
            std::cout << j.dump(2) << "\n";
        } else {
            if (cmd == "inv") std::cout << r.inv.str() << "\n";
            std::cout << to_string(r.center);
            if (cmd == "inv")
                for (const auto& t : r.trace) std::cout << t << "\n";
        }
        for (const auto& p : inst.points) {
            InvResult q = inv_at(translate(inst.at_origin(), p));
            std::cout << "at";
            for (const auto& c : p) std::cout << " " << to_string(c);
            std::cout << ": " << q.inv.str() << "\n";
        }
    } else if (cmd == "blowup") {
        std::optional<std::string> chart;
        if (!o.chart.empty()) chart = o.chart;
        std::cout << blowup_report(inst, chart, mode);
    } else if (cmd == "principalize") {
        RunConfig cfg;
        cfg.max_steps = o.max_steps;
        cfg.mode = mode;
        if (!o.stop.empty()) cfg.stop_pattern = parse_inv(o.stop);
        RunResult r = principalize(inst, cfg);
        std::cout << (o.json ? r.json() + "\n" : r.str());
        if (!r.ok()) return 1;
    } else if (cmd == "monres") {
        if (!inst.monomial) throw DomainError("instance has no monomial line");
        MonresReport r = monomial_resolve(*inst.monomial, o.max_steps);
        std::cout << r.str();
        if (!r.ok) return 1;
    } else if (cmd == "check-transverse") {
        IdealGens Y;
        for (const auto& g : inst.R.gens) Y.push_back(g.f);
        bool t = check_transverse(inst.at_origin(), Y);
        std::cout << (t ? "transverse" : "not transverse") << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"foliated principalization toolkit"};
    app.require_subcommand(1);
    Options o;
    const char* cmds[][2] = {{"order", "F-order of the instance's ideal"},
                             {"inv", "invariant, center and recursion trace at the origin"},
                             {"center", "maximal admissible center at the origin"},
                             {"blowup", "cobordant blow-up of the center"},
                             {"principalize", "run the principalization loop"},
                             {"monres", "log-smoothing loop for a monomial presentation"},
                             {"check-transverse", "all-ones test for the instance's ideal"}};
    for (auto& c : cmds) {
        auto* sub = app.add_subcommand(c[0], c[1]);
        sub->add_option("file", o.file, "instance file")->required();
        sub->add_option("--mode", o.mode, "controlled|strict")->check(CLI::IsMember({"controlled", "strict"}));
        sub->add_option("--max-steps", o.max_steps, "blow-up budget")->check(CLI::PositiveNumber);
        sub->add_option("--truncation", o.truncation, "jet truncation order")->check(CLI::Range(1, 250));
        sub->add_flag("--json", o.json, "machine-readable output");
        sub->add_option("--chart", o.chart, "chart variable for blowup");
        sub->add_option("--stop", o.stop, "stop pattern for principalize, e.g. (1, inf+1)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    std::string cmd = app.get_subcommands().front()->get_name();
    try {
        return run(cmd, o);
    } catch (const BudgetError& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
