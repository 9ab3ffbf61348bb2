#include "doctest.h"

#include "support.hpp"

#include "opacity/corpus.hpp"
#include "opacity/enforcer.hpp"
#include "opacity/errors.hpp"
#include "opacity/io.hpp"

#include <algorithm>
#include <deque>
#include <set>

using namespace opacity;
using testing::make;
using testing::word;

namespace {

bool has_arc(const PetriNet& n, const std::string& from, const std::string& to)
{
    return n.weight(from, to) > 0;
}

std::size_t all_secret_count(const Sog& sog)
{
    return static_cast<std::size_t>(
        std::count_if(sog.aggregates().begin(), sog.aggregates().end(), [](auto& a) { return a.all_secret; }));
}

// Observable languages agree iff every jointly reachable pair of SOG
// aggregates enables the same observable event names.
bool same_observable_language(const Lts& a, const Sog& sa, const Lts& b, const Sog& sb)
{
    std::set<std::pair<AggregateId, AggregateId>> seen{{0, 0}};
    std::deque<std::pair<AggregateId, AggregateId>> queue{{0, 0}};
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        auto ex = sa.out_edges(x);
        auto ey = sb.out_edges(y);
        if (ex.size() != ey.size())
            return false;
        for (const auto& e : ex) {
            auto f = b.find_event(a.event_name(e.event));
            if (!f)
                return false;
            auto t = sb.successor(y, *f);
            if (!t)
                return false;
            if (seen.emplace(e.target, *t).second)
                queue.emplace_back(e.target, *t);
        }
    }
    return true;
}

} // namespace

TEST_CASE("minimal super-language")
{
    auto corpus = load_corpus();
    SUBCASE("CPr")
    {
        auto g = build_reachability_graph(corpus.at("cpr"));
        auto c = check_simple(g.lts, g.secret);
        auto add = compute_min_superlanguage(g.lts, g.secret, c.sog, c.verdict.counterexamples);
        std::set<Word> got(add.traces.begin(), add.traces.end());
        CHECK(got == std::set<Word>{word(g.lts, {"T7", "T13", "T16", "T18"}), word(g.lts, {"T7", "T13", "T19", "T21"})});
        // only secret runs explain each witness
        for (const auto& w : add.traces) {
            auto est = observationally_equivalent_runs(g.lts, w);
            CHECK_FALSE(est.empty());
            CHECK(std::all_of(est.begin(), est.end(), [&](auto q) { return g.secret.contains(q); }));
        }
    }
    SUBCASE("already opaque")
    {
        auto g = build_reachability_graph(corpus.at("fog"));
        auto c = check_simple(g.lts, g.secret);
        CHECK(compute_min_superlanguage(g.lts, g.secret, c.sog, c.verdict.counterexamples).empty());
    }
    SUBCASE("no secret")
    {
        auto k = make({"q0", "q1"}, {"o"}, {{"q0", "o", "q1"}}, {});
        auto c = check_simple(k.lts, k.secret);
        CHECK(compute_min_superlanguage(k.lts, k.secret, c.sog, c.verdict.counterexamples).empty());
    }
}

TEST_CASE("CPr enforcement")
{
    auto model = load_corpus().at("cpr");
    auto r = opacify(model);
    const auto& p = r.patch;
    CHECK(p.new_transitions.size() == 2);
    CHECK(p.new_states.size() == 2);
    CHECK_FALSE(p.new_places.empty());
    CHECK(r.verdict_after.opaque);
    for (const auto& t : p.new_transitions) {
        REQUIRE(r.model.net.has_transition(t));
        CHECK_FALSE(r.model.net.transition(t).observable);
        CHECK_FALSE(model.net.has_transition(t));
    }
    for (const auto& pl : p.new_places)
        CHECK_FALSE(model.net.has_place(pl));

    REQUIRE(p.steps.size() == 2);
    int sink_repairs = 0;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const auto& s = p.steps[i];
        if (!s.sink_repair)
            continue;
        ++sink_repairs;
        CHECK(s.host_place == "Po");
        // t -> p_new -> t_new -> Po with (t, Po) gone
        const auto& t_new = p.new_transitions[i];
        CHECK(has_arc(r.model.net, t_new, "Po"));
        bool rewired = false;
        for (const auto& removed : p.removed_arcs) {
            if (removed.to != "Po")
                continue;
            CHECK_FALSE(has_arc(r.model.net, removed.from, "Po"));
            for (const auto& p_new : p.new_places)
                rewired = rewired || (has_arc(r.model.net, removed.from, p_new) && has_arc(r.model.net, p_new, t_new));
        }
        CHECK(rewired);
    }
    CHECK(sink_repairs >= 1);
    CHECK(validate_wf_structure(r.model.owf()).empty());

    // incidence updates agree with the patched arcs
    auto c = incidence_matrix(r.model.net);
    auto c0 = incidence_matrix(model.net);
    for (const auto& u : p.incidence_updates) {
        CHECK(c.at(u.place, u.transition) == u.value);
        bool old_place = model.net.has_place(u.place), old_t = model.net.has_transition(u.transition);
        if (old_place && old_t)
            CHECK(c0.at(u.place, u.transition) != u.value);
    }
}

TEST_CASE("the directly patched LTS sits inside the rebuilt graph")
{
    for (auto name : {"cpr", "app"}) {
        INFO(name);
        auto r = opacify(load_corpus().at(name));
        const auto& d = r.direct_lts;
        for (StateId q = 0; q < d.state_count(); ++q) {
            auto from = r.graph.lts.find_state(d.state_name(q));
            REQUIRE(from);
            for (const auto& e : d.successors(q)) {
                auto ev = r.graph.lts.find_event(d.event_name(e.event));
                auto to = r.graph.lts.find_state(d.state_name(e.target));
                REQUIRE(ev);
                REQUIRE(to);
                auto succ = r.graph.lts.successors(*from);
                CHECK(std::find(succ.begin(), succ.end(), Edge{*ev, *to}) != succ.end());
            }
        }
        CHECK(check_simple(d, r.direct_secret).verdict.opaque);
        for (const auto& s : r.patch.new_states)
            CHECK_FALSE(r.graph.secret.contains(*r.graph.lts.find_state(s.state)));
    }
}

TEST_CASE("already opaque input yields the identity patch")
{
    auto model = load_corpus().at("fog");
    auto r = opacify(model);
    CHECK(r.patch.empty());
    CHECK(r.patch.added_arcs.empty());
    CHECK(r.patch.removed_arcs.empty());
    CHECK(r.model == model);
    CHECK(dump(to_json(r.model)) == dump(to_json(model)));
}

TEST_CASE("two-state LTS")
{
    auto c = make({"q0", "q1"}, {"o"}, {{"q0", "o", "q1"}}, {"q1"});
    auto chk = check_simple(c.lts, c.secret);
    REQUIRE_FALSE(chk.verdict.opaque);
    auto r = opacify(c.lts, c.secret, chk);
    REQUIRE(r.patch.new_states.size() == 1);
    REQUIRE(r.patch.new_transitions.size() == 1);
    auto q_new = r.lts.find_state(r.patch.new_states[0].state);
    REQUIRE(q_new);
    auto t_new = r.lts.find_event(r.patch.new_transitions[0]);
    REQUIRE(t_new);
    CHECK_FALSE(r.lts.observable(*t_new));
    CHECK(r.lts.successors(1)[0] == Edge{*t_new, *q_new});
    CHECK(observationally_equivalent_runs(r.lts, word(r.lts, {"o"})) == StateSet(3, {1, *q_new}));
    CHECK(r.verdict_after.opaque);
    CHECK(check_simple(r.lts, r.secret).verdict.opaque);
}

TEST_CASE("idempotence, frugality and reversibility on the corpus")
{
    for (auto name : corpus_names) {
        INFO(name);
        auto model = load_corpus().find(name)->second;
        auto g = build_reachability_graph(model);
        auto chk = check_simple(g.lts, g.secret);
        auto r = opacify(model, g, chk);
        CHECK(r.verdict_after.opaque);
        CHECK(r.patch.new_transitions.size() == all_secret_count(chk.sog));

        auto again = opacify(r.model);
        CHECK(again.patch.empty());
        CHECK(again.model == r.model);

        auto back = revert_patch(r.model, r.patch);
        CHECK(same_structure(back, model));

        CHECK(same_observable_language(g.lts, chk.sog, r.graph.lts, r.sog));
    }
}

TEST_CASE("original firing sequences stay firable")
{
    for (auto name : {"cpr", "app"}) {
        INFO(name);
        auto model = load_corpus().find(name)->second;
        auto g = build_reachability_graph(model);
        auto r = opacify(model);
        auto patched = r.model.behavior_net();
        enumerate_runs(g.lts, 12, [&](const Word& w, StateId) {
            Marking m = patched.initial_marking();
            for (auto e : w) {
                const auto& t = g.lts.event_name(e);
                REQUIRE(is_enabled(patched, m, t));
                m = fire(patched, m, t);
            }
            return true;
        });
    }
}

TEST_CASE("counterexample not matching a witness")
{
    auto model = load_corpus().at("cpr");
    auto g = build_reachability_graph(model);
    auto chk = check_simple(g.lts, g.secret);
    chk.verdict.counterexamples[0].trace = word(g.lts, {"T7", "T13"});
    CHECK_THROWS_AS(opacify(model, g, chk), EnforcementError);
    try {
        opacify(model, g, chk);
    } catch (const EnforcementError& e) {
        CHECK(std::string(e.what()).find("T7 T13") != std::string::npos);
    }
}

TEST_CASE("owf_final_place_repair")
{
    auto cpr = load_corpus().at("cpr").owf();
    auto r = owf_final_place_repair(cpr, "T21", "T22", "P17x");
    CHECK(r.new_place == "P17x");
    CHECK(r.removed == std::vector<Arc>{{"T21", "Po", 1}});
    CHECK(r.added == std::vector<Arc>{{"T21", "P17x", 1}, {"P17x", "T22", 1}, {"T22", "Po", 1}});

    CHECK_THROWS_AS(owf_final_place_repair(cpr, "T1", "T22", "x"), UsageError);

    OwfNet cyclic(PetriNet({"a", "b"}, {{"t", "t", true}, {"s", "s", true}}, {{"a", "t"}, {"t", "b"}, {"b", "s"}, {"s", "a"}},
                           Marking{{"a", 1}}),
                  {}, Marking{});
    CHECK_THROWS_AS(owf_final_place_repair(cyclic, "t", "x", "y"), ModelError);
}

TEST_CASE("plain nets use the p -> t_new -> p_new path")
{
    PetriNet n({"i", "s"}, {{"go", "go", true}}, {{"i", "go"}, {"go", "s"}}, Marking{{"i", 1}});
    NetModel model{n, std::nullopt, std::nullopt, {SecretMarking{Marking{{"s", 1}}, true, {}}}};
    auto r = opacify(model);
    REQUIRE(r.patch.new_transitions.size() == 1);
    REQUIRE(r.patch.new_places.size() == 1);
    const auto& t = r.patch.new_transitions[0];
    const auto& p = r.patch.new_places[0];
    CHECK(r.patch.removed_arcs.empty());
    CHECK(r.patch.added_arcs == std::vector<Arc>{{"s", t, 1}, {t, p, 1}});
    CHECK_FALSE(r.patch.steps[0].sink_repair);
    CHECK(r.verdict_after.opaque);
    CHECK(t == "go__op1");
    CHECK(p == "s__op1");
}
