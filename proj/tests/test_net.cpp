#include "doctest.h"

#include "opacity/corpus.hpp"
#include "opacity/errors.hpp"
#include "opacity/net.hpp"
#include "opacity/reachability.hpp"

#include <algorithm>

using namespace opacity;

namespace {

PetriNet chain()
{
    return PetriNet({"p", "q"}, {{"t", "t", true}}, {{"p", "t"}, {"t", "q"}}, Marking{{"p", 1}});
}

std::vector<std::string> ids(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

} // namespace

TEST_CASE("marking drops zero counts")
{
    Marking a{{"p", 1}, {"q", 0}};
    Marking b{{"p", 1}};
    CHECK(a == b);
    CHECK(a.support_size() == 1);
    a.set("p", 0);
    CHECK(a.empty());
}

TEST_CASE("enabled")
{
    PetriNet single({"p"}, {{"t", "t", true}}, {{"p", "t"}}, Marking{});
    CHECK(enabled(single, Marking{{"p", 1}}) == ids({"t"}));
    CHECK(enabled(single, Marking{{"p", 0}}).empty());

    PetriNet conj({"p1", "p2"}, {{"t", "t", true}}, {{"p1", "t"}, {"p2", "t"}}, Marking{});
    CHECK(enabled(conj, Marking{{"p1", 1}}).empty());
    CHECK(enabled(conj, Marking{{"p1", 1}, {"p2", 1}}) == ids({"t"}));

    CHECK_THROWS_AS(enabled(single, Marking{{"zz", 1}}), ModelError);
}

TEST_CASE("fire")
{
    CHECK(fire(chain(), Marking{{"p", 1}}, "t") == Marking{{"q", 1}});

    PetriNet loop({"p"}, {{"t", "t", true}}, {{"p", "t"}, {"t", "p"}}, Marking{{"p", 1}});
    CHECK(fire(loop, Marking{{"p", 1}}, "t") == Marking{{"p", 1}});

    PetriNet weighted({"p", "q"}, {{"t", "t", true}}, {{"p", "t", 2}, {"t", "q", 3}}, Marking{});
    CHECK(fire(weighted, Marking{{"p", 2}}, "t") == Marking{{"q", 3}});

    CHECK_THROWS_AS(fire(chain(), Marking{}, "t"), UsageError);
    CHECK_THROWS_AS(fire(weighted, Marking{{"p", 1}}, "t"), UsageError);
}

TEST_CASE("net construction rejects malformed structure")
{
    CHECK_THROWS_AS(PetriNet({"p"}, {{"t", "t", true}}, {{"p", "x"}}, Marking{}), ModelError);
    CHECK_THROWS_AS(PetriNet({"p", "q"}, {{"t", "t", true}}, {{"p", "q"}}, Marking{}), ModelError);
    CHECK_THROWS_AS(PetriNet({"p"}, {{"p", "p", true}}, {}, Marking{}), ModelError);
    CHECK_THROWS_AS(PetriNet({"p"}, {{"t", "t", true}}, {{"p", "t", 0}}, Marking{}), ModelError);
    CHECK_THROWS_AS(PetriNet({"p"}, {{"t", "t", true}}, {{"p", "t"}, {"p", "t"}}, Marking{}), ModelError);
    CHECK_THROWS_AS(PetriNet({"p"}, {}, {}, Marking{{"x", 1}}), ModelError);
}

TEST_CASE("incidence matrix")
{
    PetriNet consume({"p"}, {{"t", "t", true}}, {{"p", "t"}}, Marking{});
    CHECK(incidence_matrix(consume).at("p", "t") == -1);

    PetriNet loop({"p"}, {{"t", "t", true}}, {{"p", "t"}, {"t", "p"}}, Marking{});
    CHECK(incidence_matrix(loop).at("p", "t") == 0);
    CHECK(incidence_matrix(loop).nonzero().empty());

    PetriNet produce({"q"}, {{"t", "t", true}}, {{"t", "q", 3}}, Marking{});
    CHECK(incidence_matrix(produce).at("q", "t") == 3);
}

TEST_CASE("reachability graph of small nets")
{
    SUBCASE("chain")
    {
        auto g = build_reachability_graph(chain(), {});
        CHECK(g.lts.state_count() == 2);
        CHECK(g.lts.edge_count() == 1);
        CHECK(g.lts.event_name(g.lts.successors(0)[0].event) == "t");
        CHECK(g.secret.empty());
    }
    SUBCASE("self loop terminates")
    {
        PetriNet loop({"p"}, {{"t", "t", true}}, {{"p", "t"}, {"t", "p"}}, Marking{{"p", 1}});
        auto g = build_reachability_graph(loop, {});
        CHECK(g.lts.state_count() == 1);
        REQUIRE(g.lts.successors(0).size() == 1);
        CHECK(g.lts.successors(0)[0].target == 0);
    }
    SUBCASE("unbounded net hits the bound")
    {
        PetriNet pump({"p", "q"}, {{"t", "t", true}}, {{"p", "t"}, {"t", "p"}, {"t", "q"}}, Marking{{"p", 1}});
        CHECK_THROWS_AS(build_reachability_graph(pump, {}), BoundError);
        try {
            build_reachability_graph(pump, {}, ExplorationLimits{50, 1000});
        } catch (const BoundError& e) {
            CHECK(std::string(e.what()).find("possibly unbounded net") != std::string::npos);
            CHECK(std::string(e.what()).find("50") != std::string::npos);
        }
    }
    SUBCASE("unknown place in a secret")
    {
        std::vector<SecretMarking> s{{Marking{{"zz", 1}}, true, {}}};
        CHECK_THROWS_AS(build_reachability_graph(chain(), s), ModelError);
    }
    SUBCASE("exact and predicate secrets")
    {
        PetriNet par({"a", "b", "c"}, {{"t", "t", true}}, {{"a", "t"}, {"t", "c"}}, Marking{{"a", 1}, {"b", 1}});
        std::vector<SecretMarking> exact{{Marking{{"c", 1}}, true, {}}};
        CHECK(build_reachability_graph(par, exact).secret.empty());
        std::vector<SecretMarking> pred{{Marking{{"c", 1}}, false, {}}};
        CHECK(build_reachability_graph(par, pred).secret.states() == std::vector<StateId>{1});
        std::vector<SecretMarking> zero{{Marking{}, false, {"c"}}};
        CHECK(build_reachability_graph(par, zero).secret.states() == std::vector<StateId>{0});
    }
}

TEST_CASE("reachability graph is canonical and BFS-numbered")
{
    auto corpus = load_corpus();
    for (const auto& [name, model] : corpus) {
        auto a = build_reachability_graph(model);
        auto b = build_reachability_graph(model);
        CHECK(a.lts == b.lts);
        CHECK(a.markings == b.markings);
        CHECK(a.secret == b.secret);
        CHECK(a.lts.state_name(0) == "S0");
        CHECK(a.markings[0] == model.net.initial_marking());
    }
}

TEST_CASE("corpus CPr secret states")
{
    auto model = load_corpus().at("cpr");
    auto g = build_reachability_graph(model);
    CHECK(g.secret.states().size() == 8);
    for (auto q : g.secret.states()) {
        bool listed = std::any_of(model.secrets.begin(), model.secrets.end(),
                                  [&](const SecretMarking& s) { return s.matches(g.markings[q]); });
        CHECK(listed);
    }
}

TEST_CASE("state equation on corpus nets")
{
    for (const auto& [name, model] : load_corpus()) {
        auto net = model.behavior_net();
        auto c = incidence_matrix(net);
        auto g = build_reachability_graph(model);
        // Every BFS-tree path: m = m0 + C * counts.
        std::vector<std::map<std::string, std::uint32_t>> counts(g.lts.state_count());
        std::vector<bool> done(g.lts.state_count(), false);
        done[0] = true;
        std::vector<StateId> order{0};
        for (std::size_t i = 0; i < order.size(); ++i) {
            auto q = order[i];
            for (const auto& e : g.lts.successors(q)) {
                const auto& t = g.lts.event_name(e.event);
                auto next = fire(net, g.markings[q], t);
                CHECK(next == g.markings[e.target]);
                if (!done[e.target]) {
                    done[e.target] = true;
                    counts[e.target] = counts[q];
                    ++counts[e.target][t];
                    order.push_back(e.target);
                }
            }
        }
        for (StateId q = 0; q < g.lts.state_count(); ++q)
            CHECK(c.apply(net.initial_marking(), counts[q]) == g.markings[q]);
    }
}

TEST_CASE("firing is deterministic")
{
    auto model = load_corpus().at("fog");
    auto net = model.behavior_net();
    for (const auto& t : enabled(net, net.initial_marking()))
        CHECK(fire(net, net.initial_marking(), t) == fire(net, net.initial_marking(), t));
}

TEST_CASE("validate_wf_structure")
{
    SUBCASE("minimal WF-net")
    {
        OwfNet n(PetriNet({"i", "o"}, {{"t", "t", true}}, {{"i", "t"}, {"t", "o"}}, Marking{{"i", 1}}), {},
                 Marking{{"o", 1}});
        CHECK(validate_wf_structure(n).empty());
        CHECK(n.sink_place() == "o");
    }
    SUBCASE("isolated place")
    {
        OwfNet n(PetriNet({"i", "o", "x"}, {{"t", "t", true}}, {{"i", "t"}, {"t", "o"}}, Marking{{"i", 1}}), {},
                 Marking{{"o", 1}});
        auto d = validate_wf_structure(n);
        REQUIRE_FALSE(d.empty());
        bool names_x = std::any_of(d.begin(), d.end(), [](const Diagnostic& x) { return x.element.find("x") != std::string::npos; });
        CHECK(names_x);
    }
    SUBCASE("two sinks")
    {
        OwfNet n(PetriNet({"i", "o1", "o2"}, {{"t", "t", true}}, {{"i", "t"}, {"t", "o1"}, {"t", "o2"}},
                          Marking{{"i", 1}}),
                 {}, Marking{});
        auto d = validate_wf_structure(n);
        bool multi = std::any_of(d.begin(), d.end(),
                                 [](const Diagnostic& x) { return x.kind == Diagnostic::Kind::multiple_sinks; });
        CHECK(multi);
        CHECK_FALSE(n.sink_place());
    }
    SUBCASE("interface places are excluded")
    {
        OwfNet n(PetriNet({"i", "o", "in"}, {{"t", "t", true}}, {{"i", "t"}, {"in", "t"}, {"t", "o"}},
                          Marking{{"i", 1}}),
                 Interface{{"in"}, {}}, Marking{{"o", 1}});
        CHECK(validate_wf_structure(n).empty());
        CHECK(n.inner_net().places().size() == 2);
    }
    SUBCASE("corpus nets")
    {
        for (const auto& [name, model] : load_corpus()) {
            INFO(name);
            CHECK(validate_wf_structure(model.owf()).empty());
        }
    }
}

TEST_CASE("interface must be disjoint and inside P")
{
    PetriNet n({"i", "o"}, {{"t", "t", true}}, {{"i", "t"}, {"t", "o"}}, Marking{{"i", 1}});
    CHECK_THROWS_AS(OwfNet(n, Interface{{"zz"}, {}}, Marking{}), ModelError);
    CHECK_THROWS_AS(OwfNet(n, Interface{{"o"}, {"o"}}, Marking{}), ModelError);
}
