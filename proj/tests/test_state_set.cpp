#include "doctest.h"

#include "support.hpp"

#include "opacity/errors.hpp"
#include "opacity/state_set.hpp"

#include <random>

using namespace opacity;
using testing::make;

TEST_CASE("canonical representation")
{
    StateSet a(5, {3, 1, 1, 4});
    StateSet b(5, {4, 3, 1});
    CHECK(a == b);
    CHECK(a.hash() == b.hash());
    CHECK(std::hash<StateSet>{}(a) == std::hash<StateSet>{}(b));
    CHECK(a.size() == 3);
    CHECK_FALSE(StateSet(5, {1}) == StateSet(6, {1}));
    CHECK_THROWS_AS(StateSet(3, {3}), UsageError);
}

TEST_CASE("saturate")
{
    SUBCASE("already closed")
    {
        auto c = make({"q"}, {"a"}, {{"q", "a", "q"}}, {});
        CHECK(saturate(c.lts, StateSet(1, {0})) == StateSet(1, {0}));
    }
    SUBCASE("transitive closure")
    {
        auto c = make({"q0", "q1", "q2"}, {"~u"}, {{"q0", "u", "q1"}, {"q1", "u", "q2"}}, {});
        CHECK(saturate(c.lts, StateSet(3, {0})) == StateSet(3, {0, 1, 2}));
    }
    SUBCASE("cycle")
    {
        auto c = make({"q0", "q1"}, {"~u"}, {{"q0", "u", "q1"}, {"q1", "u", "q0"}}, {});
        CHECK(saturate(c.lts, StateSet(2, {0})) == StateSet(2, {0, 1}));
    }
    SUBCASE("universe mismatch")
    {
        auto c = make({"q0"}, {"a"}, {}, {});
        CHECK_THROWS_AS(saturate(c.lts, StateSet(4, {0})), UsageError);
    }
}

TEST_CASE("img")
{
    auto c = make({"q0", "q1", "q2"}, {"o", "p"}, {{"q0", "o", "q1"}, {"q0", "o", "q2"}}, {});
    CHECK(img(c.lts, StateSet(3, {0}), 0) == StateSet(3, {1, 2}));
    CHECK(img(c.lts, StateSet(3, {0}), 1).empty());
    CHECK(img(c.lts, StateSet(3, {1}), 0).empty());
}

TEST_CASE("set algebra")
{
    StateSet x(4, {0, 2});
    CHECK(is_subset(StateSet(4, {2}), StateSet(4, {1, 2})));
    CHECK(difference(x, x).empty());
    CHECK(is_empty(difference(x, x)));
    CHECK(is_subset(StateSet(4), x));
    CHECK(set_union(x, StateSet(4, {1})) == StateSet(4, {0, 1, 2}));
    CHECK(intersect(x, StateSet(4, {2, 3})) == StateSet(4, {2}));
    CHECK_THROWS_AS(set_union(x, StateSet(5, {1})), UsageError);
    CHECK_THROWS_AS(is_subset(x, StateSet(5)), UsageError);
}

namespace {

testing::Case random_big(std::mt19937& rng)
{
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const int n = pick(1, 64);
    const int n_events = pick(1, 8);
    LtsBuilder b;
    for (int i = 0; i < n; ++i)
        b.add_state("q" + std::to_string(i));
    for (int e = 0; e < n_events; ++e)
        b.add_event("e" + std::to_string(e), pick(0, 2) != 0);
    b.set_initial(StateId{0});
    const int edges = pick(0, 3 * n);
    for (int i = 0; i < edges; ++i)
        b.add_edge(StateId(pick(0, n - 1)), "e" + std::to_string(pick(0, n_events - 1)), StateId(pick(0, n - 1)));
    return {b.build(), {}};
}

std::vector<StateId> random_members(std::mt19937& rng, std::size_t n)
{
    std::vector<StateId> out;
    std::bernoulli_distribution take(0.3);
    for (StateId q = 0; q < n; ++q) {
        if (take(rng))
            out.push_back(q);
    }
    return out;
}

std::vector<StateId> members(const StateSet& s) { return {s.begin(), s.end()}; }

} // namespace

TEST_CASE("backend interchangeability (500 random systems)")
{
    std::mt19937 rng(testing::base_seed);
    for (int i = 0; i < 500; ++i) {
        auto c = random_big(rng);
        const auto n = c.lts.state_count();
        auto ma = random_members(rng, n);
        auto mb = random_members(rng, n);
        StateSet a(n, ma), b(n, mb);
        DenseStateSet da(n, ma), db(n, mb);
        CHECK(members(set_union(a, b)) == set_union(da, db).members());
        CHECK(members(intersect(a, b)) == intersect(da, db).members());
        CHECK(members(difference(a, b)) == difference(da, db).members());
        CHECK(is_subset(a, b) == is_subset(da, db));
        CHECK(is_subset(intersect(a, b), a) == is_subset(intersect(da, db), da));
        CHECK(a.empty() == da.empty());
        CHECK(a.size() == da.size());
        CHECK(members(saturate(c.lts, a)) == saturate(c.lts, da).members());
        for (EventId e = 0; e < c.lts.event_count(); ++e)
            CHECK(members(img(c.lts, a, e)) == img(c.lts, da, e).members());
    }
}

TEST_CASE("closure and image laws on random systems")
{
    std::mt19937 rng(testing::base_seed + 1);
    for (int i = 0; i < 200; ++i) {
        auto c = random_big(rng);
        const auto n = c.lts.state_count();
        StateSet a(n, random_members(rng, n));
        StateSet b(n, random_members(rng, n));
        auto sa = saturate(c.lts, a);
        CHECK(is_subset(a, sa));
        CHECK(saturate(c.lts, sa) == sa);
        auto ab = set_union(a, b);
        CHECK(is_subset(sa, saturate(c.lts, ab)));
        for (EventId e = 0; e < c.lts.event_count(); ++e)
            CHECK(img(c.lts, ab, e) == set_union(img(c.lts, a, e), img(c.lts, b, e)));
        // construction order never matters
        auto m = random_members(rng, n);
        std::vector<StateId> rev(m.rbegin(), m.rend());
        CHECK(StateSet(n, m) == StateSet(n, rev));
        CHECK(StateSet(n, m).hash() == StateSet(n, rev).hash());
    }
}
