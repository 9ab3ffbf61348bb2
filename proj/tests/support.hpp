#pragma once

// Shared fixtures: tiny hand-written systems and the seeded random LTS
// generator used by the property suites.

#include "opacity/lts.hpp"
#include "opacity/state_set.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace testing {

using namespace opacity;

struct Case {
    Lts lts;
    SecretSpec secret;
};

// events: "name" observable, "~name" unobservable; edges "from event to".
inline Case make(const std::vector<std::string>& states, const std::vector<std::string>& events,
                 const std::vector<std::vector<std::string>>& edges, const std::vector<std::string>& secret)
{
    LtsBuilder b;
    for (const auto& s : states)
        b.add_state(s);
    for (const auto& e : events) {
        if (e.front() == '~')
            b.add_event(e.substr(1), false);
        else
            b.add_event(e, true);
    }
    b.set_initial(states.front());
    for (const auto& e : edges)
        b.add_edge(e[0], e[1], e[2]);
    Case c{b.build(), {}};
    c.secret = SecretSpec::from_names(c.lts, secret);
    return c;
}

inline Word word(const Lts& lts, const std::vector<std::string>& names) { return word_from_names(names, lts); }

// <= 8 states, 1..3 observable + 1..2 unobservable events, random secrets.
inline Case random_case(std::uint32_t seed)
{
    std::mt19937 rng(seed);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const int n = pick(1, 8);
    const int n_obs = pick(1, 3);
    const int n_unobs = pick(1, 2);
    LtsBuilder b;
    for (int i = 0; i < n; ++i)
        b.add_state("q" + std::to_string(i));
    std::vector<std::string> events;
    for (int i = 0; i < n_obs; ++i) {
        events.push_back(std::string(1, char('a' + i)));
        b.add_event(events.back(), true);
    }
    for (int i = 0; i < n_unobs; ++i) {
        events.push_back(std::string(1, char('u' + i)));
        b.add_event(events.back(), false);
    }
    b.set_initial(StateId{0});
    std::bernoulli_distribution edge(0.22);
    std::set<std::tuple<int, std::string, int>> seen;
    for (int q = 0; q < n; ++q) {
        for (const auto& e : events) {
            for (int r = 0; r < n; ++r) {
                if (edge(rng) && seen.emplace(q, e, r).second)
                    b.add_edge(StateId(q), e, StateId(r));
            }
        }
    }
    Case c{b.build(), {}};
    std::bernoulli_distribution secret(0.35);
    std::vector<StateId> s;
    for (int q = 0; q < n; ++q) {
        if (secret(rng))
            s.push_back(StateId(q));
    }
    c.secret = SecretSpec(c.lts, s);
    return c;
}

inline constexpr std::uint32_t base_seed = 20240611;

} // namespace testing
