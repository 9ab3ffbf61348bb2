#include "opacity/reachability.hpp"

#include "opacity/errors.hpp"

#include <deque>
#include <map>

namespace opacity {

std::optional<StateId> ReachabilityGraph::find(const Marking& m) const
{
    for (StateId q = 0; q < markings.size(); ++q) {
        if (markings[q] == m)
            return q;
    }
    return std::nullopt;
}

namespace {

using Dense = std::vector<std::uint32_t>;

struct IndexedTransition {
    std::string id;
    std::vector<std::pair<std::size_t, std::uint32_t>> pre;
    std::vector<std::pair<std::size_t, std::uint32_t>> post;
};

} // namespace

ReachabilityGraph build_reachability_graph(const PetriNet& net, std::span<const SecretMarking> secrets,
                                           const ExplorationLimits& limits, const StateNamer& namer)
{
    for (const auto& s : secrets) {
        net.check_marking(s.marking, "secret marking");
        for (const auto& p : s.zero_places) {
            if (!net.has_place(p))
                throw ModelError("secret marking: unknown place '" + p + "'");
        }
    }

    const auto& places = net.places();
    std::map<std::string, std::size_t, std::less<>> slot;
    for (std::size_t i = 0; i < places.size(); ++i)
        slot.emplace(places[i], i);

    std::vector<IndexedTransition> transitions;
    for (const auto& id : net.sorted_transition_ids()) {
        IndexedTransition t{id, {}, {}};
        for (const auto& [p, w] : net.preset(id))
            t.pre.emplace_back(slot.find(p)->second, w);
        for (const auto& [p, w] : net.postset(id))
            t.post.emplace_back(slot.find(p)->second, w);
        transitions.push_back(std::move(t));
    }

    auto to_marking = [&](const Dense& d) {
        Marking m;
        for (std::size_t i = 0; i < d.size(); ++i)
            m.set(places[i], d[i]);
        return m;
    };

    Dense initial(places.size(), 0);
    for (const auto& [p, count] : net.initial_marking().tokens())
        initial[slot.find(p)->second] = count;

    std::map<Dense, StateId> index;
    std::vector<Dense> states;
    std::vector<std::optional<StateId>> parents;
    std::vector<std::tuple<StateId, std::string, StateId>> edges;

    auto intern = [&](Dense d, std::optional<StateId> parent) -> StateId {
        auto it = index.find(d);
        if (it != index.end())
            return it->second;
        if (states.size() >= limits.max_states)
            throw BoundError("possibly unbounded net: more than " + std::to_string(limits.max_states) +
                             " reachable markings (state bound)");
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (d[i] > limits.max_tokens)
                throw BoundError("possibly unbounded net: place '" + places[i] + "' exceeds " +
                                 std::to_string(limits.max_tokens) + " tokens (token bound)");
        }
        auto id = static_cast<StateId>(states.size());
        index.emplace(d, id);
        states.push_back(std::move(d));
        parents.push_back(parent);
        return id;
    };

    intern(initial, std::nullopt);
    for (StateId current = 0; current < states.size(); ++current) {
        for (const auto& t : transitions) {
            const Dense& m = states[current];
            bool ok = true;
            for (const auto& [p, w] : t.pre) {
                if (m[p] < w) {
                    ok = false;
                    break;
                }
            }
            if (!ok)
                continue;
            Dense next = m;
            for (const auto& [p, w] : t.pre)
                next[p] -= w;
            for (const auto& [p, w] : t.post)
                next[p] += w;
            auto target = intern(std::move(next), current);
            edges.emplace_back(current, t.id, target);
        }
    }

    ReachabilityGraph rg;
    LtsBuilder builder;
    for (std::size_t i = 0; i < states.size(); ++i) {
        rg.markings.push_back(to_marking(states[i]));
        builder.add_state(namer ? namer(rg.markings.back(), i, parents[i]) : "S" + std::to_string(i));
    }
    for (const auto& t : net.transitions())
        builder.add_event(t.id, t.observable);
    builder.set_initial(StateId{0});
    for (const auto& [from, event, to] : edges)
        builder.add_edge(from, event, to);
    rg.lts = builder.build();

    std::vector<StateId> secret_states;
    for (StateId q = 0; q < rg.markings.size(); ++q) {
        for (const auto& s : secrets) {
            if (s.matches(rg.markings[q])) {
                secret_states.push_back(q);
                break;
            }
        }
    }
    rg.secret = SecretSpec(rg.lts, std::move(secret_states));
    return rg;
}

ReachabilityGraph build_reachability_graph(const NetModel& model, const ExplorationLimits& limits,
                                           const StateNamer& namer)
{
    return build_reachability_graph(model.behavior_net(), model.secrets, limits, namer);
}

} // namespace opacity
