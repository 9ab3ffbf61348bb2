#pragma once

#include "opacity/lts.hpp"
#include "opacity/state_set.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace opacity {

using AggregateId = std::uint32_t;

/// One SOG node: a non-empty, saturation-closed state set plus its secret
/// flags (contains_secret: some member is secret; all_secret: every member is).
struct Aggregate {
    AggregateId id;
    StateSet states;
    bool contains_secret = false;
    bool all_secret = false;
};

struct SogEdge {
    AggregateId source;
    EventId event;
    AggregateId target;

    friend bool operator==(const SogEdge&, const SogEdge&) = default;
};

/// Deterministic symbolic observation graph. Aggregate ids follow DFS
/// discovery order, so aggregate 0 is a0 = Saturate({q_init}).
class Sog {
public:
    const std::vector<Aggregate>& aggregates() const { return aggregates_; }
    const Aggregate& aggregate(AggregateId a) const { return aggregates_.at(a); }
    AggregateId initial() const { return 0; }
    const std::vector<EventId>& observable_alphabet() const { return alphabet_; }

    /// All edges, in the order the construction saved them.
    const std::vector<SogEdge>& edges() const { return edges_; }
    /// Outgoing edges of `a`, sorted by event.
    std::vector<SogEdge> out_edges(AggregateId a) const;
    std::optional<AggregateId> successor(AggregateId a, EventId e) const;
    /// Follows an observable word from a0; nullopt if it leaves the graph.
    std::optional<AggregateId> walk(std::span<const EventId> observation) const;

    /// The aggregate with exactly these states, if built.
    std::optional<AggregateId> find(const StateSet& states) const;

    /// Observable path along which the DFS first reached `a`.
    Word discovery_trace(AggregateId a) const;
    /// Predecessor on that path (none for a0).
    std::optional<AggregateId> discovery_parent(AggregateId a) const { return parent_.at(a); }

private:
    friend Sog build_sog(const Lts& lts, const SecretSpec& secret);

    std::vector<Aggregate> aggregates_;
    std::vector<EventId> alphabet_;
    std::vector<SogEdge> edges_;
    std::map<StateSet, AggregateId> index_;
    std::vector<std::map<EventId, AggregateId>> succ_;
    std::vector<std::optional<AggregateId>> parent_;
    std::vector<std::optional<EventId>> parent_event_;
};

/// Observable events with a non-empty image from `a`, ascending.
std::vector<EventId> enable_obs(const Lts& lts, const StateSet& a);
inline std::vector<EventId> enable_obs(const Lts& lts, const Aggregate& a) { return enable_obs(lts, a.states); }

/// Builds the SOG on the fly by depth-first search, events in ascending id
/// order. Secret flags are set as each aggregate is created.
Sog build_sog(const Lts& lts, const SecretSpec& secret);

struct DotOptions {
    std::string graph_name = "sog";
    bool show_states = true;   // list member states in node labels
    bool mark_secret = true;   // style all-secret nodes
};

/// Graphviz rendering; byte-identical for identical inputs.
std::string export_dot(const Sog& sog, const Lts& lts, const DotOptions& options = {});

/// Graphviz rendering of the Lts itself; secret states double-circled,
/// unobservable edges dashed.
std::string export_dot(const Lts& lts, const SecretSpec& secret, std::string_view graph_name = "lts");

} // namespace opacity
