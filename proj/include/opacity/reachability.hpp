#pragma once

#include "opacity/lts.hpp"
#include "opacity/net.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace opacity {

struct ExplorationLimits {
    std::size_t max_states = 100000;
    std::uint32_t max_tokens = 255;
};

/// Reachability graph of a net viewed as an Lts: states are reachable
/// markings in BFS discovery order (transitions tried in lexicographic id
/// order), events are the net's transitions.
struct ReachabilityGraph {
    Lts lts;
    SecretSpec secret;
    std::vector<Marking> markings;  // indexed by StateId

    std::optional<StateId> find(const Marking& m) const;
};

/// Names the state discovered at BFS position `index`; `parent` is the state
/// it was first reached from (none for the initial marking). The default
/// namer produces "S<index>".
using StateNamer = std::function<std::string(const Marking& m, std::size_t index, std::optional<StateId> parent)>;

/// Throws BoundError ("possibly unbounded net") past either limit and
/// ModelError when a secret mentions an unknown place.
ReachabilityGraph build_reachability_graph(const PetriNet& net, std::span<const SecretMarking> secrets,
                                           const ExplorationLimits& limits = {}, const StateNamer& namer = {});

/// Explores model.behavior_net() against model.secrets.
ReachabilityGraph build_reachability_graph(const NetModel& model, const ExplorationLimits& limits = {},
                                           const StateNamer& namer = {});

} // namespace opacity
