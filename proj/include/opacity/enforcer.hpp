#pragma once

#include "opacity/checker.hpp"
#include "opacity/lts.hpp"
#include "opacity/net.hpp"
#include "opacity/reachability.hpp"
#include "opacity/sog.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace opacity {

/// Observations that only secret runs explain, one witness per all-secret
/// aggregate (its discovery trace), in aggregate id order.
struct SuperLanguageAdditions {
    std::vector<Word> traces;

    bool empty() const { return traces.empty(); }
};

SuperLanguageAdditions compute_min_superlanguage(const Lts& lts, const SecretSpec& secret, const Sog& sog,
                                                 const std::vector<CounterExample>& counterexamples);

struct NewState {
    std::string state;
    AggregateId host;

    friend bool operator==(const NewState&, const NewState&) = default;
};

struct IncidenceUpdate {
    std::string place;
    std::string transition;
    int value;

    friend bool operator==(const IncidenceUpdate&, const IncidenceUpdate&) = default;
};

/// How one violating aggregate was treated.
struct PatchStep {
    Word trace;
    AggregateId aggregate;
    std::string disclosing_state;
    std::string host_place;  // empty on the Lts-only path
    bool sink_repair = false;

    friend bool operator==(const PatchStep&, const PatchStep&) = default;
};

struct EnforcementPatch {
    std::vector<NewState> new_states;
    std::vector<std::string> new_transitions;
    std::vector<std::string> new_places;
    std::vector<Arc> removed_arcs;
    std::vector<Arc> added_arcs;
    std::vector<IncidenceUpdate> incidence_updates;
    std::vector<PatchStep> steps;

    bool empty() const { return new_states.empty() && new_transitions.empty() && new_places.empty(); }
    friend bool operator==(const EnforcementPatch&, const EnforcementPatch&) = default;
};

struct NetEnforcement {
    NetModel model;              // patched model (the input itself when already opaque)
    ReachabilityGraph graph;     // reachability graph of the patched model
    Sog sog;                     // SOG of that graph
    Lts direct_lts;              // original graph with only the per-step state/transition additions
    SecretSpec direct_secret;
    EnforcementPatch patch;
    Verdict verdict_after;
};

/// Patches the net so that every all-secret aggregate gains a fresh
/// non-secret state behind a fresh unobservable transition. `graph` and
/// `check` must come from `model`. Counterexamples are treated top of stack
/// first (last discovered first). Throws EnforcementError when a
/// counterexample does not match a minimal super-language witness or when no
/// admissible host place exists.
NetEnforcement opacify(const NetModel& model, const ReachabilityGraph& graph, const SimpleCheck& check,
                       const ExplorationLimits& limits = {});
NetEnforcement opacify(const NetModel& model, const ExplorationLimits& limits = {});

struct LtsEnforcement {
    Lts lts;
    SecretSpec secret;
    Sog sog;
    EnforcementPatch patch;
    Verdict verdict_after;
};

/// Lts-only variant: adds (q, t_new, q_new) per violating aggregate, q_new
/// dead and non-secret. Existing state ids are preserved.
LtsEnforcement opacify(const Lts& lts, const SecretSpec& secret, const SimpleCheck& check);

struct SinkRepair {
    std::string new_place;
    std::vector<Arc> removed;
    std::vector<Arc> added;
};

/// Rewiring for a host place that is the oWF sink p_o: (t, p_o) becomes
/// t -> p_new -> t_new -> p_o. Throws ModelError when the net has no single
/// sink and UsageError when (t, p_o) is not an arc.
SinkRepair owf_final_place_repair(const OwfNet& net, std::string_view marking_transition,
                                  std::string_view new_transition, std::string new_place);

/// Undoes `patch` on a patched model.
NetModel revert_patch(const NetModel& patched, const EnforcementPatch& patch);

/// Same places, transitions, arcs (as sets), markings, interface and secrets.
bool same_structure(const NetModel& a, const NetModel& b);

} // namespace opacity
