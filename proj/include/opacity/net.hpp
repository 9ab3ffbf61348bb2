#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace opacity {

/// Sparse token assignment. Zero counts are never stored, so two markings
/// compare equal iff they agree on every place.
class Marking {
public:
    using Map = std::map<std::string, std::uint32_t, std::less<>>;

    Marking() = default;
    Marking(std::initializer_list<std::pair<const std::string, std::uint32_t>> init);
    explicit Marking(const Map& tokens);

    std::uint32_t operator[](std::string_view place) const;
    void set(const std::string& place, std::uint32_t count);

    const Map& tokens() const { return tokens_; }
    bool empty() const { return tokens_.empty(); }
    std::size_t support_size() const { return tokens_.size(); }

    std::string to_string() const;

    friend bool operator==(const Marking&, const Marking&) = default;
    friend auto operator<=>(const Marking& a, const Marking& b) { return a.tokens_ <=> b.tokens_; }

private:
    Map tokens_;
};

struct Transition {
    std::string id;
    std::string label;  // display form, e.g. "T7!"; defaults to id
    bool observable = true;

    friend bool operator==(const Transition&, const Transition&) = default;
};

struct Arc {
    std::string from;
    std::string to;
    std::uint32_t weight = 1;

    friend bool operator==(const Arc&, const Arc&) = default;
    friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Place/transition net (P, T, F, W, m0). Immutable once constructed; the
/// constructor rejects dangling arcs, P/T id clashes, zero weights, duplicate
/// arcs and initial markings over unknown places.
class PetriNet {
public:
    PetriNet(std::vector<std::string> places, std::vector<Transition> transitions,
             std::vector<Arc> arcs, Marking initial_marking);

    const std::vector<std::string>& places() const { return places_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    const Marking& initial_marking() const { return initial_; }

    bool has_place(std::string_view id) const { return place_index_.contains(id); }
    bool has_transition(std::string_view id) const { return transition_index_.contains(id); }
    const Transition& transition(std::string_view id) const;

    /// W(from, to); 0 when the arc is absent.
    std::uint32_t weight(std::string_view from, std::string_view to) const;

    /// (place, weight) pairs consumed / produced by `t`, sorted by place id.
    const std::vector<std::pair<std::string, std::uint32_t>>& preset(std::string_view t) const;
    const std::vector<std::pair<std::string, std::uint32_t>>& postset(std::string_view t) const;

    /// Transition ids in lexicographic order (the exploration order).
    const std::vector<std::string>& sorted_transition_ids() const { return sorted_transitions_; }

    /// Throws ModelError if `m` mentions a place outside P.
    void check_marking(const Marking& m, std::string_view what) const;

    friend bool operator==(const PetriNet&, const PetriNet&) = default;

private:
    std::size_t transition_slot(std::string_view id) const;

    std::vector<std::string> places_;
    std::vector<Transition> transitions_;
    std::vector<Arc> arcs_;
    Marking initial_;

    std::map<std::string, std::size_t, std::less<>> place_index_;
    std::map<std::string, std::size_t, std::less<>> transition_index_;
    std::map<std::pair<std::string, std::string>, std::uint32_t, std::less<>> weights_;
    std::vector<std::vector<std::pair<std::string, std::uint32_t>>> pre_;
    std::vector<std::vector<std::pair<std::string, std::uint32_t>>> post_;
    std::vector<std::string> sorted_transitions_;
};

/// Transitions enabled at `m`, lexicographically sorted.
std::vector<std::string> enabled(const PetriNet& net, const Marking& m);

bool is_enabled(const PetriNet& net, const Marking& m, std::string_view t);

/// Fires `t`. Throws UsageError when `t` is not enabled at `m`.
Marking fire(const PetriNet& net, const Marking& m, std::string_view t);

/// C(p, t) = W(t, p) - W(p, t).
class IncidenceMatrix {
public:
    explicit IncidenceMatrix(const PetriNet& net);

    int at(std::string_view place, std::string_view transition) const;

    /// Non-zero entries keyed by (place, transition).
    const std::map<std::pair<std::string, std::string>, int>& nonzero() const { return entries_; }

    /// m + C * counts, where counts maps transition id -> number of firings.
    Marking apply(const Marking& m, const std::map<std::string, std::uint32_t>& counts) const;

private:
    std::map<std::pair<std::string, std::string>, int> entries_;
};

IncidenceMatrix incidence_matrix(const PetriNet& net);

struct Interface {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    bool contains(std::string_view place) const;
    friend bool operator==(const Interface&, const Interface&) = default;
};

/// Open workflow net: a core net plus asynchronous interface places and a
/// final marking.
class OwfNet {
public:
    OwfNet(PetriNet core, Interface interface, Marking final_marking);

    const PetriNet& core() const { return core_; }
    const Interface& interface() const { return interface_; }
    const Marking& final_marking() const { return final_; }

    /// The net with interface places and every arc touching them removed. Its
    /// behaviour is the service's behaviour against a cooperative environment.
    PetriNet inner_net() const;

    /// The unique non-interface place without outgoing arcs, if there is one.
    std::optional<std::string> sink_place() const;

private:
    PetriNet core_;
    Interface interface_;
    Marking final_;
};

struct Diagnostic {
    enum class Kind { no_source, multiple_sources, no_sink, multiple_sinks, off_path };
    Kind kind;
    std::string element;
    std::string message;
};

std::string_view to_string(Diagnostic::Kind kind);

/// Structural workflow-net check on the core net with interface places
/// excluded: one source place, one sink place, every node on some
/// source-to-sink path. Returns one diagnostic per violation.
std::vector<Diagnostic> validate_wf_structure(const OwfNet& net);

/// A secret given either as an exact marking or as a sub-marking predicate:
/// with `exact == false` only the listed places are constrained (each must
/// carry exactly the listed count, zero included).
struct SecretMarking {
    Marking marking;
    bool exact = true;
    // Places listed with count 0 in a predicate; kept apart because Marking
    // drops zero entries.
    std::vector<std::string> zero_places;

    bool matches(const Marking& m) const;
    friend bool operator==(const SecretMarking&, const SecretMarking&) = default;
};

/// Everything a net model file carries.
struct NetModel {
    PetriNet net;
    std::optional<Marking> final_marking;
    std::optional<Interface> interface;
    std::vector<SecretMarking> secrets;

    bool is_owf() const { return interface.has_value(); }
    /// Requires is_owf(). A missing final marking is taken as empty.
    OwfNet owf() const;
    /// The net whose firing behaviour is explored: the inner net for oWF-nets.
    PetriNet behavior_net() const;

    friend bool operator==(const NetModel&, const NetModel&) = default;
};

} // namespace opacity
