#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace opacity {

using StateId = std::uint32_t;
using EventId = std::uint32_t;

/// A finite word over the event alphabet of one Lts.
using Word = std::vector<EventId>;

struct EventInfo {
    std::string id;
    bool observable = true;

    friend bool operator==(const EventInfo&, const EventInfo&) = default;
};

struct Edge {
    EventId event;
    StateId target;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Labeled transition system G = (Q, q_init, Σ_o ∪ Σ_u, δ). States keep the
/// order they were added in; events are numbered in lexicographic id order, so
/// iterating EventIds is iterating event names in sorted order. δ may be
/// nondeterministic.
class Lts {
public:
    Lts() = default;

    std::size_t state_count() const { return state_names_.size(); }
    const std::string& state_name(StateId q) const { return state_names_.at(q); }
    std::optional<StateId> find_state(std::string_view name) const;
    StateId initial() const { return initial_; }

    std::size_t event_count() const { return events_.size(); }
    const EventInfo& event(EventId e) const { return events_.at(e); }
    const std::string& event_name(EventId e) const { return events_.at(e).id; }
    bool observable(EventId e) const { return events_.at(e).observable; }
    std::optional<EventId> find_event(std::string_view id) const;
    std::vector<EventId> observable_events() const;
    std::vector<EventId> unobservable_events() const;

    /// Outgoing edges of q sorted by (event, target).
    std::span<const Edge> successors(StateId q) const { return succ_.at(q); }
    std::size_t edge_count() const;

    friend bool operator==(const Lts&, const Lts&) = default;

private:
    friend class LtsBuilder;

    std::vector<std::string> state_names_;
    std::map<std::string, StateId, std::less<>> state_index_;
    StateId initial_ = 0;
    std::vector<EventInfo> events_;
    std::map<std::string, EventId, std::less<>> event_index_;
    std::vector<std::vector<Edge>> succ_;
};

class LtsBuilder {
public:
    StateId add_state(std::string name);
    /// Declares an event; redeclaring with a different observability throws.
    void add_event(std::string id, bool observable);
    void set_initial(StateId q) { initial_ = q; }
    void set_initial(std::string_view name);
    /// The event must have been declared.
    void add_edge(StateId from, std::string_view event, StateId to);
    void add_edge(std::string_view from, std::string_view event, std::string_view to);

    std::optional<StateId> find_state(std::string_view name) const;
    std::size_t state_count() const { return names_.size(); }

    /// Throws ModelError for an empty state set or a dangling initial state.
    Lts build() const;

private:
    std::vector<std::string> names_;
    std::map<std::string, StateId, std::less<>> index_;
    std::map<std::string, bool, std::less<>> events_;
    std::vector<std::tuple<StateId, std::string, StateId>> edges_;
    std::optional<StateId> initial_;
};

/// Copies `lts` into a builder (same state ids, same events, same edges).
LtsBuilder to_builder(const Lts& lts);

/// The subset S ⊆ Q whose occupancy must stay hidden.
class SecretSpec {
public:
    SecretSpec() = default;
    /// Throws ModelError when a state id is outside the Lts.
    SecretSpec(const Lts& lts, std::vector<StateId> states);
    static SecretSpec from_names(const Lts& lts, std::span<const std::string> names);

    bool contains(StateId q) const { return q < mask_.size() && mask_[q]; }
    const std::vector<StateId>& states() const { return states_; }
    bool empty() const { return states_.empty(); }
    std::size_t universe() const { return mask_.size(); }

    friend bool operator==(const SecretSpec&, const SecretSpec&) = default;

private:
    std::vector<StateId> states_;
    std::vector<bool> mask_;
};

/// Observable projection: drops every event of `w` that is not observable in
/// `lts`.
Word project(std::span<const EventId> w, const Lts& lts);

/// Same projection over event names against an explicit observable set.
std::vector<std::string> project(std::span<const std::string> w, const std::set<std::string, std::less<>>& observables);

std::string to_string(std::span<const EventId> w, const Lts& lts, std::string_view separator = " ");
std::vector<std::string> event_names(std::span<const EventId> w, const Lts& lts);
/// Throws ModelError naming the first unknown event.
Word word_from_names(std::span<const std::string> names, const Lts& lts);

/// Every run of length <= max_len, in (length, lexicographic) order, as
/// (word, end state) pairs; the empty run (ε, q_init) comes first. Runs are
/// paths, so a nondeterministic Lts can repeat a (word, end) pair. The
/// callback returns false to stop early.
void enumerate_runs(const Lts& lts, std::size_t max_len,
                    const std::function<bool(const Word&, StateId)>& visit);
std::vector<std::pair<Word, StateId>> enumerate_runs(const Lts& lts, std::size_t max_len);

} // namespace opacity
