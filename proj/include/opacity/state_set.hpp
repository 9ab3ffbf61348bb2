#pragma once

#include "opacity/lts.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace opacity {

/// Finite set of states of one Lts, held as a sorted duplicate-free id vector.
/// The representation is canonical: equal membership means equal value and
/// equal hash, whatever the construction order. `universe` is |Q| of the
/// ambient Lts and is part of the value, so sets of different systems never
/// compare equal and refuse to combine.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe) : universe_(universe) {}
    StateSet(std::size_t universe, std::vector<StateId> members);

    std::size_t universe() const { return universe_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(StateId q) const;
    std::span<const StateId> members() const { return members_; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    std::size_t hash() const;

    friend bool operator==(const StateSet&, const StateSet&) = default;
    friend auto operator<=>(const StateSet&, const StateSet&) = default;

private:
    std::size_t universe_ = 0;
    std::vector<StateId> members_;
};

struct StateSetHash {
    std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

StateSet set_union(const StateSet& a, const StateSet& b);
StateSet intersect(const StateSet& a, const StateSet& b);
StateSet difference(const StateSet& a, const StateSet& b);
bool is_subset(const StateSet& a, const StateSet& b);
inline bool is_empty(const StateSet& a) { return a.empty(); }

/// Least superset of `seed` closed under unobservable successors.
StateSet saturate(const Lts& lts, const StateSet& seed);

/// States reachable from `a` by one `event` edge, not saturated.
StateSet img(const Lts& lts, const StateSet& a, EventId event);

/// States the system can be in after any run whose observable projection is
/// `observation` (the current-state estimate). Empty when no run matches.
/// Throws UsageError if `observation` contains an unobservable event.
StateSet observationally_equivalent_runs(const Lts& lts, std::span<const EventId> observation);

/// Bitset backend with the same operation suite. Kept as an interchangeable
/// alternative to StateSet; saturation runs as a whole-set fixpoint rather
/// than a worklist.
class DenseStateSet {
public:
    DenseStateSet() = default;
    explicit DenseStateSet(std::size_t universe);
    DenseStateSet(std::size_t universe, std::span<const StateId> members);

    std::size_t universe() const { return universe_; }
    std::size_t size() const;
    bool empty() const;
    bool contains(StateId q) const;
    void insert(StateId q);
    std::vector<StateId> members() const;
    std::span<const std::uint64_t> words() const { return words_; }

    friend bool operator==(const DenseStateSet&, const DenseStateSet&) = default;

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

DenseStateSet set_union(const DenseStateSet& a, const DenseStateSet& b);
DenseStateSet intersect(const DenseStateSet& a, const DenseStateSet& b);
DenseStateSet difference(const DenseStateSet& a, const DenseStateSet& b);
bool is_subset(const DenseStateSet& a, const DenseStateSet& b);
inline bool is_empty(const DenseStateSet& a) { return a.empty(); }
DenseStateSet saturate(const Lts& lts, const DenseStateSet& seed);
DenseStateSet img(const Lts& lts, const DenseStateSet& a, EventId event);

} // namespace opacity

template <>
struct std::hash<opacity::StateSet> {
    std::size_t operator()(const opacity::StateSet& s) const { return s.hash(); }
};
