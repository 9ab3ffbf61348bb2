#include "opacity/state_set.hpp"

#include "opacity/errors.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <string>

namespace opacity {

namespace {

void same_ambient(std::size_t a, std::size_t b)
{
    if (a != b)
        throw UsageError("state sets over different systems (" + std::to_string(a) + " vs " +
                         std::to_string(b) + " states)");
}

void fits(const Lts& lts, std::size_t universe)
{
    if (lts.state_count() != universe)
        throw UsageError("state set universe " + std::to_string(universe) + " does not match LTS with " +
                         std::to_string(lts.state_count()) + " states");
}

} // namespace

StateSet::StateSet(std::size_t universe, std::vector<StateId> members)
    : universe_(universe), members_(std::move(members))
{
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (!members_.empty() && members_.back() >= universe_)
        throw UsageError("state " + std::to_string(members_.back()) + " outside a universe of " +
                         std::to_string(universe_));
}

bool StateSet::contains(StateId q) const
{
    return std::binary_search(members_.begin(), members_.end(), q);
}

std::size_t StateSet::hash() const
{
    // FNV-1a over the canonical member sequence.
    std::size_t h = 1469598103934665603ull ^ universe_;
    for (auto q : members_) {
        h ^= q;
        h *= 1099511628211ull;
    }
    return h;
}

StateSet set_union(const StateSet& a, const StateSet& b)
{
    same_ambient(a.universe(), b.universe());
    std::vector<StateId> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return StateSet(a.universe(), std::move(out));
}

StateSet intersect(const StateSet& a, const StateSet& b)
{
    same_ambient(a.universe(), b.universe());
    std::vector<StateId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return StateSet(a.universe(), std::move(out));
}

StateSet difference(const StateSet& a, const StateSet& b)
{
    same_ambient(a.universe(), b.universe());
    std::vector<StateId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return StateSet(a.universe(), std::move(out));
}

bool is_subset(const StateSet& a, const StateSet& b)
{
    same_ambient(a.universe(), b.universe());
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

StateSet saturate(const Lts& lts, const StateSet& seed)
{
    fits(lts, seed.universe());
    std::vector<bool> visited(lts.state_count(), false);
    std::vector<StateId> work(seed.begin(), seed.end());
    for (auto q : work)
        visited[q] = true;
    std::vector<StateId> closed = work;
    while (!work.empty()) {
        auto q = work.back();
        work.pop_back();
        for (const auto& edge : lts.successors(q)) {
            if (lts.observable(edge.event) || visited[edge.target])
                continue;
            visited[edge.target] = true;
            work.push_back(edge.target);
            closed.push_back(edge.target);
        }
    }
    return StateSet(seed.universe(), std::move(closed));
}

StateSet img(const Lts& lts, const StateSet& a, EventId event)
{
    fits(lts, a.universe());
    std::vector<StateId> out;
    for (auto q : a) {
        for (const auto& edge : lts.successors(q)) {
            if (edge.event == event)
                out.push_back(edge.target);
        }
    }
    return StateSet(a.universe(), std::move(out));
}

StateSet observationally_equivalent_runs(const Lts& lts, std::span<const EventId> observation)
{
    auto current = saturate(lts, StateSet(lts.state_count(), {lts.initial()}));
    for (auto e : observation) {
        if (!lts.observable(e))
            throw UsageError("observation contains unobservable event '" + lts.event_name(e) + "'");
        current = saturate(lts, img(lts, current, e));
        if (current.empty())
            break;
    }
    return current;
}

DenseStateSet::DenseStateSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

DenseStateSet::DenseStateSet(std::size_t universe, std::span<const StateId> members) : DenseStateSet(universe)
{
    for (auto q : members)
        insert(q);
}

std::size_t DenseStateSet::size() const
{
    std::size_t n = 0;
    for (auto w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool DenseStateSet::empty() const
{
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

bool DenseStateSet::contains(StateId q) const
{
    return q < universe_ && ((words_[q / 64] >> (q % 64)) & 1u);
}

void DenseStateSet::insert(StateId q)
{
    if (q >= universe_)
        throw UsageError("state " + std::to_string(q) + " outside a universe of " + std::to_string(universe_));
    words_[q / 64] |= std::uint64_t{1} << (q % 64);
}

std::vector<StateId> DenseStateSet::members() const
{
    std::vector<StateId> out;
    for (StateId q = 0; q < universe_; ++q) {
        if (contains(q))
            out.push_back(q);
    }
    return out;
}

namespace {

template <class Op>
DenseStateSet combine(const DenseStateSet& a, const DenseStateSet& b, Op op)
{
    same_ambient(a.universe(), b.universe());
    DenseStateSet out(a.universe());
    auto wa = a.words();
    auto wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) {
        auto bits = op(wa[i], wb[i]);
        for (int j = 0; j < 64; ++j) {
            if ((bits >> j) & 1u)
                out.insert(static_cast<StateId>(i * 64 + static_cast<std::size_t>(j)));
        }
    }
    return out;
}

} // namespace

DenseStateSet set_union(const DenseStateSet& a, const DenseStateSet& b)
{
    return combine(a, b, [](auto x, auto y) { return x | y; });
}

DenseStateSet intersect(const DenseStateSet& a, const DenseStateSet& b)
{
    return combine(a, b, [](auto x, auto y) { return x & y; });
}

DenseStateSet difference(const DenseStateSet& a, const DenseStateSet& b)
{
    return combine(a, b, [](auto x, auto y) { return x & ~y; });
}

bool is_subset(const DenseStateSet& a, const DenseStateSet& b)
{
    same_ambient(a.universe(), b.universe());
    auto wa = a.words();
    auto wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) {
        if (wa[i] & ~wb[i])
            return false;
    }
    return true;
}

DenseStateSet saturate(const Lts& lts, const DenseStateSet& seed)
{
    fits(lts, seed.universe());
    DenseStateSet current = seed;
    for (bool changed = true; changed;) {
        changed = false;
        for (StateId q = 0; q < lts.state_count(); ++q) {
            if (!current.contains(q))
                continue;
            for (const auto& edge : lts.successors(q)) {
                if (!lts.observable(edge.event) && !current.contains(edge.target)) {
                    current.insert(edge.target);
                    changed = true;
                }
            }
        }
    }
    return current;
}

DenseStateSet img(const Lts& lts, const DenseStateSet& a, EventId event)
{
    fits(lts, a.universe());
    DenseStateSet out(a.universe());
    for (StateId q = 0; q < lts.state_count(); ++q) {
        if (!a.contains(q))
            continue;
        for (const auto& edge : lts.successors(q)) {
            if (edge.event == event)
                out.insert(edge.target);
        }
    }
    return out;
}

} // namespace opacity
