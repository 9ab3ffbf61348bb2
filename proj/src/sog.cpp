#include "opacity/sog.hpp"

#include <algorithm>
#include <sstream>

namespace opacity {

std::vector<SogEdge> Sog::out_edges(AggregateId a) const
{
    std::vector<SogEdge> out;
    for (const auto& [event, target] : succ_.at(a))
        out.push_back({a, event, target});
    return out;
}

std::optional<AggregateId> Sog::successor(AggregateId a, EventId e) const
{
    const auto& m = succ_.at(a);
    auto it = m.find(e);
    if (it == m.end())
        return std::nullopt;
    return it->second;
}

std::optional<AggregateId> Sog::walk(std::span<const EventId> observation) const
{
    AggregateId current = initial();
    for (auto e : observation) {
        auto next = successor(current, e);
        if (!next)
            return std::nullopt;
        current = *next;
    }
    return current;
}

std::optional<AggregateId> Sog::find(const StateSet& states) const
{
    auto it = index_.find(states);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

Word Sog::discovery_trace(AggregateId a) const
{
    Word trace;
    for (auto current = a; parent_.at(current); current = *parent_[current])
        trace.push_back(*parent_event_[current]);
    std::reverse(trace.begin(), trace.end());
    return trace;
}

std::vector<EventId> enable_obs(const Lts& lts, const StateSet& a)
{
    std::vector<EventId> out;
    for (auto q : a) {
        for (const auto& edge : lts.successors(q)) {
            if (lts.observable(edge.event))
                out.push_back(edge.event);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Sog build_sog(const Lts& lts, const SecretSpec& secret)
{
    Sog sog;
    sog.alphabet_ = lts.observable_events();

    auto make_aggregate = [&](StateSet states, std::optional<AggregateId> parent,
                              std::optional<EventId> via) -> AggregateId {
        Aggregate agg;
        agg.id = static_cast<AggregateId>(sog.aggregates_.size());
        agg.contains_secret = std::any_of(states.begin(), states.end(), [&](auto q) { return secret.contains(q); });
        agg.all_secret = !states.empty() &&
                         std::all_of(states.begin(), states.end(), [&](auto q) { return secret.contains(q); });
        agg.states = std::move(states);
        sog.index_.emplace(agg.states, agg.id);
        sog.aggregates_.push_back(std::move(agg));
        sog.succ_.emplace_back();
        sog.parent_.push_back(parent);
        sog.parent_event_.push_back(via);
        return sog.aggregates_.back().id;
    };

    auto a0 = make_aggregate(saturate(lts, StateSet(lts.state_count(), {lts.initial()})), std::nullopt, std::nullopt);

    // Pending events are kept in descending order so that taking the last
    // one explores them in ascending order. A frame is popped only once its
    // pending list is exhausted.
    struct Frame {
        AggregateId aggregate;
        std::vector<EventId> pending;
    };
    auto frame_for = [&](AggregateId a) {
        auto events = enable_obs(lts, sog.aggregates_[a].states);
        std::reverse(events.begin(), events.end());
        return Frame{a, std::move(events)};
    };

    std::vector<Frame> stack{frame_for(a0)};
    while (!stack.empty()) {
        auto& top = stack.back();
        if (top.pending.empty()) {
            stack.pop_back();
            continue;
        }
        const auto a = top.aggregate;
        const auto t = top.pending.back();
        top.pending.pop_back();

        auto next = saturate(lts, img(lts, sog.aggregates_[a].states, t));
        AggregateId target;
        if (auto known = sog.index_.find(next); known != sog.index_.end()) {
            target = known->second;
            sog.edges_.push_back({a, t, target});
            sog.succ_[a].emplace(t, target);
        } else {
            target = make_aggregate(std::move(next), a, t);
            sog.edges_.push_back({a, t, target});
            sog.succ_[a].emplace(t, target);
            stack.push_back(frame_for(target));
        }
    }
    return sog;
}

namespace {

std::string escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string export_dot(const Sog& sog, const Lts& lts, const DotOptions& options)
{
    std::ostringstream out;
    out << "digraph \"" << escape(options.graph_name) << "\" {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=box];\n";
    out << "  __start [shape=point];\n";
    for (const auto& agg : sog.aggregates()) {
        out << "  a" << agg.id << " [label=\"a" << agg.id;
        if (options.show_states) {
            out << "\\n{";
            bool first = true;
            for (auto q : agg.states) {
                out << (first ? "" : ",") << escape(lts.state_name(q));
                first = false;
            }
            out << "}";
        }
        out << "\"";
        if (options.mark_secret && agg.all_secret)
            out << ", style=filled, fillcolor=\"#f4a6a6\", peripheries=2";
        else if (options.mark_secret && agg.contains_secret)
            out << ", style=dashed";
        out << "];\n";
    }
    out << "  __start -> a" << sog.initial() << ";\n";
    for (const auto& agg : sog.aggregates()) {
        for (const auto& e : sog.out_edges(agg.id))
            out << "  a" << e.source << " -> a" << e.target << " [label=\"" << escape(lts.event_name(e.event))
                << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string export_dot(const Lts& lts, const SecretSpec& secret, std::string_view graph_name)
{
    std::ostringstream out;
    out << "digraph \"" << escape(graph_name) << "\" {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle];\n";
    out << "  __start [shape=point];\n";
    for (StateId q = 0; q < lts.state_count(); ++q) {
        out << "  q" << q << " [label=\"" << escape(lts.state_name(q)) << "\"";
        if (secret.contains(q))
            out << ", shape=doublecircle, style=filled, fillcolor=\"#f4a6a6\"";
        out << "];\n";
    }
    out << "  __start -> q" << lts.initial() << ";\n";
    for (StateId q = 0; q < lts.state_count(); ++q) {
        for (const auto& e : lts.successors(q)) {
            out << "  q" << q << " -> q" << e.target << " [label=\"" << escape(lts.event_name(e.event)) << "\"";
            if (!lts.observable(e.event))
                out << ", style=dashed";
            out << "];\n";
        }
    }
    out << "}\n";
    return out.str();
}

} // namespace opacity
