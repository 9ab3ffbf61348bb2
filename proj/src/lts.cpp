#include "opacity/lts.hpp"

#include "opacity/errors.hpp"

#include <algorithm>

namespace opacity {

std::optional<StateId> Lts::find_state(std::string_view name) const
{
    auto it = state_index_.find(name);
    if (it == state_index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<EventId> Lts::find_event(std::string_view id) const
{
    auto it = event_index_.find(id);
    if (it == event_index_.end())
        return std::nullopt;
    return it->second;
}

std::vector<EventId> Lts::observable_events() const
{
    std::vector<EventId> out;
    for (EventId e = 0; e < events_.size(); ++e) {
        if (events_[e].observable)
            out.push_back(e);
    }
    return out;
}

std::vector<EventId> Lts::unobservable_events() const
{
    std::vector<EventId> out;
    for (EventId e = 0; e < events_.size(); ++e) {
        if (!events_[e].observable)
            out.push_back(e);
    }
    return out;
}

std::size_t Lts::edge_count() const
{
    std::size_t n = 0;
    for (const auto& s : succ_)
        n += s.size();
    return n;
}

StateId LtsBuilder::add_state(std::string name)
{
    if (name.empty())
        throw ModelError("empty state id");
    auto id = static_cast<StateId>(names_.size());
    if (!index_.emplace(name, id).second)
        throw ModelError("duplicate state '" + name + "'");
    names_.push_back(std::move(name));
    return id;
}

void LtsBuilder::add_event(std::string id, bool observable)
{
    if (id.empty())
        throw ModelError("empty event id");
    auto [it, inserted] = events_.emplace(std::move(id), observable);
    if (!inserted && it->second != observable)
        throw ModelError("event '" + it->first + "' declared both observable and unobservable");
}

void LtsBuilder::set_initial(std::string_view name)
{
    auto q = find_state(name);
    if (!q)
        throw ModelError("initial state '" + std::string(name) + "' is not a state");
    initial_ = *q;
}

void LtsBuilder::add_edge(StateId from, std::string_view event, StateId to)
{
    if (from >= names_.size() || to >= names_.size())
        throw ModelError("edge endpoint out of range");
    if (!events_.contains(event))
        throw ModelError("edge label '" + std::string(event) + "' is not a declared event");
    edges_.emplace_back(from, std::string(event), to);
}

void LtsBuilder::add_edge(std::string_view from, std::string_view event, std::string_view to)
{
    auto f = find_state(from);
    if (!f)
        throw ModelError("edge source '" + std::string(from) + "' is not a state");
    auto t = find_state(to);
    if (!t)
        throw ModelError("edge target '" + std::string(to) + "' is not a state");
    add_edge(*f, event, *t);
}

std::optional<StateId> LtsBuilder::find_state(std::string_view name) const
{
    auto it = index_.find(name);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

Lts LtsBuilder::build() const
{
    if (names_.empty())
        throw ModelError("an LTS needs at least one state");
    if (!initial_)
        throw ModelError("no initial state");

    Lts lts;
    lts.state_names_ = names_;
    lts.state_index_ = index_;
    lts.initial_ = *initial_;
    for (const auto& [id, observable] : events_) {
        lts.event_index_.emplace(id, static_cast<EventId>(lts.events_.size()));
        lts.events_.push_back({id, observable});
    }
    lts.succ_.resize(names_.size());
    for (const auto& [from, event, to] : edges_)
        lts.succ_[from].push_back({lts.event_index_.find(event)->second, to});
    for (auto& s : lts.succ_) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return lts;
}

LtsBuilder to_builder(const Lts& lts)
{
    LtsBuilder b;
    for (StateId q = 0; q < lts.state_count(); ++q)
        b.add_state(lts.state_name(q));
    for (EventId e = 0; e < lts.event_count(); ++e)
        b.add_event(lts.event(e).id, lts.event(e).observable);
    b.set_initial(lts.initial());
    for (StateId q = 0; q < lts.state_count(); ++q) {
        for (const auto& edge : lts.successors(q))
            b.add_edge(q, lts.event_name(edge.event), edge.target);
    }
    return b;
}

SecretSpec::SecretSpec(const Lts& lts, std::vector<StateId> states) : mask_(lts.state_count(), false)
{
    for (auto q : states) {
        if (q >= lts.state_count())
            throw ModelError("secret state " + std::to_string(q) + " is not a state of the LTS");
        mask_[q] = true;
    }
    for (StateId q = 0; q < mask_.size(); ++q) {
        if (mask_[q])
            states_.push_back(q);
    }
}

SecretSpec SecretSpec::from_names(const Lts& lts, std::span<const std::string> names)
{
    std::vector<StateId> ids;
    for (const auto& name : names) {
        auto q = lts.find_state(name);
        if (!q)
            throw ModelError("secret state '" + name + "' is not a state of the LTS");
        ids.push_back(*q);
    }
    return SecretSpec(lts, std::move(ids));
}

Word project(std::span<const EventId> w, const Lts& lts)
{
    Word out;
    for (auto e : w) {
        if (lts.observable(e))
            out.push_back(e);
    }
    return out;
}

std::vector<std::string> project(std::span<const std::string> w, const std::set<std::string, std::less<>>& observables)
{
    std::vector<std::string> out;
    for (const auto& e : w) {
        if (observables.contains(e))
            out.push_back(e);
    }
    return out;
}

std::string to_string(std::span<const EventId> w, const Lts& lts, std::string_view separator)
{
    if (w.empty())
        return "ε";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            out += separator;
        out += lts.event_name(w[i]);
    }
    return out;
}

std::vector<std::string> event_names(std::span<const EventId> w, const Lts& lts)
{
    std::vector<std::string> out;
    out.reserve(w.size());
    for (auto e : w)
        out.push_back(lts.event_name(e));
    return out;
}

Word word_from_names(std::span<const std::string> names, const Lts& lts)
{
    Word w;
    for (const auto& n : names) {
        auto e = lts.find_event(n);
        if (!e)
            throw ModelError("unknown event '" + n + "'");
        w.push_back(*e);
    }
    return w;
}

void enumerate_runs(const Lts& lts, std::size_t max_len, const std::function<bool(const Word&, StateId)>& visit)
{
    std::vector<std::pair<Word, StateId>> level{{Word{}, lts.initial()}};
    for (std::size_t len = 0;; ++len) {
        for (const auto& [w, q] : level) {
            if (!visit(w, q))
                return;
        }
        if (len == max_len)
            return;
        std::vector<std::pair<Word, StateId>> next;
        for (const auto& [w, q] : level) {
            for (const auto& edge : lts.successors(q)) {
                Word extended = w;
                extended.push_back(edge.event);
                next.emplace_back(std::move(extended), edge.target);
            }
        }
        if (next.empty())
            return;
        // Stable sort keeps path order among runs sharing a word.
        std::stable_sort(next.begin(), next.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        level = std::move(next);
    }
}

std::vector<std::pair<Word, StateId>> enumerate_runs(const Lts& lts, std::size_t max_len)
{
    std::vector<std::pair<Word, StateId>> out;
    enumerate_runs(lts, max_len, [&](const Word& w, StateId q) {
        out.emplace_back(w, q);
        return true;
    });
    return out;
}

} // namespace opacity
