#include "opacity/net.hpp"

#include "opacity/errors.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace opacity {

Marking::Marking(std::initializer_list<std::pair<const std::string, std::uint32_t>> init)
{
    for (const auto& [place, count] : init)
        set(place, count);
}

Marking::Marking(const Map& tokens)
{
    for (const auto& [place, count] : tokens)
        set(place, count);
}

std::uint32_t Marking::operator[](std::string_view place) const
{
    auto it = tokens_.find(place);
    return it == tokens_.end() ? 0 : it->second;
}

void Marking::set(const std::string& place, std::uint32_t count)
{
    if (count == 0)
        tokens_.erase(place);
    else
        tokens_[place] = count;
}

std::string Marking::to_string() const
{
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (const auto& [place, count] : tokens_) {
        if (!first)
            out << ", ";
        first = false;
        out << place << ':' << count;
    }
    out << '}';
    return out.str();
}

PetriNet::PetriNet(std::vector<std::string> places, std::vector<Transition> transitions,
                   std::vector<Arc> arcs, Marking initial_marking)
    : places_(std::move(places)), transitions_(std::move(transitions)), arcs_(std::move(arcs)),
      initial_(std::move(initial_marking))
{
    for (std::size_t i = 0; i < places_.size(); ++i) {
        if (places_[i].empty())
            throw ModelError("empty place id");
        if (!place_index_.emplace(places_[i], i).second)
            throw ModelError("duplicate place '" + places_[i] + "'");
    }
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
        auto& t = transitions_[i];
        if (t.id.empty())
            throw ModelError("empty transition id");
        if (place_index_.contains(t.id))
            throw ModelError("id '" + t.id + "' used for both a place and a transition");
        if (!transition_index_.emplace(t.id, i).second)
            throw ModelError("duplicate transition '" + t.id + "'");
        if (t.label.empty())
            t.label = t.id;
    }

    pre_.resize(transitions_.size());
    post_.resize(transitions_.size());
    for (const auto& arc : arcs_) {
        const bool place_to_transition = has_place(arc.from) && has_transition(arc.to);
        const bool transition_to_place = has_transition(arc.from) && has_place(arc.to);
        if (!place_to_transition && !transition_to_place) {
            if (!has_place(arc.from) && !has_transition(arc.from))
                throw ModelError("arc " + arc.from + "->" + arc.to + ": unknown node '" + arc.from + "'");
            if (!has_place(arc.to) && !has_transition(arc.to))
                throw ModelError("arc " + arc.from + "->" + arc.to + ": unknown node '" + arc.to + "'");
            throw ModelError("arc " + arc.from + "->" + arc.to +
                             ": arcs must connect a place and a transition");
        }
        if (arc.weight == 0)
            throw ModelError("arc " + arc.from + "->" + arc.to + ": weight must be >= 1");
        if (!weights_.emplace(std::pair{arc.from, arc.to}, arc.weight).second)
            throw ModelError("duplicate arc " + arc.from + "->" + arc.to);
        if (place_to_transition)
            pre_[transition_index_.find(arc.to)->second].emplace_back(arc.from, arc.weight);
        else
            post_[transition_index_.find(arc.from)->second].emplace_back(arc.to, arc.weight);
    }
    for (auto& v : pre_)
        std::sort(v.begin(), v.end());
    for (auto& v : post_)
        std::sort(v.begin(), v.end());

    for (const auto& t : transitions_)
        sorted_transitions_.push_back(t.id);
    std::sort(sorted_transitions_.begin(), sorted_transitions_.end());

    check_marking(initial_, "initial marking");
}

std::size_t PetriNet::transition_slot(std::string_view id) const
{
    auto it = transition_index_.find(id);
    if (it == transition_index_.end())
        throw ModelError("unknown transition '" + std::string(id) + "'");
    return it->second;
}

const Transition& PetriNet::transition(std::string_view id) const
{
    return transitions_[transition_slot(id)];
}

std::uint32_t PetriNet::weight(std::string_view from, std::string_view to) const
{
    auto it = weights_.find(std::pair{std::string(from), std::string(to)});
    return it == weights_.end() ? 0 : it->second;
}

const std::vector<std::pair<std::string, std::uint32_t>>& PetriNet::preset(std::string_view t) const
{
    return pre_[transition_slot(t)];
}

const std::vector<std::pair<std::string, std::uint32_t>>& PetriNet::postset(std::string_view t) const
{
    return post_[transition_slot(t)];
}

void PetriNet::check_marking(const Marking& m, std::string_view what) const
{
    for (const auto& [place, count] : m.tokens()) {
        if (!has_place(place))
            throw ModelError(std::string(what) + ": unknown place '" + place + "'");
    }
}

bool is_enabled(const PetriNet& net, const Marking& m, std::string_view t)
{
    for (const auto& [place, w] : net.preset(t)) {
        if (m[place] < w)
            return false;
    }
    return true;
}

std::vector<std::string> enabled(const PetriNet& net, const Marking& m)
{
    net.check_marking(m, "marking");
    std::vector<std::string> result;
    for (const auto& t : net.sorted_transition_ids()) {
        if (is_enabled(net, m, t))
            result.push_back(t);
    }
    return result;
}

Marking fire(const PetriNet& net, const Marking& m, std::string_view t)
{
    net.check_marking(m, "marking");
    if (!is_enabled(net, m, t))
        throw UsageError("transition '" + std::string(t) + "' is not enabled at " + m.to_string());
    Marking next = m;
    for (const auto& [place, w] : net.preset(t))
        next.set(place, next[place] - w);
    for (const auto& [place, w] : net.postset(t))
        next.set(place, next[place] + w);
    return next;
}

IncidenceMatrix::IncidenceMatrix(const PetriNet& net)
{
    for (const auto& arc : net.arcs()) {
        if (net.has_place(arc.from))
            entries_[{arc.from, arc.to}] -= static_cast<int>(arc.weight);
        else
            entries_[{arc.to, arc.from}] += static_cast<int>(arc.weight);
    }
    std::erase_if(entries_, [](const auto& e) { return e.second == 0; });
}

int IncidenceMatrix::at(std::string_view place, std::string_view transition) const
{
    auto it = entries_.find({std::string(place), std::string(transition)});
    return it == entries_.end() ? 0 : it->second;
}

Marking IncidenceMatrix::apply(const Marking& m, const std::map<std::string, std::uint32_t>& counts) const
{
    std::map<std::string, long long> total;
    for (const auto& [place, count] : m.tokens())
        total[place] += count;
    for (const auto& [key, value] : entries_) {
        auto it = counts.find(key.second);
        if (it != counts.end())
            total[key.first] += static_cast<long long>(value) * it->second;
    }
    Marking result;
    for (const auto& [place, count] : total) {
        if (count < 0)
            throw UsageError("state equation yields a negative count on '" + place + "'");
        result.set(place, static_cast<std::uint32_t>(count));
    }
    return result;
}

IncidenceMatrix incidence_matrix(const PetriNet& net)
{
    return IncidenceMatrix(net);
}

bool Interface::contains(std::string_view place) const
{
    return std::find(inputs.begin(), inputs.end(), place) != inputs.end() ||
           std::find(outputs.begin(), outputs.end(), place) != outputs.end();
}

OwfNet::OwfNet(PetriNet core, Interface interface, Marking final_marking)
    : core_(std::move(core)), interface_(std::move(interface)), final_(std::move(final_marking))
{
    std::set<std::string> seen;
    for (const auto* side : {&interface_.inputs, &interface_.outputs}) {
        for (const auto& p : *side) {
            if (!core_.has_place(p))
                throw ModelError("interface place '" + p + "' is not a place of the net");
            if (!seen.insert(p).second)
                throw ModelError("interface place '" + p + "' listed twice (inputs and outputs must be disjoint)");
        }
    }
    core_.check_marking(final_, "final marking");
    for (const auto& [place, count] : core_.initial_marking().tokens()) {
        if (interface_.contains(place))
            throw ModelError("initial marking: interface place '" + place + "' cannot be marked");
    }
}

PetriNet OwfNet::inner_net() const
{
    std::vector<std::string> places;
    for (const auto& p : core_.places()) {
        if (!interface_.contains(p))
            places.push_back(p);
    }
    std::vector<Arc> arcs;
    for (const auto& arc : core_.arcs()) {
        if (!interface_.contains(arc.from) && !interface_.contains(arc.to))
            arcs.push_back(arc);
    }
    return PetriNet(std::move(places), core_.transitions(), std::move(arcs), core_.initial_marking());
}

namespace {

struct NodeGraph {
    std::vector<std::string> nodes;
    std::map<std::string, std::size_t, std::less<>> index;
    std::vector<std::vector<std::size_t>> succ;
    std::vector<std::vector<std::size_t>> pred;
    std::vector<bool> is_place;
};

NodeGraph structural_graph(const OwfNet& net)
{
    NodeGraph g;
    auto add = [&](const std::string& id, bool place) {
        g.index.emplace(id, g.nodes.size());
        g.nodes.push_back(id);
        g.is_place.push_back(place);
    };
    for (const auto& p : net.core().places()) {
        if (!net.interface().contains(p))
            add(p, true);
    }
    for (const auto& t : net.core().transitions())
        add(t.id, false);
    g.succ.resize(g.nodes.size());
    g.pred.resize(g.nodes.size());
    for (const auto& arc : net.core().arcs()) {
        auto from = g.index.find(arc.from);
        auto to = g.index.find(arc.to);
        if (from == g.index.end() || to == g.index.end())
            continue;
        g.succ[from->second].push_back(to->second);
        g.pred[to->second].push_back(from->second);
    }
    return g;
}

std::vector<bool> reach(const std::vector<std::vector<std::size_t>>& adj, std::size_t start)
{
    std::vector<bool> seen(adj.size(), false);
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
        auto n = queue.front();
        queue.pop_front();
        for (auto m : adj[n]) {
            if (!seen[m]) {
                seen[m] = true;
                queue.push_back(m);
            }
        }
    }
    return seen;
}

} // namespace

std::optional<std::string> OwfNet::sink_place() const
{
    auto g = structural_graph(*this);
    std::optional<std::string> sink;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (g.is_place[i] && g.succ[i].empty()) {
            if (sink)
                return std::nullopt;
            sink = g.nodes[i];
        }
    }
    return sink;
}

std::string_view to_string(Diagnostic::Kind kind)
{
    switch (kind) {
    case Diagnostic::Kind::no_source: return "no_source";
    case Diagnostic::Kind::multiple_sources: return "multiple_sources";
    case Diagnostic::Kind::no_sink: return "no_sink";
    case Diagnostic::Kind::multiple_sinks: return "multiple_sinks";
    case Diagnostic::Kind::off_path: return "off_path";
    }
    return "unknown";
}

std::vector<Diagnostic> validate_wf_structure(const OwfNet& net)
{
    auto g = structural_graph(net);
    std::vector<std::size_t> sources, sinks;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (!g.is_place[i])
            continue;
        if (g.pred[i].empty())
            sources.push_back(i);
        if (g.succ[i].empty())
            sinks.push_back(i);
    }

    std::vector<Diagnostic> out;
    auto names = [&](const std::vector<std::size_t>& ids) {
        std::string s;
        for (auto i : ids)
            s += (s.empty() ? "" : ", ") + g.nodes[i];
        return s;
    };
    if (sources.empty())
        out.push_back({Diagnostic::Kind::no_source, "", "no source place (every place has an incoming arc)"});
    else if (sources.size() > 1)
        out.push_back({Diagnostic::Kind::multiple_sources, names(sources),
                       "multiple source places: " + names(sources)});
    if (sinks.empty())
        out.push_back({Diagnostic::Kind::no_sink, "", "no sink place (every place has an outgoing arc)"});
    else if (sinks.size() > 1)
        out.push_back({Diagnostic::Kind::multiple_sinks, names(sinks), "multiple sink places: " + names(sinks)});

    if (sources.size() == 1 && sinks.size() == 1) {
        auto from_source = reach(g.succ, sources.front());
        auto to_sink = reach(g.pred, sinks.front());
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            if (!from_source[i] || !to_sink[i]) {
                out.push_back({Diagnostic::Kind::off_path, g.nodes[i],
                               std::string(g.is_place[i] ? "place '" : "transition '") + g.nodes[i] +
                                   "' is not on a path from '" + g.nodes[sources.front()] + "' to '" +
                                   g.nodes[sinks.front()] + "'"});
            }
        }
    }
    return out;
}

bool SecretMarking::matches(const Marking& m) const
{
    if (exact)
        return m == marking;
    for (const auto& [place, count] : marking.tokens()) {
        if (m[place] != count)
            return false;
    }
    for (const auto& place : zero_places) {
        if (m[place] != 0)
            return false;
    }
    return true;
}

OwfNet NetModel::owf() const
{
    if (!interface)
        throw UsageError("model is not an open workflow net (no interface)");
    return OwfNet(net, *interface, final_marking.value_or(Marking{}));
}

PetriNet NetModel::behavior_net() const
{
    return is_owf() ? owf().inner_net() : net;
}

} // namespace opacity
