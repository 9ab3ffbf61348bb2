#include "opacity/enforcer.hpp"

#include "opacity/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>

namespace opacity {

SuperLanguageAdditions compute_min_superlanguage(const Lts& lts, const SecretSpec& secret, const Sog& sog,
                                                 const std::vector<CounterExample>& counterexamples)
{
    // The SOG already carries the secret flags; lts/secret/counterexamples
    // are part of the signature for symmetry with the verification phase.
    (void)lts;
    (void)secret;
    (void)counterexamples;
    SuperLanguageAdditions out;
    for (const auto& agg : sog.aggregates()) {
        if (agg.all_secret)
            out.traces.push_back(sog.discovery_trace(agg.id));
    }
    return out;
}

namespace {

std::string fresh(const std::string& base, const std::function<bool(const std::string&)>& taken)
{
    if (!taken(base))
        return base;
    for (int i = 1;; ++i) {
        auto candidate = base + "_" + std::to_string(i);
        if (!taken(candidate))
            return candidate;
    }
}

void match_witnesses(const SuperLanguageAdditions& minsl, const std::vector<CounterExample>& cexs, const Lts& lts)
{
    for (const auto& cex : cexs) {
        if (std::find(minsl.traces.begin(), minsl.traces.end(), cex.trace) == minsl.traces.end())
            throw EnforcementError("counterexample trace '" + to_string(cex.trace, lts) +
                                   "' is not a minimal super-language witness");
    }
}

// The highest-id state of the aggregate; for oWF-nets the highest-id one
// that marks the sink, if any.
StateId disclosing_state(const Aggregate& agg, const ReachabilityGraph* graph, const std::optional<std::string>& sink)
{
    const auto members = agg.states.members();
    if (graph && sink) {
        for (auto it = members.rbegin(); it != members.rend(); ++it) {
            if (graph->markings[*it][*sink] > 0)
                return *it;
        }
    }
    return members.back();
}

SinkRepair sink_rewiring(const std::vector<Arc>& arcs, const std::string& t, const std::string& sink,
                         const std::string& t_new, std::string p_new)
{
    auto it = std::find_if(arcs.begin(), arcs.end(), [&](const Arc& a) { return a.from == t && a.to == sink; });
    if (it == arcs.end())
        throw UsageError("no arc (" + t + ", " + sink + ") to rewire");
    SinkRepair r;
    r.removed.push_back(*it);
    r.added = {Arc{t, p_new, 1}, Arc{p_new, t_new, 1}, Arc{t_new, sink, 1}};
    r.new_place = std::move(p_new);
    return r;
}

std::vector<IncidenceUpdate> incidence_diff(const PetriNet& before, const PetriNet& after)
{
    const auto ma = incidence_matrix(before);
    const auto mb = incidence_matrix(after);
    const auto& a = ma.nonzero();
    const auto& b = mb.nonzero();
    std::set<std::pair<std::string, std::string>> keys;
    for (const auto& [k, v] : a)
        keys.insert(k);
    for (const auto& [k, v] : b)
        keys.insert(k);
    std::vector<IncidenceUpdate> out;
    for (const auto& k : keys) {
        auto old_v = a.contains(k) ? a.at(k) : 0;
        auto new_v = b.contains(k) ? b.at(k) : 0;
        if (old_v != new_v)
            out.push_back({k.first, k.second, new_v});
    }
    return out;
}

bool is_secret(const Marking& m, const std::vector<SecretMarking>& secrets)
{
    return std::any_of(secrets.begin(), secrets.end(), [&](const SecretMarking& s) { return s.matches(m); });
}

} // namespace

SinkRepair owf_final_place_repair(const OwfNet& net, std::string_view marking_transition,
                                  std::string_view new_transition, std::string new_place)
{
    auto sink = net.sink_place();
    if (!sink)
        throw ModelError("structural error: oWF-net has no single sink place");
    return sink_rewiring(net.core().arcs(), std::string(marking_transition), *sink, std::string(new_transition),
                         std::move(new_place));
}

NetEnforcement opacify(const NetModel& model, const ReachabilityGraph& graph, const SimpleCheck& check,
                       const ExplorationLimits& limits)
{
    const auto& lts = graph.lts;
    const auto& sog = check.sog;
    NetEnforcement result{model, graph, sog, lts, graph.secret, {}, check.verdict};
    if (check.verdict.opaque)
        return result;

    const auto& cexs = check.verdict.counterexamples;
    match_witnesses(compute_min_superlanguage(lts, graph.secret, sog, cexs), cexs, lts);

    std::optional<std::string> sink;
    if (model.is_owf()) {
        sink = model.owf().sink_place();
        if (!sink)
            throw ModelError("structural error: oWF-net has no single sink place");
    }
    const Interface iface = model.interface.value_or(Interface{});

    auto places = model.net.places();
    auto transitions = model.net.transitions();
    auto arcs = model.net.arcs();
    std::set<std::string> node_ids(places.begin(), places.end());
    for (const auto& t : transitions)
        node_ids.insert(t.id);
    auto node_taken = [&](const std::string& s) { return node_ids.contains(s); };

    std::set<std::string> state_names;
    for (StateId q = 0; q < lts.state_count(); ++q)
        state_names.insert(lts.state_name(q));
    auto state_taken = [&](const std::string& s) { return state_names.contains(s); };

    std::set<Marking> known(graph.markings.begin(), graph.markings.end());
    std::map<Marking, std::string> designated;

    // Direct LTS patch, kept as edge lists over names.
    std::vector<std::string> extra_states;
    std::vector<std::string> extra_events;
    std::set<std::tuple<StateId, EventId, StateId>> dropped;
    std::vector<std::tuple<std::string, std::string, std::string>> extra_edges;

    EnforcementPatch& patch = result.patch;
    std::size_t ordinal = 0;
    for (auto it = cexs.rbegin(); it != cexs.rend(); ++it) {
        const auto& cex = *it;
        ++ordinal;
        const auto suffix = "__op" + std::to_string(ordinal);
        const auto& agg = sog.aggregate(cex.target);
        const StateId q = disclosing_state(agg, &graph, sink);
        const Marking& mq = graph.markings[q];
        const auto t_new = fresh((cex.event ? lts.event_name(*cex.event) : std::string("eps")) + suffix, node_taken);

        std::vector<std::pair<std::string, std::uint32_t>> candidates;
        for (const auto& [p, c] : mq.tokens()) {
            if (!iface.contains(p))
                candidates.emplace_back(p, c);
        }
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });

        // Transitions that put the sink token of q there along the witness.
        auto markers = [&] {
            std::set<std::string> out;
            for (auto s : agg.states) {
                for (const auto& e : lts.successors(s)) {
                    if (e.target == q && !lts.observable(e.event))
                        out.insert(lts.event_name(e.event));
                }
            }
            if (cex.event) {
                for (auto s : sog.aggregate(cex.source).states) {
                    for (const auto& e : lts.successors(s)) {
                        if (e.target == q && e.event == *cex.event)
                            out.insert(lts.event_name(e.event));
                    }
                }
            }
            return out;
        };

        bool applied = false;
        for (const auto& [p, count] : candidates) {
            const bool sink_host = sink && p == *sink;
            Marking qn = mq;
            qn.set(p, count - 1);
            std::string p_new;
            std::string marker;
            if (sink_host) {
                for (const auto& t : markers()) {
                    auto arc = std::find_if(arcs.begin(), arcs.end(),
                                            [&](const Arc& a) { return a.from == t && a.to == p; });
                    if (arc != arcs.end() && arc->weight == 1) {
                        marker = t;
                        break;
                    }
                }
                if (marker.empty())
                    continue;
                p_new = fresh(p + suffix, node_taken);
                qn.set(p_new, 1);
            } else if (sink) {
                qn.set(*sink, qn[*sink] + 1);
            } else {
                p_new = fresh(p + suffix, node_taken);
                qn.set(p_new, 1);
            }
            if (known.contains(qn) || is_secret(qn, model.secrets))
                continue;

            const auto q_name = fresh(lts.state_name(q) + suffix, state_taken);
            state_names.insert(q_name);
            node_ids.insert(t_new);
            transitions.push_back({t_new, t_new, false});
            patch.new_transitions.push_back(t_new);

            std::vector<Arc> added;
            if (sink_host) {
                auto repair = sink_rewiring(arcs, marker, p, t_new, p_new);
                arcs.erase(std::remove(arcs.begin(), arcs.end(), repair.removed.front()), arcs.end());
                patch.removed_arcs.push_back(repair.removed.front());
                added = repair.added;
            } else if (sink) {
                added = {Arc{p, t_new, 1}, Arc{t_new, *sink, 1}};
            } else {
                added = {Arc{p, t_new, 1}, Arc{t_new, p_new, 1}};
            }
            if (!p_new.empty()) {
                node_ids.insert(p_new);
                places.push_back(p_new);
                patch.new_places.push_back(p_new);
            }
            arcs.insert(arcs.end(), added.begin(), added.end());
            patch.added_arcs.insert(patch.added_arcs.end(), added.begin(), added.end());

            patch.new_states.push_back({q_name, agg.id});
            patch.steps.push_back({cex.trace, agg.id, lts.state_name(q), p, sink_host});
            known.insert(qn);
            designated.emplace(qn, q_name);

            extra_states.push_back(q_name);
            extra_events.push_back(t_new);
            if (sink_host) {
                for (StateId s = 0; s < lts.state_count(); ++s) {
                    for (const auto& e : lts.successors(s)) {
                        if (e.target == q && lts.event_name(e.event) == marker) {
                            dropped.emplace(s, e.event, q);
                            extra_edges.emplace_back(lts.state_name(s), marker, q_name);
                        }
                    }
                }
                extra_edges.emplace_back(q_name, t_new, lts.state_name(q));
            } else {
                extra_edges.emplace_back(lts.state_name(q), t_new, q_name);
            }
            applied = true;
            break;
        }
        if (!applied)
            throw EnforcementError("no admissible host place for disclosing state '" + lts.state_name(q) +
                                   "' (marking " + mq.to_string() + ", trace '" + to_string(cex.trace, lts) + "')");
    }

    result.model.net = PetriNet(places, transitions, arcs, model.net.initial_marking());
    patch.incidence_updates = incidence_diff(model.net, result.model.net);

    // Rebuild: original markings keep their names, designated ones get
    // theirs, anything else is named after its BFS parent.
    std::map<Marking, std::string> original;
    for (StateId q = 0; q < lts.state_count(); ++q)
        original.emplace(graph.markings[q], lts.state_name(q));
    std::vector<std::string> names;
    std::size_t counter = ordinal;
    StateNamer namer = [&](const Marking& m, std::size_t, std::optional<StateId> parent) {
        std::string name;
        if (auto o = original.find(m); o != original.end())
            name = o->second;
        else if (auto d = designated.find(m); d != designated.end())
            name = d->second;
        else {
            name = fresh(names.at(*parent) + "__op" + std::to_string(++counter), state_taken);
            state_names.insert(name);
        }
        names.push_back(name);
        return name;
    };
    result.graph = build_reachability_graph(result.model, limits, namer);
    auto after = check_simple(result.graph.lts, result.graph.secret);
    result.sog = std::move(after.sog);
    result.verdict_after = std::move(after.verdict);

    LtsBuilder direct;
    for (StateId q = 0; q < lts.state_count(); ++q)
        direct.add_state(lts.state_name(q));
    for (const auto& s : extra_states)
        direct.add_state(s);
    for (EventId e = 0; e < lts.event_count(); ++e)
        direct.add_event(lts.event_name(e), lts.observable(e));
    for (const auto& e : extra_events)
        direct.add_event(e, false);
    direct.set_initial(lts.initial());
    for (StateId q = 0; q < lts.state_count(); ++q) {
        for (const auto& e : lts.successors(q)) {
            if (!dropped.contains({q, e.event, e.target}))
                direct.add_edge(q, lts.event_name(e.event), e.target);
        }
    }
    for (const auto& [from, event, to] : extra_edges)
        direct.add_edge(from, event, to);
    result.direct_lts = direct.build();
    result.direct_secret = SecretSpec(result.direct_lts, graph.secret.states());
    return result;
}

NetEnforcement opacify(const NetModel& model, const ExplorationLimits& limits)
{
    auto graph = build_reachability_graph(model, limits);
    auto check = check_simple(graph.lts, graph.secret);
    return opacify(model, graph, check, limits);
}

LtsEnforcement opacify(const Lts& lts, const SecretSpec& secret, const SimpleCheck& check)
{
    if (check.verdict.opaque)
        return {lts, secret, check.sog, {}, check.verdict};

    const auto& cexs = check.verdict.counterexamples;
    match_witnesses(compute_min_superlanguage(lts, secret, check.sog, cexs), cexs, lts);

    std::set<std::string> state_names;
    for (StateId q = 0; q < lts.state_count(); ++q)
        state_names.insert(lts.state_name(q));
    std::set<std::string> event_names;
    for (EventId e = 0; e < lts.event_count(); ++e)
        event_names.insert(lts.event_name(e));

    LtsEnforcement result;
    auto builder = to_builder(lts);
    std::size_t ordinal = 0;
    for (auto it = cexs.rbegin(); it != cexs.rend(); ++it) {
        const auto& cex = *it;
        ++ordinal;
        const auto suffix = "__op" + std::to_string(ordinal);
        const auto& agg = check.sog.aggregate(cex.target);
        const StateId q = disclosing_state(agg, nullptr, std::nullopt);
        const auto q_name = fresh(lts.state_name(q) + suffix, [&](const std::string& s) { return state_names.contains(s); });
        const auto t_new = fresh((cex.event ? lts.event_name(*cex.event) : std::string("eps")) + suffix,
                                 [&](const std::string& s) { return event_names.contains(s); });
        state_names.insert(q_name);
        event_names.insert(t_new);
        auto q_new = builder.add_state(q_name);
        builder.add_event(t_new, false);
        builder.add_edge(q, t_new, q_new);
        result.patch.new_states.push_back({q_name, agg.id});
        result.patch.new_transitions.push_back(t_new);
        result.patch.steps.push_back({cex.trace, agg.id, lts.state_name(q), "", false});
    }
    result.lts = builder.build();
    result.secret = SecretSpec(result.lts, secret.states());
    auto after = check_simple(result.lts, result.secret);
    result.sog = std::move(after.sog);
    result.verdict_after = std::move(after.verdict);
    return result;
}

NetModel revert_patch(const NetModel& patched, const EnforcementPatch& patch)
{
    auto listed = [](const std::vector<std::string>& v, const std::string& s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };
    std::vector<std::string> places;
    for (const auto& p : patched.net.places()) {
        if (!listed(patch.new_places, p))
            places.push_back(p);
    }
    std::vector<Transition> transitions;
    for (const auto& t : patched.net.transitions()) {
        if (!listed(patch.new_transitions, t.id))
            transitions.push_back(t);
    }
    std::vector<Arc> arcs;
    for (const auto& a : patched.net.arcs()) {
        if (std::find(patch.added_arcs.begin(), patch.added_arcs.end(), a) == patch.added_arcs.end())
            arcs.push_back(a);
    }
    arcs.insert(arcs.end(), patch.removed_arcs.begin(), patch.removed_arcs.end());

    NetModel out = patched;
    out.net = PetriNet(std::move(places), std::move(transitions), std::move(arcs), patched.net.initial_marking());
    return out;
}

bool same_structure(const NetModel& a, const NetModel& b)
{
    auto sorted = [](auto v, auto key) {
        std::sort(v.begin(), v.end(), [&](const auto& x, const auto& y) { return key(x) < key(y); });
        return v;
    };
    auto id = [](const auto& x) { return x; };
    auto tid = [](const Transition& t) { return t.id; };
    return sorted(a.net.places(), id) == sorted(b.net.places(), id) &&
           sorted(a.net.transitions(), tid) == sorted(b.net.transitions(), tid) &&
           sorted(a.net.arcs(), id) == sorted(b.net.arcs(), id) &&
           a.net.initial_marking() == b.net.initial_marking() && a.final_marking == b.final_marking &&
           a.interface == b.interface && a.secrets == b.secrets;
}

} // namespace opacity
