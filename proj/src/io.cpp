#include "opacity/io.hpp"

#include "opacity/errors.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace opacity {

namespace {

class Reader {
public:
    explicit Reader(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(const std::string& path, const std::string& message) const
    {
        throw ParseError(source_ + ": " + path + ": " + message);
    }

    const Json& object(const Json& j, const std::string& path, std::initializer_list<std::string_view> allowed) const
    {
        if (!j.is_object())
            fail(path, "expected an object");
        for (const auto& [key, value] : j.items()) {
            bool known = false;
            for (auto a : allowed)
                known = known || key == a;
            if (!known)
                fail(path + "." + key, "unknown field '" + key + "'");
        }
        return j;
    }

    const Json& array(const Json& j, const std::string& path) const
    {
        if (!j.is_array())
            fail(path, "expected an array");
        return j;
    }

    const Json& need(const Json& obj, const std::string& key, const std::string& path) const
    {
        auto it = obj.find(key);
        if (it == obj.end())
            fail(path, "missing field '" + key + "'");
        return *it;
    }

    std::string str(const Json& j, const std::string& path) const
    {
        if (!j.is_string())
            fail(path, "expected a string");
        return j.get<std::string>();
    }

    bool boolean(const Json& j, const std::string& path) const
    {
        if (!j.is_boolean())
            fail(path, "expected true or false");
        return j.get<bool>();
    }

    std::uint32_t count(const Json& j, const std::string& path, std::uint32_t min = 0) const
    {
        if (!j.is_number_integer() || j.get<std::int64_t>() < min || j.get<std::int64_t>() > 0xffffffffLL)
            fail(path, "expected an integer >= " + std::to_string(min));
        return static_cast<std::uint32_t>(j.get<std::int64_t>());
    }

    std::vector<std::string> strings(const Json& j, const std::string& path) const
    {
        std::vector<std::string> out;
        std::size_t i = 0;
        for (const auto& item : array(j, path))
            out.push_back(str(item, path + "[" + std::to_string(i++) + "]"));
        return out;
    }

    Marking marking(const Json& j, const std::string& path, std::vector<std::string>* zeros = nullptr) const
    {
        if (!j.is_object())
            fail(path, "expected an object of place -> count");
        Marking m;
        for (const auto& [place, value] : j.items()) {
            auto c = count(value, path + "." + place);
            if (c == 0 && zeros)
                zeros->push_back(place);
            m.set(place, c);
        }
        return m;
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
};

template <class F>
auto with_source(std::string_view source, F&& f)
{
    try {
        return f();
    } catch (const BoundError&) {
        throw;
    } catch (const ModelError& e) {
        throw ModelError(std::string(source) + ": " + e.what());
    }
}

Json marking_json(const Marking& m)
{
    Json out = Json::object();
    for (const auto& [place, count] : m.tokens())
        out[place] = count;
    return out;
}

Json word_json(std::span<const EventId> w, const Lts& lts)
{
    Json out = Json::array();
    for (auto e : w)
        out.push_back(lts.event_name(e));
    return out;
}

Json arcs_json(const std::vector<Arc>& arcs)
{
    Json out = Json::array();
    for (const auto& a : arcs)
        out.push_back({{"from", a.from}, {"to", a.to}, {"weight", a.weight}});
    return out;
}

} // namespace

NetModel parse_net_model(const Json& doc, std::string_view source)
{
    Reader r(source);
    r.object(doc, "$",
             {"places", "transitions", "arcs", "initial_marking", "final_marking", "interface", "secrets"});

    auto places = r.strings(r.need(doc, "places", "$"), "$.places");

    std::vector<Transition> transitions;
    std::size_t i = 0;
    for (const auto& t : r.array(r.need(doc, "transitions", "$"), "$.transitions")) {
        const auto path = "$.transitions[" + std::to_string(i++) + "]";
        r.object(t, path, {"id", "label", "observable"});
        Transition tr;
        tr.id = r.str(r.need(t, "id", path), path + ".id");
        tr.label = t.contains("label") ? r.str(t["label"], path + ".label") : tr.id;
        tr.observable = r.boolean(r.need(t, "observable", path), path + ".observable");
        transitions.push_back(std::move(tr));
    }

    std::vector<Arc> arcs;
    i = 0;
    for (const auto& a : r.array(r.need(doc, "arcs", "$"), "$.arcs")) {
        const auto path = "$.arcs[" + std::to_string(i++) + "]";
        r.object(a, path, {"from", "to", "weight"});
        Arc arc;
        arc.from = r.str(r.need(a, "from", path), path + ".from");
        arc.to = r.str(r.need(a, "to", path), path + ".to");
        arc.weight = a.contains("weight") ? r.count(a["weight"], path + ".weight", 1) : 1;
        arcs.push_back(std::move(arc));
    }

    auto initial = r.marking(r.need(doc, "initial_marking", "$"), "$.initial_marking");

    std::optional<Marking> final_marking;
    if (doc.contains("final_marking"))
        final_marking = r.marking(doc["final_marking"], "$.final_marking");

    std::optional<Interface> iface;
    if (doc.contains("interface")) {
        const auto& j = r.object(doc["interface"], "$.interface", {"inputs", "outputs"});
        Interface x;
        if (j.contains("inputs"))
            x.inputs = r.strings(j["inputs"], "$.interface.inputs");
        if (j.contains("outputs"))
            x.outputs = r.strings(j["outputs"], "$.interface.outputs");
        iface = std::move(x);
    }

    std::vector<SecretMarking> secrets;
    if (doc.contains("secrets")) {
        i = 0;
        for (const auto& s : r.array(doc["secrets"], "$.secrets")) {
            const auto path = "$.secrets[" + std::to_string(i++) + "]";
            r.object(s, path, {"marking", "exact"});
            SecretMarking sm;
            sm.exact = s.contains("exact") ? r.boolean(s["exact"], path + ".exact") : true;
            sm.marking = r.marking(r.need(s, "marking", path), path + ".marking", sm.exact ? nullptr : &sm.zero_places);
            secrets.push_back(std::move(sm));
        }
    }

    return with_source(source, [&] {
        NetModel model{PetriNet(std::move(places), std::move(transitions), std::move(arcs), std::move(initial)),
                       std::move(final_marking), std::move(iface), std::move(secrets)};
        if (model.final_marking)
            model.net.check_marking(*model.final_marking, "final marking");
        for (const auto& s : model.secrets) {
            model.net.check_marking(s.marking, "secret marking");
            for (const auto& p : s.zero_places) {
                if (!model.net.has_place(p))
                    throw ModelError("secret marking: unknown place '" + p + "'");
            }
        }
        if (model.is_owf())
            (void)model.owf();
        return model;
    });
}

LtsModel parse_lts_model(const Json& doc, std::string_view source)
{
    Reader r(source);
    r.object(doc, "$", {"states", "initial", "events", "edges", "secret_states"});
    auto states = r.strings(r.need(doc, "states", "$"), "$.states");
    auto initial = r.str(r.need(doc, "initial", "$"), "$.initial");

    LtsBuilder b;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (b.find_state(states[i]))
            r.fail("$.states[" + std::to_string(i) + "]", "duplicate state '" + states[i] + "'");
        b.add_state(states[i]);
    }
    if (!b.find_state(initial))
        r.fail("$.initial", "unknown state '" + initial + "'");
    b.set_initial(initial);

    std::set<std::string, std::less<>> events;
    std::size_t i = 0;
    for (const auto& e : r.array(r.need(doc, "events", "$"), "$.events")) {
        const auto path = "$.events[" + std::to_string(i++) + "]";
        r.object(e, path, {"id", "observable"});
        auto id = r.str(r.need(e, "id", path), path + ".id");
        if (!events.insert(id).second)
            r.fail(path + ".id", "duplicate event '" + id + "'");
        b.add_event(id, r.boolean(r.need(e, "observable", path), path + ".observable"));
    }

    i = 0;
    for (const auto& e : r.array(r.need(doc, "edges", "$"), "$.edges")) {
        const auto path = "$.edges[" + std::to_string(i++) + "]";
        r.object(e, path, {"from", "event", "to"});
        auto from = r.str(r.need(e, "from", path), path + ".from");
        auto event = r.str(r.need(e, "event", path), path + ".event");
        auto to = r.str(r.need(e, "to", path), path + ".to");
        if (!b.find_state(from))
            r.fail(path + ".from", "unknown state '" + from + "'");
        if (!b.find_state(to))
            r.fail(path + ".to", "unknown state '" + to + "'");
        if (!events.contains(event))
            r.fail(path + ".event", "unknown event '" + event + "'");
        b.add_edge(from, event, to);
    }

    std::vector<std::string> secret;
    if (doc.contains("secret_states"))
        secret = r.strings(doc["secret_states"], "$.secret_states");

    return with_source(source, [&] {
        LtsModel m{b.build(), {}};
        m.secret = SecretSpec::from_names(m.lts, secret);
        return m;
    });
}

LoadedModel parse_model(const Json& doc, std::string_view source)
{
    LoadedModel out;
    out.source = std::string(source);
    if (doc.is_object() && doc.contains("places"))
        out.net = parse_net_model(doc, source);
    else if (doc.is_object() && doc.contains("states"))
        out.lts = parse_lts_model(doc, source);
    else
        throw ParseError(std::string(source) + ": $: neither a net model (\"places\") nor an LTS (\"states\")");
    return out;
}

LoadedModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path.string() + ": cannot open file");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string() + ": invalid JSON: " + e.what());
    }
    return parse_model(doc, path.string());
}

Json to_json(const NetModel& model)
{
    Json doc;
    doc["places"] = model.net.places();
    doc["transitions"] = Json::array();
    for (const auto& t : model.net.transitions())
        doc["transitions"].push_back({{"id", t.id}, {"label", t.label}, {"observable", t.observable}});
    doc["arcs"] = arcs_json(model.net.arcs());
    doc["initial_marking"] = marking_json(model.net.initial_marking());
    if (model.final_marking)
        doc["final_marking"] = marking_json(*model.final_marking);
    if (model.interface)
        doc["interface"] = {{"inputs", model.interface->inputs}, {"outputs", model.interface->outputs}};
    doc["secrets"] = Json::array();
    for (const auto& s : model.secrets) {
        auto m = marking_json(s.marking);
        for (const auto& p : s.zero_places)
            m[p] = 0;
        doc["secrets"].push_back({{"marking", m}, {"exact", s.exact}});
    }
    return doc;
}

Json to_json(const LtsModel& model)
{
    const auto& lts = model.lts;
    Json doc;
    doc["states"] = Json::array();
    for (StateId q = 0; q < lts.state_count(); ++q)
        doc["states"].push_back(lts.state_name(q));
    doc["initial"] = lts.state_name(lts.initial());
    doc["events"] = Json::array();
    for (EventId e = 0; e < lts.event_count(); ++e)
        doc["events"].push_back({{"id", lts.event_name(e)}, {"observable", lts.observable(e)}});
    doc["edges"] = Json::array();
    for (StateId q = 0; q < lts.state_count(); ++q) {
        for (const auto& e : lts.successors(q))
            doc["edges"].push_back(
                {{"from", lts.state_name(q)}, {"event", lts.event_name(e.event)}, {"to", lts.state_name(e.target)}});
    }
    doc["secret_states"] = Json::array();
    for (auto q : model.secret.states())
        doc["secret_states"].push_back(lts.state_name(q));
    return doc;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, std::string_view text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ParseError(path.string() + ": cannot write file");
    out << text;
}

Json verdict_to_json(const Verdict& verdict, const Lts& lts)
{
    Json doc;
    doc["variant"] = std::string(to_string(verdict.variant));
    doc["k"] = verdict.k;
    doc["opaque"] = verdict.opaque;
    doc["counterexamples"] = Json::array();
    for (const auto& c : verdict.counterexamples) {
        doc["counterexamples"].push_back({{"trace", word_json(c.trace, lts)},
                                          {"source", c.source},
                                          {"event", c.event ? Json(lts.event_name(*c.event)) : Json(nullptr)},
                                          {"target", c.target},
                                          {"lag", c.lag}});
    }
    doc["stats"] = {{"states", verdict.stats.states},
                    {"aggregates", verdict.stats.aggregates},
                    {"estimator_states", verdict.stats.estimator_states}};
    return doc;
}

Json sog_to_json(const Sog& sog, const Lts& lts)
{
    Json doc;
    doc["aggregates"] = Json::array();
    for (const auto& a : sog.aggregates()) {
        Json states = Json::array();
        for (auto q : a.states)
            states.push_back(lts.state_name(q));
        doc["aggregates"].push_back({{"id", a.id}, {"states", states}, {"all_secret", a.all_secret}});
    }
    doc["initial"] = sog.initial();
    doc["edges"] = Json::array();
    for (const auto& a : sog.aggregates()) {
        for (const auto& e : sog.out_edges(a.id))
            doc["edges"].push_back({{"from", e.source}, {"event", lts.event_name(e.event)}, {"to", e.target}});
    }
    return doc;
}

Json patch_to_json(const EnforcementPatch& patch, const Lts& lts)
{
    Json doc;
    doc["new_states"] = Json::array();
    for (const auto& s : patch.new_states)
        doc["new_states"].push_back({{"state", s.state}, {"host_aggregate", s.host}});
    doc["new_transitions"] = patch.new_transitions;
    doc["new_places"] = patch.new_places;
    doc["removed_arcs"] = arcs_json(patch.removed_arcs);
    doc["added_arcs"] = arcs_json(patch.added_arcs);
    doc["incidence_updates"] = Json::array();
    for (const auto& u : patch.incidence_updates)
        doc["incidence_updates"].push_back({{"place", u.place}, {"transition", u.transition}, {"value", u.value}});
    doc["steps"] = Json::array();
    for (const auto& s : patch.steps) {
        Json step = {{"trace", word_json(s.trace, lts)},
                     {"aggregate", s.aggregate},
                     {"disclosing_state", s.disclosing_state}};
        if (!s.host_place.empty())
            step["host_place"] = s.host_place;
        step["sink_repair"] = s.sink_repair;
        doc["steps"].push_back(std::move(step));
    }
    return doc;
}

Json disclosures_to_json(const std::vector<Disclosure>& disclosures, const Lts& lts)
{
    Json out = Json::array();
    for (const auto& d : disclosures)
        out.push_back({{"observation", word_json(d.observation, lts)},
                       {"variant", std::string(to_string(d.variant))},
                       {"lag", d.lag}});
    return out;
}

Json diagnostics_to_json(const std::vector<Diagnostic>& diagnostics)
{
    Json out = Json::array();
    for (const auto& d : diagnostics)
        out.push_back({{"kind", std::string(to_string(d.kind))}, {"element", d.element}, {"message", d.message}});
    return out;
}

std::string verdict_to_text(const Verdict& verdict, const Lts& lts)
{
    std::ostringstream out;
    out << to_string(verdict.variant);
    if (verdict.variant != Variant::simple)
        out << " (K=" << verdict.k << ")";
    out << ": " << (verdict.opaque ? "opaque" : "NOT opaque") << "\n";
    out << "  states " << verdict.stats.states << ", aggregates " << verdict.stats.aggregates
        << ", estimator states " << verdict.stats.estimator_states << "\n";
    for (const auto& c : verdict.counterexamples) {
        out << "  disclosing: " << to_string(c.trace, lts) << "  [" << c.source << " -"
            << (c.event ? lts.event_name(*c.event) : std::string("ε")) << "-> " << c.target;
        if (verdict.variant != Variant::simple)
            out << ", lag " << c.lag;
        out << "]\n";
    }
    return out.str();
}

} // namespace opacity
