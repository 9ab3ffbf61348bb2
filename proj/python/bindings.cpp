#include "opacity/corpus.hpp"
#include "opacity/enforcer.hpp"
#include "opacity/errors.hpp"
#include "opacity/io.hpp"
#include "opacity/oracle.hpp"
#include "opacity/reachability.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace opacity;

namespace {

// Everything is exchanged as JSON text; the Python side does the (de)coding.
struct Subject {
    LoadedModel loaded;
    Lts lts;
    SecretSpec secret;
    std::optional<ReachabilityGraph> graph;
};

Subject subject(const std::string& text, const std::string& source)
{
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(source + ": " + e.what());
    }
    Subject s{parse_model(doc, source), {}, {}, std::nullopt};
    if (s.loaded.net) {
        s.graph = build_reachability_graph(*s.loaded.net);
        s.lts = s.graph->lts;
        s.secret = s.graph->secret;
    } else {
        s.lts = s.loaded.lts->lts;
        s.secret = s.loaded.lts->secret;
    }
    return s;
}

Variant variant_of(const std::string& name)
{
    auto v = parse_variant(name);
    if (!v)
        throw UsageError("unknown variant '" + name + "' (simple, k_weak, k_strong)");
    return *v;
}

std::string check_json(const std::string& text, const std::string& source, const std::string& variant, std::uint32_t k)
{
    auto s = subject(text, source);
    return verdict_to_json(check(s.lts, s.secret, variant_of(variant), k), s.lts).dump();
}

std::string sog_json(const std::string& text, const std::string& source)
{
    auto s = subject(text, source);
    return sog_to_json(build_sog(s.lts, s.secret), s.lts).dump();
}

std::string enforce_json(const std::string& text, const std::string& source)
{
    auto s = subject(text, source);
    auto before = check_simple(s.lts, s.secret);
    Json out;
    out["verdict_before"] = verdict_to_json(before.verdict, s.lts);
    if (s.loaded.net) {
        auto r = opacify(*s.loaded.net, *s.graph, before);
        out["model"] = to_json(r.model);
        out["patch"] = patch_to_json(r.patch, s.lts);
        out["verdict_after"] = verdict_to_json(r.verdict_after, r.graph.lts);
    } else {
        auto r = opacify(s.lts, s.secret, before);
        out["model"] = to_json(LtsModel{r.lts, r.secret});
        out["patch"] = patch_to_json(r.patch, s.lts);
        out["verdict_after"] = verdict_to_json(r.verdict_after, r.lts);
    }
    return out.dump();
}

std::string min_superlanguage_json(const std::string& text, const std::string& source)
{
    auto s = subject(text, source);
    auto c = check_simple(s.lts, s.secret);
    Json out = Json::array();
    for (const auto& w : compute_min_superlanguage(s.lts, s.secret, c.sog, c.verdict.counterexamples).traces)
        out.push_back(event_names(w, s.lts));
    return out.dump();
}

std::string oracle_json(const std::string& text, const std::string& source, std::uint32_t k,
                        std::optional<std::uint32_t> depth)
{
    auto s = subject(text, source);
    const auto d = depth.value_or(default_oracle_depth(s.lts, k));
    return Json{{"k", k}, {"depth", d}, {"disclosures", disclosures_to_json(oracle_disclosures(s.lts, s.secret, k, d), s.lts)}}
        .dump();
}

std::string validate_json(const std::string& text, const std::string& source)
{
    auto s = subject(text, source);
    if (!s.loaded.net)
        throw UsageError(source + ": validate needs a net model, not an LTS");
    const auto& m = *s.loaded.net;
    auto owf = m.is_owf() ? m.owf() : OwfNet(m.net, Interface{}, m.final_marking.value_or(Marking{}));
    return diagnostics_to_json(validate_wf_structure(owf)).dump();
}

std::pair<std::string, std::string> dot(const std::string& text, const std::string& source)
{
    auto s = subject(text, source);
    return {export_dot(build_sog(s.lts, s.secret), s.lts), export_dot(s.lts, s.secret)};
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Opacity verification and enforcement for Petri nets and labelled transition systems";

    auto base = py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<BoundError>(m, "BoundError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<EnforcementError>(m, "EnforcementError", PyExc_RuntimeError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<PackagingError>(m, "PackagingError", PyExc_RuntimeError);

    m.def("check", &check_json, py::arg("text"), py::arg("source"), py::arg("variant") = "simple", py::arg("k") = 1);
    m.def("sog", &sog_json, py::arg("text"), py::arg("source"));
    m.def("enforce", &enforce_json, py::arg("text"), py::arg("source"));
    m.def("min_superlanguage", &min_superlanguage_json, py::arg("text"), py::arg("source"));
    m.def("oracle", &oracle_json, py::arg("text"), py::arg("source"), py::arg("k") = 0,
          py::arg("depth") = py::none());
    m.def("validate", &validate_json, py::arg("text"), py::arg("source"));
    m.def("export_dot", &dot, py::arg("text"), py::arg("source"));
    m.def("corpus_names", [] { return std::vector<std::string>(corpus_names.begin(), corpus_names.end()); });
    m.def("corpus_path", [](const std::string& name) { return corpus_path(name).string(); });
}
