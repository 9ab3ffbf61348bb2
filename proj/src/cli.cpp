#include "opacity/cli.hpp"

#include "opacity/enforcer.hpp"
#include "opacity/errors.hpp"
#include "opacity/io.hpp"
#include "opacity/oracle.hpp"
#include "opacity/reachability.hpp"

#include <cstdlib>

namespace opacity {

std::optional<Command> parse_command(std::string_view s)
{
    if (s == "check")
        return Command::check;
    if (s == "enforce")
        return Command::enforce;
    if (s == "export-dot")
        return Command::export_dot;
    if (s == "oracle")
        return Command::oracle;
    if (s == "validate")
        return Command::validate;
    return std::nullopt;
}

std::filesystem::path default_output_dir()
{
    if (const char* env = std::getenv("OPACITY_OUT_DIR"); env && *env)
        return env;
    return ".";
}

namespace {

// The behaviour to analyse, whatever the file kind.
struct Subject {
    LoadedModel loaded;
    Lts lts;
    SecretSpec secret;
    std::optional<ReachabilityGraph> graph;
};

Subject load_subject(const std::filesystem::path& path)
{
    Subject s{load_model(path), {}, {}, std::nullopt};
    if (s.loaded.net) {
        try {
            s.graph = build_reachability_graph(*s.loaded.net);
        } catch (const ModelError& e) {
            throw ModelError(path.string() + ": " + e.what());
        }
        s.lts = s.graph->lts;
        s.secret = s.graph->secret;
    } else {
        s.lts = s.loaded.lts->lts;
        s.secret = s.loaded.lts->secret;
    }
    return s;
}

void emit(const RunConfig& config, std::ostream& out, const std::string& text)
{
    if (config.output_path)
        write_file(*config.output_path, text);
    else
        out << text;
}

int do_check(const RunConfig& config, std::ostream& out)
{
    auto s = load_subject(config.model_path);
    auto verdict = check(s.lts, s.secret, config.variant, config.k);
    emit(config, out,
         config.format == Format::json ? dump(verdict_to_json(verdict, s.lts)) : verdict_to_text(verdict, s.lts));
    return verdict.opaque ? 0 : 1;
}

Json k_step_summary(const Lts& lts, const SecretSpec& secret, std::uint32_t k)
{
    return {{"k_weak", check_k_step_weak(lts, secret, k).opaque},
            {"k_strong", check_k_step_strong(lts, secret, k).opaque}};
}

int do_enforce(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    auto s = load_subject(config.model_path);
    auto before = check_simple(s.lts, s.secret);
    auto minsl = compute_min_superlanguage(s.lts, s.secret, before.sog, before.verdict.counterexamples);

    const auto stem = config.model_path.stem().string();
    const auto model_out = config.output_path.value_or(default_output_dir() / (stem + ".opacified.json"));
    const auto report_out = model_out.parent_path() / (model_out.stem().string() + ".patch.json");

    Json report;
    report["model"] = config.model_path.filename().string();
    report["verdict_before"] = verdict_to_json(before.verdict, s.lts);
    Json traces = Json::array();
    for (const auto& w : minsl.traces) {
        Json t = Json::array();
        for (auto e : w)
            t.push_back(s.lts.event_name(e));
        traces.push_back(t);
    }
    report["minimal_superlanguage"] = traces;

    Verdict after;
    std::string patched_text;
    Json k_after;
    if (s.loaded.net) {
        auto result = opacify(*s.loaded.net, *s.graph, before);
        auto patch = patch_to_json(result.patch, s.lts);
        for (auto& [key, value] : patch.items())
            report[key] = value;
        patched_text = dump(to_json(result.model));
        after = result.verdict_after;
        k_after = k_step_summary(result.graph.lts, result.graph.secret, config.k);
    } else {
        auto result = opacify(s.lts, s.secret, before);
        auto patch = patch_to_json(result.patch, s.lts);
        for (auto& [key, value] : patch.items())
            report[key] = value;
        patched_text = dump(to_json(LtsModel{result.lts, result.secret}));
        after = result.verdict_after;
        k_after = k_step_summary(result.lts, result.secret, config.k);
    }
    report["verdict_after"] = {{"opaque", after.opaque}, {"counterexamples", after.counterexamples.size()}};
    report["k_step"] = {{"k", config.k}, {"before", k_step_summary(s.lts, s.secret, config.k)}, {"after", k_after}};
    report["outputs"] = {{"model", model_out.string()}, {"report", report_out.string()}};

    if (!after.opaque)
        throw EnforcementError("patched model is still not opaque");

    write_file(model_out, patched_text);
    write_file(report_out, dump(report));
    if (config.format == Format::json) {
        out << dump(report);
    } else {
        out << "enforce " << config.model_path.string() << ": "
            << (before.verdict.opaque ? "already opaque (identity patch)" : "opacified") << "\n";
        out << "  new transitions: " << report["new_transitions"].size()
            << ", new places: " << report["new_places"].size() << "\n";
        out << "  patched model: " << model_out.string() << "\n  report: " << report_out.string() << "\n";
    }
    if (before.verdict.opaque) {
        err << "note: " << config.model_path.string() << " is already opaque; identity patch written\n";
        return 1;
    }
    return 0;
}

int do_export_dot(const RunConfig& config, std::ostream& out)
{
    auto s = load_subject(config.model_path);
    auto sog = build_sog(s.lts, s.secret);
    const auto stem = config.model_path.stem().string();
    const auto dir = config.output_path.value_or(default_output_dir());
    const auto sog_path = dir / (stem + ".sog.dot");
    const auto lts_path = dir / (stem + ".lts.dot");
    write_file(sog_path, export_dot(sog, s.lts, DotOptions{stem + "_sog"}));
    write_file(lts_path, export_dot(s.lts, s.secret, stem + "_lts"));
    if (config.format == Format::json)
        out << dump({{"sog", sog_path.string()}, {"lts", lts_path.string()}, {"aggregates", sog.aggregates().size()}});
    else
        out << sog_path.string() << "\n" << lts_path.string() << "\n";
    return 0;
}

int do_oracle(const RunConfig& config, std::ostream& out)
{
    auto s = load_subject(config.model_path);
    const auto depth = config.oracle_depth.value_or(default_oracle_depth(s.lts, config.k));
    auto found = oracle_disclosures(s.lts, s.secret, config.k, depth);
    if (config.format == Format::json) {
        emit(config, out, dump({{"k", config.k}, {"depth", depth}, {"disclosures", disclosures_to_json(found, s.lts)}}));
    } else {
        std::string text;
        for (const auto& d : found)
            text += std::string(to_string(d.variant)) + " lag " + std::to_string(d.lag) + ": " +
                    to_string(d.observation, s.lts) + "\n";
        emit(config, out, text);
    }
    return 0;
}

int do_validate(const RunConfig& config, std::ostream& out)
{
    auto loaded = load_model(config.model_path);
    if (!loaded.net)
        throw UsageError(config.model_path.string() + ": validate needs a net model, not an LTS");
    const auto& model = *loaded.net;
    auto owf = model.is_owf() ? model.owf() : OwfNet(model.net, Interface{}, model.final_marking.value_or(Marking{}));
    auto diagnostics = validate_wf_structure(owf);
    if (config.format == Format::json) {
        emit(config, out,
             dump({{"model", config.model_path.filename().string()},
                   {"valid", diagnostics.empty()},
                   {"diagnostics", diagnostics_to_json(diagnostics)}}));
    } else {
        std::string text = config.model_path.string() + (diagnostics.empty() ? ": valid WF structure\n" : ":\n");
        for (const auto& d : diagnostics)
            text += "  " + std::string(to_string(d.kind)) + " " + d.element + ": " + d.message + "\n";
        emit(config, out, text);
    }
    return diagnostics.empty() ? 0 : 1;
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        switch (config.command) {
        case Command::check: return do_check(config, out);
        case Command::enforce: return do_enforce(config, out, err);
        case Command::export_dot: return do_export_dot(config, out);
        case Command::oracle: return do_oracle(config, out);
        case Command::validate: return do_validate(config, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return 2;
}

} // namespace opacity
