// opacity: verify and enforce opacity of Petri-net / LTS models.

#include "opacity/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Opacity verification and enforcement for Petri nets and LTSs"};
    app.require_subcommand(1);

    opacity::RunConfig config;
    std::string variant = "simple";
    std::string format = "json";
    std::string output;

    struct Spec {
        const char* name;
        const char* help;
    };
    const Spec specs[] = {
        {"check", "verify opacity; exit 0 if opaque, 1 if not"},
        {"enforce", "opacify a model for simple opacity; writes the patched model and a patch report"},
        {"export-dot", "write the SOG and LTS as Graphviz files"},
        {"oracle", "list disclosing observations found by the brute-force oracle"},
        {"validate", "check the workflow-net structure"},
    };
    for (const auto& s : specs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("model", config.model_path, "net or LTS model file (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
        sub->add_option("-o,--output", output, "output file (directory for export-dot)");
        if (std::string_view(s.name) == "check")
            sub->add_option("--variant", variant, "opacity variant")
                ->check(CLI::IsMember({"simple", "kweak", "kstrong", "k_weak", "k_strong"}));
        if (std::string_view(s.name) != "validate" && std::string_view(s.name) != "export-dot")
            sub->add_option("-k", config.k, "K for the K-step variants")->check(CLI::NonNegativeNumber);
        if (std::string_view(s.name) == "oracle")
            sub->add_option("--depth", config.oracle_depth, "observation length bound (default |Q|+K+2)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        auto code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto* chosen = app.get_subcommands().front();
    config.command = *opacity::parse_command(chosen->get_name());
    config.variant = *opacity::parse_variant(variant);
    config.format = format == "text" ? opacity::Format::text : opacity::Format::json;
    if (!output.empty())
        config.output_path = output;
    return opacity::run(config, std::cout, std::cerr);
}
