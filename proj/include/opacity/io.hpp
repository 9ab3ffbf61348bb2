#pragma once

#include "opacity/checker.hpp"
#include "opacity/enforcer.hpp"
#include "opacity/lts.hpp"
#include "opacity/net.hpp"
#include "opacity/sog.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace opacity {

using Json = nlohmann::ordered_json;

struct LtsModel {
    Lts lts;
    SecretSpec secret;

    friend bool operator==(const LtsModel&, const LtsModel&) = default;
};

/// A model file: either a net (has "places") or an LTS (has "states").
struct LoadedModel {
    std::string source;
    std::optional<NetModel> net;
    std::optional<LtsModel> lts;
};

/// `source` prefixes every error message. Unknown fields, wrong types and
/// missing keys raise ParseError naming the JSON path; semantic problems
/// (dangling arcs, unknown places) raise ModelError.
NetModel parse_net_model(const Json& doc, std::string_view source = "<net>");
LtsModel parse_lts_model(const Json& doc, std::string_view source = "<lts>");
LoadedModel parse_model(const Json& doc, std::string_view source);
LoadedModel load_model(const std::filesystem::path& path);

Json to_json(const NetModel& model);
Json to_json(const LtsModel& model);

/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& doc);
void write_file(const std::filesystem::path& path, std::string_view text);

Json verdict_to_json(const Verdict& verdict, const Lts& lts);
Json sog_to_json(const Sog& sog, const Lts& lts);
Json patch_to_json(const EnforcementPatch& patch, const Lts& lts);
Json disclosures_to_json(const std::vector<Disclosure>& disclosures, const Lts& lts);
Json diagnostics_to_json(const std::vector<Diagnostic>& diagnostics);

std::string verdict_to_text(const Verdict& verdict, const Lts& lts);

} // namespace opacity
