#include "doctest.h"

#include "support.hpp"

#include "opacity/corpus.hpp"
#include "opacity/errors.hpp"
#include "opacity/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace opacity;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string error_of(const Json& doc)
{
    try {
        parse_model(doc, "m.json");
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("corpus files round-trip byte for byte")
{
    for (auto name : corpus_names) {
        INFO(name);
        auto path = corpus_path(name);
        auto loaded = load_model(path);
        REQUIRE(loaded.net);
        CHECK(dump(to_json(*loaded.net)) == slurp(path));
        CHECK(parse_net_model(to_json(*loaded.net)) == *loaded.net);
    }
}

TEST_CASE("unknown fields name their JSON path")
{
    auto doc = to_json(load_corpus().at("br"));
    doc["transitions"][1]["colour"] = "red";
    auto msg = error_of(doc);
    CHECK(msg.find("m.json") != std::string::npos);
    CHECK(msg.find("$.transitions[1]") != std::string::npos);
    CHECK(msg.find("colour") != std::string::npos);
    CHECK_THROWS_AS(parse_model(doc, "m.json"), ParseError);

    auto top = to_json(load_corpus().at("br"));
    top["extra"] = 1;
    CHECK(error_of(top).find("unknown field 'extra'") != std::string::npos);
}

TEST_CASE("malformed input")
{
    CHECK_THROWS_AS(parse_model(Json::parse("[1, 2]"), "x"), ParseError);
    CHECK_THROWS_AS(parse_model(Json::parse(R"({"places": "P"})"), "x"), ParseError);
    auto doc = to_json(load_corpus().at("br"));
    doc["arcs"][0]["to"] = "nowhere";
    CHECK_THROWS_AS(parse_model(doc, "x"), ModelError);
    CHECK(error_of(doc).find("m.json") != std::string::npos);

    const auto dir = fs::temp_directory_path() / "opacity_io_test";
    fs::create_directories(dir);
    write_file(dir / "bad.json", "{ not json");
    CHECK_THROWS_AS(load_model(dir / "bad.json"), ParseError);
    CHECK_THROWS(load_model(dir / "missing.json"));
    fs::remove_all(dir);
}

TEST_CASE("predicate secrets with zero counts")
{
    auto doc = to_json(load_corpus().at("br"));
    doc["secrets"] = Json::parse(R"([{"marking": {"P1": 1, "P2": 0}, "exact": false}])");
    auto model = parse_net_model(doc);
    REQUIRE(model.secrets.size() == 1);
    CHECK_FALSE(model.secrets[0].exact);
    CHECK(model.secrets[0].zero_places == std::vector<std::string>{"P2"});
    CHECK(model.secrets[0].matches(Marking{{"P1", 1}, {"Pi", 1}}));
    CHECK_FALSE(model.secrets[0].matches(Marking{{"P1", 1}, {"P2", 1}}));
    CHECK(parse_net_model(to_json(model)) == model);
}

TEST_CASE("LTS files")
{
    auto doc = Json::parse(R"({
        "states": ["q0", "q1"],
        "initial": "q0",
        "events": [{"id": "o", "observable": true}, {"id": "u", "observable": false}],
        "edges": [{"from": "q0", "event": "o", "to": "q1"}, {"from": "q1", "event": "u", "to": "q1"}],
        "secret_states": ["q1"]
    })");
    auto loaded = parse_model(doc, "l.json");
    REQUIRE(loaded.lts);
    CHECK_FALSE(loaded.net);
    CHECK(loaded.lts->lts.state_count() == 2);
    CHECK(loaded.lts->secret.states() == std::vector<StateId>{1});
    CHECK(to_json(*loaded.lts) == doc);

    doc["edges"][0]["event"] = "zz";
    CHECK_THROWS_WITH(parse_model(doc, "l.json"), "l.json: $.edges[0].event: unknown event 'zz'");
}

TEST_CASE("report encodings")
{
    auto g = build_reachability_graph(load_corpus().at("cpr"));
    auto [v, sog] = check_simple(g.lts, g.secret);
    auto j = verdict_to_json(v, g.lts);
    CHECK(j["variant"] == "simple");
    CHECK(j["k"] == 0);
    CHECK(j["opaque"] == false);
    REQUIRE(j["counterexamples"].size() == 2);
    for (const auto& c : j["counterexamples"]) {
        CHECK(c["trace"].size() == 4);
        CHECK(c.contains("source"));
        CHECK(c.contains("target"));
        CHECK(c["lag"] == 0);
    }
    CHECK(j["stats"]["states"] == g.lts.state_count());
    CHECK(j["stats"]["aggregates"] == sog.aggregates().size());

    auto s = sog_to_json(sog, g.lts);
    CHECK(s["aggregates"].size() == sog.aggregates().size());
    CHECK(s["edges"].size() == sog.edges().size());
    CHECK(s["initial"] == 0);

    auto text = verdict_to_text(v, g.lts);
    CHECK(text.find("T7 T13 T16 T18") != std::string::npos);
}
