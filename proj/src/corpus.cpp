#include "opacity/corpus.hpp"

#include "opacity/errors.hpp"
#include "opacity/io.hpp"

#include <cstdlib>
#include <set>

#ifndef OPACITY_CORPUS_DIR
#define OPACITY_CORPUS_DIR "corpus"
#endif

namespace opacity {

namespace {

struct Expected {
    std::string_view name;
    std::set<std::string> observable;  // empty: not pinned
    std::size_t secrets;
};

const std::array<Expected, 5>& expectations()
{
    static const std::array<Expected, 5> table{{
        {"br", {}, 0},
        {"fog", {"T1", "T5", "T6", "T10"}, 1},
        {"cpr", {"T1", "T4", "T5", "T7", "T10", "T11", "T13", "T14", "T16", "T18", "T19", "T21"}, 8},
        {"cpub", {}, 0},
        {"app", {"T2", "T3", "T4", "T5", "T6", "T7", "T8"}, 6},
    }};
    return table;
}

} // namespace

std::filesystem::path corpus_dir()
{
    if (const char* env = std::getenv("OPACITY_CORPUS_DIR"); env && *env)
        return env;
    return OPACITY_CORPUS_DIR;
}

std::filesystem::path corpus_path(std::string_view name)
{
    return corpus_dir() / (std::string(name) + ".json");
}

std::map<std::string, NetModel, std::less<>> load_corpus()
{
    std::map<std::string, NetModel, std::less<>> out;
    for (const auto& e : expectations()) {
        const auto path = corpus_path(e.name);
        LoadedModel loaded;
        try {
            loaded = load_model(path);
        } catch (const std::exception& ex) {
            throw PackagingError("corpus model '" + std::string(e.name) + "': " + ex.what());
        }
        if (!loaded.net || !loaded.net->is_owf())
            throw PackagingError("corpus model '" + std::string(e.name) + "' (" + path.string() +
                                 ") is not an oWF-net model");
        const auto& model = *loaded.net;
        if (!e.observable.empty()) {
            std::set<std::string> obs;
            for (const auto& t : model.net.transitions()) {
                if (t.observable)
                    obs.insert(t.id);
            }
            if (obs != e.observable)
                throw PackagingError("corpus model '" + std::string(e.name) +
                                     "': observable alphabet differs from the documented one");
        }
        if (model.secrets.size() != e.secrets)
            throw PackagingError("corpus model '" + std::string(e.name) + "': expected " +
                                 std::to_string(e.secrets) + " secrets, found " +
                                 std::to_string(model.secrets.size()));
        out.emplace(std::string(e.name), model);
    }
    return out;
}

} // namespace opacity
