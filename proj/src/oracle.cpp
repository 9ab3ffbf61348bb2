#include "opacity/oracle.hpp"

#include <algorithm>
#include <functional>

namespace opacity {

namespace {

using Layer = std::vector<bool>;

struct Raw {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<EventId, StateId>>> obs;
    std::vector<std::vector<StateId>> silent;
    std::vector<bool> secret;
};

Raw raw_copy(const Lts& lts, const SecretSpec& secret)
{
    Raw g;
    g.n = lts.state_count();
    g.obs.resize(g.n);
    g.silent.resize(g.n);
    g.secret.resize(g.n);
    for (StateId q = 0; q < g.n; ++q) {
        g.secret[q] = secret.contains(q);
        for (const auto& e : lts.successors(q)) {
            if (lts.observable(e.event))
                g.obs[q].emplace_back(e.event, e.target);
            else
                g.silent[q].push_back(e.target);
        }
    }
    return g;
}

// Closes `seeds` under silent moves; with `clean`, secret configurations are
// neither entered nor kept.
Layer close(const Raw& g, Layer seeds, bool clean)
{
    std::vector<StateId> work;
    for (StateId q = 0; q < g.n; ++q) {
        if (seeds[q] && clean && g.secret[q])
            seeds[q] = false;
        if (seeds[q])
            work.push_back(q);
    }
    while (!work.empty()) {
        auto q = work.back();
        work.pop_back();
        for (auto r : g.silent[q]) {
            if (seeds[r] || (clean && g.secret[r]))
                continue;
            seeds[r] = true;
            work.push_back(r);
        }
    }
    return seeds;
}

Layer step(const Raw& g, const Layer& from, EventId e)
{
    Layer out(g.n, false);
    for (StateId q = 0; q < g.n; ++q) {
        if (!from[q])
            continue;
        for (auto [ev, r] : g.obs[q]) {
            if (ev == e)
                out[r] = true;
        }
    }
    return out;
}

bool any(const Layer& l) { return std::find(l.begin(), l.end(), true) != l.end(); }

bool inside_secret(const Raw& g, const Layer& l)
{
    bool some = false;
    for (StateId q = 0; q < g.n; ++q) {
        if (!l[q])
            continue;
        if (!g.secret[q])
            return false;
        some = true;
    }
    return some;
}

// Configurations of layer `j` that lie on a run producing the whole word:
// forward-reachable ones that can still consume the rest of it.
std::vector<Layer> alive(const Raw& g, const std::vector<Layer>& fwd, const Word& w)
{
    const auto n = w.size();
    std::vector<Layer> back(n + 1);
    back[n] = fwd[n];
    for (std::size_t j = n; j-- > 0;) {
        // x in fwd[j] with an edge w[j] into back[j+1]
        Layer exits(g.n, false);
        for (StateId x = 0; x < g.n; ++x) {
            if (!fwd[j][x])
                continue;
            for (auto [ev, r] : g.obs[x]) {
                if (ev == w[j] && back[j + 1][r])
                    exits[x] = true;
            }
        }
        // q in fwd[j] reaching such an x by silent moves
        Layer live = exits;
        for (bool changed = true; changed;) {
            changed = false;
            for (StateId q = 0; q < g.n; ++q) {
                if (live[q] || !fwd[j][q])
                    continue;
                for (auto r : g.silent[q]) {
                    if (live[r]) {
                        live[q] = true;
                        changed = true;
                        break;
                    }
                }
            }
        }
        back[j] = live;
    }
    return back;
}

// Is there a run for `w` whose configurations in layers >= n - window are
// all non-secret?
bool clean_run_exists(const Raw& g, StateId init, const Word& w, std::size_t window)
{
    const auto n = w.size();
    const std::size_t from = n - window;
    Layer seeds(g.n, false);
    seeds[init] = true;
    Layer cur = close(g, seeds, from == 0);
    for (std::size_t j = 0; j < n; ++j) {
        cur = close(g, step(g, cur, w[j]), j + 1 >= from);
        if (!any(cur))
            return false;
    }
    return any(cur);
}

} // namespace

std::uint32_t default_oracle_depth(const Lts& lts, std::uint32_t k)
{
    return static_cast<std::uint32_t>(lts.state_count()) + k + 2;
}

std::vector<Disclosure> oracle_disclosures(const Lts& lts, const SecretSpec& secret, std::uint32_t k,
                                           std::uint32_t depth)
{
    const Raw g = raw_copy(lts, secret);
    const auto observables = lts.observable_events();
    std::vector<Disclosure> out;

    Word w;
    std::vector<Layer> fwd;
    Layer seeds(g.n, false);
    seeds[lts.initial()] = true;
    fwd.push_back(close(g, seeds, false));

    std::function<void()> visit = [&] {
        const auto n = w.size();
        if (inside_secret(g, fwd[n]))
            out.push_back({w, Variant::simple, 0});

        const auto longest = std::min<std::size_t>(k, n);
        auto back = alive(g, fwd, w);
        for (std::size_t lag = 0; lag <= longest; ++lag) {
            if (inside_secret(g, back[n - lag])) {
                out.push_back({w, Variant::k_weak, static_cast<std::uint32_t>(lag)});
                break;
            }
        }
        for (std::size_t window = 0; window <= longest; ++window) {
            if (!clean_run_exists(g, lts.initial(), w, window)) {
                out.push_back({w, Variant::k_strong, static_cast<std::uint32_t>(window)});
                break;
            }
        }

        if (n == depth)
            return;
        for (auto e : observables) {
            auto next = close(g, step(g, fwd[n], e), false);
            if (!any(next))
                continue;
            w.push_back(e);
            fwd.push_back(std::move(next));
            visit();
            fwd.pop_back();
            w.pop_back();
        }
    };
    visit();

    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Disclosure> filter(const std::vector<Disclosure>& all, Variant variant)
{
    std::vector<Disclosure> out;
    std::copy_if(all.begin(), all.end(), std::back_inserter(out),
                 [&](const Disclosure& d) { return d.variant == variant; });
    return out;
}

} // namespace opacity
