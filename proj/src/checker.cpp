#include "opacity/checker.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

namespace opacity {

std::string_view to_string(Variant v)
{
    switch (v) {
    case Variant::simple: return "simple";
    case Variant::k_weak: return "k_weak";
    case Variant::k_strong: return "k_strong";
    }
    return "unknown";
}

std::optional<Variant> parse_variant(std::string_view s)
{
    if (s == "simple")
        return Variant::simple;
    if (s == "k_weak" || s == "kweak")
        return Variant::k_weak;
    if (s == "k_strong" || s == "kstrong")
        return Variant::k_strong;
    return std::nullopt;
}

SimpleCheck check_simple(const Lts& lts, const SecretSpec& secret)
{
    SimpleCheck result{{}, build_sog(lts, secret)};
    auto& verdict = result.verdict;
    verdict.variant = Variant::simple;
    verdict.k = 0;
    for (const auto& agg : result.sog.aggregates()) {
        if (!agg.all_secret)
            continue;
        CounterExample cex;
        cex.trace = result.sog.discovery_trace(agg.id);
        cex.target = agg.id;
        if (auto parent = result.sog.discovery_parent(agg.id)) {
            cex.source = *parent;
            cex.event = cex.trace.back();
        } else {
            cex.source = agg.id;
        }
        verdict.counterexamples.push_back(std::move(cex));
    }
    verdict.opaque = verdict.counterexamples.empty();
    verdict.stats = {lts.state_count(), result.sog.aggregates().size(), 0};
    return result;
}

DelayEstimator::DelayEstimator(const Lts& lts, const SecretSpec& secret, std::uint32_t k)
    : lts_(lts), secret_(secret), k_(k)
{
    const auto n = lts.state_count();
    closure_.reserve(n);
    clear_closure_.reserve(n);
    for (StateId q = 0; q < n; ++q) {
        closure_.push_back(saturate(lts, StateSet(n, {q})));

        std::vector<StateId> reached{q};
        std::vector<bool> seen(n, false);
        seen[q] = true;
        for (std::size_t i = 0; i < reached.size(); ++i) {
            for (const auto& edge : lts.successors(reached[i])) {
                if (lts.observable(edge.event) || seen[edge.target] || secret.contains(edge.target))
                    continue;
                seen[edge.target] = true;
                reached.push_back(edge.target);
            }
        }
        clear_closure_.emplace_back(n, std::move(reached));
    }

    // Observable moves per (state, event): entry states and their crossed flag.
    moves_.resize(n * lts.event_count());
    for (StateId q = 0; q < n; ++q) {
        for (EventId e = 0; e < lts.event_count(); ++e) {
            if (!lts.observable(e))
                continue;
            std::vector<StateId> entries;
            for (auto x : closure_[q]) {
                for (const auto& edge : lts.successors(x)) {
                    if (edge.event == e)
                        entries.push_back(edge.target);
                }
            }
            std::sort(entries.begin(), entries.end());
            entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
            auto& out = moves_[q * lts.event_count() + e];
            for (auto r : entries)
                out.push_back({r, crossing(q, e, r)});
        }
    }
}

DelayEstimatorState DelayEstimator::initial() const
{
    return {{}, {lts_.initial()}};
}

bool DelayEstimator::crossing(StateId from, EventId event, StateId to) const
{
    for (auto x : clear_closure_[from]) {
        for (const auto& edge : lts_.successors(x)) {
            if (edge.event == event && edge.target == to)
                return false;
        }
    }
    return true;
}

std::vector<std::vector<bool>> DelayEstimator::alive(const DelayEstimatorState& state) const
{
    const auto n = lts_.state_count();
    const auto m = state.events.size();
    std::vector<std::vector<bool>> fwd(m + 1, std::vector<bool>(n, false));
    for (auto q : state.start)
        fwd[0][q] = true;
    for (std::size_t i = 0; i < m; ++i) {
        for (StateId q = 0; q < n; ++q) {
            if (!fwd[i][q])
                continue;
            for (const auto& mv : moves(q, state.events[i]))
                fwd[i + 1][mv.state] = true;
        }
    }
    // prune to states with a continuation up to the last entry
    for (std::size_t i = m; i-- > 0;) {
        for (StateId q = 0; q < n; ++q) {
            if (!fwd[i][q])
                continue;
            const auto& mv = moves(q, state.events[i]);
            fwd[i][q] = std::any_of(mv.begin(), mv.end(), [&](const auto& x) { return fwd[i + 1][x.state]; });
        }
    }
    return fwd;
}

std::optional<DelayEstimatorState> DelayEstimator::step(const DelayEstimatorState& state, EventId event) const
{
    DelayEstimatorState longer{state.events, state.start};
    longer.events.push_back(event);
    auto layers = alive(longer);
    const bool trim = longer.events.size() > k_;
    const auto& first = layers[trim ? 1 : 0];

    DelayEstimatorState next;
    next.events.assign(longer.events.begin() + (trim ? 1 : 0), longer.events.end());
    for (StateId q = 0; q < first.size(); ++q) {
        if (first[q])
            next.start.push_back(q);
    }
    if (next.start.empty())
        return std::nullopt;
    return next;
}

StateSet DelayEstimator::lag_estimate(const DelayEstimatorState& state, std::uint32_t lag) const
{
    const auto n = lts_.state_count();
    const std::size_t length = state.events.size() + 1;
    if (lag >= length)
        return StateSet(n);

    auto layers = alive(state);
    std::vector<StateId> members;
    if (lag == 0) {
        for (StateId r = 0; r < n; ++r) {
            if (layers.back()[r])
                members.insert(members.end(), closure_[r].begin(), closure_[r].end());
        }
        return StateSet(n, std::move(members));
    }

    // states passed through between entry `at` and the observation leading
    // to a live entry `at + 1`
    const std::size_t at = length - 1 - lag;
    const EventId event = state.events[at];
    for (StateId r = 0; r < n; ++r) {
        if (!layers[at][r])
            continue;
        for (const auto& mv : moves(r, event)) {
            if (!layers[at + 1][mv.state])
                continue;
            for (auto q : closure_[r]) {
                bool continues = false;
                for (auto x : closure_[q]) {
                    for (const auto& edge : lts_.successors(x)) {
                        if (edge.event == event && edge.target == mv.state) {
                            continues = true;
                            break;
                        }
                    }
                    if (continues)
                        break;
                }
                if (continues)
                    members.push_back(q);
            }
        }
    }
    return StateSet(n, std::move(members));
}

std::optional<std::uint32_t> DelayEstimator::weak_disclosure(const DelayEstimatorState& state) const
{
    const auto longest = std::min<std::size_t>(k_, state.events.size());
    for (std::uint32_t lag = 0; lag <= longest; ++lag) {
        auto estimate = lag_estimate(state, lag);
        if (!estimate.empty() &&
            std::all_of(estimate.begin(), estimate.end(), [&](auto q) { return secret_.contains(q); }))
            return lag;
    }
    return std::nullopt;
}

std::optional<std::uint32_t> DelayEstimator::strong_disclosure(const DelayEstimatorState& state) const
{
    const auto n = lts_.state_count();
    const std::size_t length = state.events.size() + 1;
    const auto longest = std::min<std::size_t>(k_, state.events.size());
    auto layers = alive(state);
    for (std::uint32_t window = 0; window <= longest; ++window) {
        // a clean trajectory: non-secret entries from `first` on, no crossing
        // after `first`
        const std::size_t first = length - 1 - window;
        std::vector<bool> clean(n, false);
        for (StateId r = 0; r < n; ++r)
            clean[r] = layers[first][r] && !secret_.contains(r);
        for (std::size_t i = first; i + 1 < length; ++i) {
            std::vector<bool> next(n, false);
            for (StateId r = 0; r < n; ++r) {
                if (!clean[r])
                    continue;
                for (const auto& mv : moves(r, state.events[i])) {
                    if (!mv.crossed && !secret_.contains(mv.state))
                        next[mv.state] = true;
                }
            }
            clean = std::move(next);
        }
        if (std::none_of(clean.begin(), clean.end(), [](bool b) { return b; }))
            return window;
    }
    return std::nullopt;
}

namespace {

/// Lazily explored estimator automaton with stable state numbering.
class EstimatorGraph {
public:
    EstimatorGraph(const Lts& lts, const DelayEstimator& estimator) : lts_(lts), estimator_(estimator)
    {
        intern(estimator.initial());
    }

    std::size_t size() const { return states_.size(); }
    const DelayEstimatorState& state(std::uint32_t id) const { return states_[id]; }

    std::optional<std::uint32_t> successor(std::uint32_t id, EventId event)
    {
        auto key = std::pair{id, event};
        if (auto it = succ_.find(key); it != succ_.end())
            return it->second;
        std::optional<std::uint32_t> target;
        if (auto next = estimator_.step(states_[id], event))
            target = intern(std::move(*next));
        succ_.emplace(key, target);
        return target;
    }

private:
    std::uint32_t intern(DelayEstimatorState s)
    {
        auto [it, inserted] = index_.emplace(std::move(s), static_cast<std::uint32_t>(states_.size()));
        if (inserted)
            states_.push_back(it->first);
        return it->second;
    }

    const Lts& lts_;
    const DelayEstimator& estimator_;
    std::map<DelayEstimatorState, std::uint32_t> index_;
    std::vector<DelayEstimatorState> states_;
    std::map<std::pair<std::uint32_t, EventId>, std::optional<std::uint32_t>> succ_;
};

std::optional<std::uint32_t> disclosure_lag(const DelayEstimator& estimator, const DelayEstimatorState& s,
                                            Variant variant)
{
    return variant == Variant::k_strong ? estimator.strong_disclosure(s) : estimator.weak_disclosure(s);
}

Verdict check_k_step(const Lts& lts, const SecretSpec& secret, std::uint32_t k, Variant variant)
{
    DelayEstimator estimator(lts, secret, k);
    EstimatorGraph graph(lts, estimator);
    const auto observables = lts.observable_events();

    Verdict verdict;
    verdict.variant = variant;
    verdict.k = k;

    std::vector<std::optional<std::uint32_t>> parent{std::nullopt};
    std::vector<std::optional<EventId>> via{std::nullopt};
    auto trace_to = [&](std::uint32_t id) {
        Word w;
        for (auto cur = id; parent[cur]; cur = *parent[cur])
            w.push_back(*via[cur]);
        std::reverse(w.begin(), w.end());
        return w;
    };

    std::deque<std::uint32_t> queue{0};
    while (!queue.empty()) {
        auto id = queue.front();
        queue.pop_front();
        if (auto lag = disclosure_lag(estimator, graph.state(id), variant)) {
            CounterExample cex;
            cex.trace = trace_to(id);
            cex.source = parent[id].value_or(id);
            cex.event = via[id];
            cex.target = id;
            cex.lag = *lag;
            verdict.counterexamples.push_back(std::move(cex));
        }
        for (auto e : observables) {
            const auto before = graph.size();
            auto next = graph.successor(id, e);
            if (next && graph.size() > before) {
                parent.push_back(id);
                via.push_back(e);
                queue.push_back(*next);
            }
        }
    }
    verdict.opaque = verdict.counterexamples.empty();
    verdict.stats = {lts.state_count(), 0, graph.size()};
    return verdict;
}

} // namespace

Verdict check_k_step_weak(const Lts& lts, const SecretSpec& secret, std::uint32_t k)
{
    return check_k_step(lts, secret, k, Variant::k_weak);
}

Verdict check_k_step_strong(const Lts& lts, const SecretSpec& secret, std::uint32_t k)
{
    return check_k_step(lts, secret, k, Variant::k_strong);
}

Verdict check(const Lts& lts, const SecretSpec& secret, Variant variant, std::uint32_t k)
{
    switch (variant) {
    case Variant::simple: return check_simple(lts, secret).verdict;
    case Variant::k_weak: return check_k_step_weak(lts, secret, k);
    case Variant::k_strong: return check_k_step_strong(lts, secret, k);
    }
    return {};
}

std::vector<Disclosure> disclosing_observations(const Lts& lts, const SecretSpec& secret, Variant variant,
                                                std::uint32_t k, std::uint32_t depth)
{
    std::vector<Disclosure> out;
    Word word;

    if (variant == Variant::simple) {
        auto sog = build_sog(lts, secret);
        std::function<void(AggregateId)> walk = [&](AggregateId a) {
            if (sog.aggregate(a).all_secret)
                out.push_back({word, Variant::simple, 0});
            if (word.size() == depth)
                return;
            for (const auto& e : sog.out_edges(a)) {
                word.push_back(e.event);
                walk(e.target);
                word.pop_back();
            }
        };
        walk(sog.initial());
    } else {
        DelayEstimator estimator(lts, secret, k);
        EstimatorGraph graph(lts, estimator);
        const auto observables = lts.observable_events();
        std::map<std::uint32_t, std::optional<std::uint32_t>> lags;
        std::function<void(std::uint32_t)> walk = [&](std::uint32_t id) {
            auto it = lags.find(id);
            if (it == lags.end())
                it = lags.emplace(id, disclosure_lag(estimator, graph.state(id), variant)).first;
            if (it->second)
                out.push_back({word, variant, *it->second});
            if (word.size() == depth)
                return;
            for (auto e : observables) {
                if (auto next = graph.successor(id, e)) {
                    word.push_back(e);
                    walk(*next);
                    word.pop_back();
                }
            }
        };
        walk(0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace opacity
