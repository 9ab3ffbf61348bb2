#pragma once

#include "opacity/lts.hpp"
#include "opacity/sog.hpp"
#include "opacity/state_set.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace opacity {

enum class Variant { simple, k_weak, k_strong };

std::string_view to_string(Variant v);
/// Accepts "simple", "k_weak"/"kweak", "k_strong"/"kstrong".
std::optional<Variant> parse_variant(std::string_view s);

/// A disclosing observation. For simple opacity `source`/`target` are SOG
/// aggregate ids and `event` is the last observable of `trace` (none for the
/// initial-disclosure form). For the K-step variants they are delay-estimator
/// state ids and `lag` is the smallest disclosing lag.
struct CounterExample {
    Word trace;
    std::uint32_t source = 0;
    std::optional<EventId> event;
    std::uint32_t target = 0;
    std::uint32_t lag = 0;

    friend bool operator==(const CounterExample&, const CounterExample&) = default;
};

struct VerdictStats {
    std::size_t states = 0;
    std::size_t aggregates = 0;
    std::size_t estimator_states = 0;

    friend bool operator==(const VerdictStats&, const VerdictStats&) = default;
};

struct Verdict {
    Variant variant = Variant::simple;
    std::uint32_t k = 0;
    bool opaque = true;
    std::vector<CounterExample> counterexamples;
    VerdictStats stats;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct SimpleCheck {
    Verdict verdict;
    Sog sog;
};

/// Simple opacity on the SOG. The construction never stops early: one
/// counterexample per all-secret aggregate, in discovery order, each carrying
/// its DFS discovery path. An all-secret a0 yields the (ε, a0, ε, a0) entry.
SimpleCheck check_simple(const Lts& lts, const SecretSpec& secret);

/// One observable move of the system as the delay estimator sees it: the
/// state entered right after the observation and whether every way of
/// getting there from the previous entry state crossed a secret state
/// through unobservable moves.
struct TrajectoryStep {
    StateId state;
    bool crossed = false;

    friend bool operator==(const TrajectoryStep&, const TrajectoryStep&) = default;
    friend auto operator<=>(const TrajectoryStep&, const TrajectoryStep&) = default;
};

/// Observer knowledge over the last <= K observations. A trajectory is a
/// sequence of entry states r0..rm linked by moves labelled with `events`;
/// whether a move exists depends only on its two ends, so the set of
/// consistent trajectories is exactly the set of move paths from `start`.
/// `start` holds the window-start states that both agree with everything
/// observed before the window and extend to a full path.
struct DelayEstimatorState {
    std::vector<EventId> events;
    std::vector<StateId> start;  // sorted, unique

    friend bool operator==(const DelayEstimatorState&, const DelayEstimatorState&) = default;
    friend auto operator<=>(const DelayEstimatorState&, const DelayEstimatorState&) = default;
};

class DelayEstimator {
public:
    DelayEstimator(const Lts& lts, const SecretSpec& secret, std::uint32_t k);

    std::uint32_t k() const { return k_; }
    DelayEstimatorState initial() const;
    /// Estimator after observing `event`; nullopt when no run can produce it.
    std::optional<DelayEstimatorState> step(const DelayEstimatorState& state, EventId event) const;

    /// States the system may have occupied `lag` observations ago, over runs
    /// consistent with the whole window. lag 0 is the current-state estimate.
    StateSet lag_estimate(const DelayEstimatorState& state, std::uint32_t lag) const;

    /// Smallest lag whose estimate is non-empty and entirely secret.
    std::optional<std::uint32_t> weak_disclosure(const DelayEstimatorState& state) const;
    /// Smallest window (in observations back) over which no consistent
    /// trajectory stays clear of secret states.
    std::optional<std::uint32_t> strong_disclosure(const DelayEstimatorState& state) const;

private:
    bool crossing(StateId from, EventId event, StateId to) const;
    const std::vector<TrajectoryStep>& moves(StateId q, EventId e) const { return moves_[q * lts_.event_count() + e]; }
    /// Per window position, the entry states lying on some full trajectory.
    std::vector<std::vector<bool>> alive(const DelayEstimatorState& state) const;

    const Lts& lts_;
    const SecretSpec& secret_;
    std::uint32_t k_;
    std::vector<StateSet> closure_;        // Saturate({q})
    std::vector<StateSet> clear_closure_;  // unobservable reach through non-secret states only
    std::vector<std::vector<TrajectoryStep>> moves_;  // [q * |Σ| + e]
};

Verdict check_k_step_weak(const Lts& lts, const SecretSpec& secret, std::uint32_t k);
Verdict check_k_step_strong(const Lts& lts, const SecretSpec& secret, std::uint32_t k);

/// Dispatches on `variant`; `k` is ignored for simple opacity.
Verdict check(const Lts& lts, const SecretSpec& secret, Variant variant, std::uint32_t k);

struct Disclosure {
    Word observation;
    Variant variant = Variant::simple;
    std::uint32_t lag = 0;

    friend bool operator==(const Disclosure&, const Disclosure&) = default;
    friend auto operator<=>(const Disclosure&, const Disclosure&) = default;
};

/// Every disclosing observation of length <= depth according to the
/// checker's own structures: SOG paths into all-secret aggregates for simple
/// opacity, estimator paths for the K-step variants. Sorted.
std::vector<Disclosure> disclosing_observations(const Lts& lts, const SecretSpec& secret, Variant variant,
                                                std::uint32_t k, std::uint32_t depth);

} // namespace opacity
