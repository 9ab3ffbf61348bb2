#pragma once

#include "opacity/checker.hpp"
#include "opacity/lts.hpp"

#include <cstdint>
#include <vector>

namespace opacity {

/// |Q| + K + 2.
std::uint32_t default_oracle_depth(const Lts& lts, std::uint32_t k);

/// Brute-force referee for the checker. Enumerates every observable word of
/// length <= depth that some run produces and, per word, decides the three
/// definitions directly on the graph of configurations (state, number of
/// observations consumed). Shares no code with the SOG or the estimator.
///
/// One entry per disclosing (word, variant): simple with lag 0, k_weak and
/// k_strong with the smallest disclosing lag <= K. Sorted.
std::vector<Disclosure> oracle_disclosures(const Lts& lts, const SecretSpec& secret, std::uint32_t k,
                                           std::uint32_t depth);

/// Entries of one variant only.
std::vector<Disclosure> filter(const std::vector<Disclosure>& all, Variant variant);

} // namespace opacity
