#pragma once

#include "fease/types.hpp"

#include <optional>
#include <vector>

namespace fease {

/// Top-k metric kernels. `recs` holds each user's ranked list (length <= k),
/// `targets` each user's sorted target set. Users with empty targets are
/// excluded from every average; a metric with no eligible users is absent.

std::optional<double> hitRatio(const std::vector<std::vector<int>>& recs,
                               const std::vector<std::vector<int>>& targets);

/// Mean over users of |recs ∩ targets| / min(k, |targets|).
std::optional<double> recallAtK(const std::vector<std::vector<int>>& recs,
                                const std::vector<std::vector<int>>& targets, int k);

/// DCG with a hit indicator per rank, IDCG over min(k, |targets|) ideal hits,
/// log base 2 throughout.
std::optional<double> ndcgAtK(const std::vector<std::vector<int>>& recs,
                              const std::vector<std::vector<int>>& targets, int k);

/// Effective catalog size: exposure counts sorted descending, normalized to
/// p_r, then 2 * sum_r(p_r * r) - 1. Equals 1 for a single-item monoculture
/// and n for uniform exposure over n items.
std::optional<double> ecsAtK(const std::vector<std::vector<int>>& recs, Index catalogSize);

/// Hit ratio over users whose targets contain a cold item, counting only
/// hits on cold targets. Absent when no such user exists.
std::optional<double> coldHrAtK(const std::vector<std::vector<int>>& recs,
                                const std::vector<std::vector<int>>& targets,
                                const std::vector<int>& coldItems, int k);

}  // namespace fease
