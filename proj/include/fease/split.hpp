#pragma once

#include "fease/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace fease {

struct SplitQuota {
    int coldUsers = 0;
    int coldItems = 0;
    double holdoutFraction = 0.2;
    std::uint64_t seed = 42;
};

/// Train/eval split with held-out cold users and cold items.
///
/// The eval universe covers every segmented user; `train` keeps only the rows
/// with at least one input interaction (cold users and emptied rows are
/// absent). Cold users contribute all their interactions as targets, warm
/// users a per-user holdout fraction; interactions with cold items always land
/// in the targets. Targets and inputs are disjoint per user.
struct ColdSplit {
    InteractionMatrix train;
    SideFeatures side;  // userAttr aligned to the universe rows

    std::vector<std::string> userKeys;  // universe
    std::unordered_map<std::string, int> userIndex;
    std::vector<std::string> itemIds;
    std::unordered_map<std::string, int> itemIndex;

    std::vector<std::vector<int>> inputs;       // per universe user, sorted
    std::vector<std::vector<int>> valTargets;   // per universe user, sorted
    std::vector<std::vector<int>> testTargets;  // per universe user, sorted

    std::vector<int> coldUsers;  // universe rows, sorted
    std::vector<int> coldItems;  // item columns, sorted

    std::uint64_t seed = 0;
    int emptiedRows = 0;  // warm rows that lost every input to cold-item removal
    std::map<std::string, std::string> meta;  // free-form provenance (paths, hashes)

    bool isColdUser(int u) const;
    bool isColdItem(int i) const;
    /// U restricted to train rows, aligned with train.userKeys.
    SpMatrix trainUserAttr() const;
};

ColdSplit makeColdSplit(const InteractionMatrix& matrix, const SideFeatures& side,
                        const SplitQuota& quota);

/// Directory layout: train.txt (triplets over universe rows), targets_val.tsv
/// and targets_test.tsv (user key, tab, space-separated item ids),
/// vocab_{items,tags,attrs,users}.tsv, user_attrs.txt, tag_items.txt,
/// cold_users.tsv, cold_items.tsv, split_meta.tsv.
void saveSplit(const std::filesystem::path& dir, const ColdSplit& split);
ColdSplit loadSplit(const std::filesystem::path& dir);

}  // namespace fease
