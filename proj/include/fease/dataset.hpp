#pragma once

#include "fease/similarity.hpp"
#include "fease/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace fease {

struct Interaction {
    std::string userId;
    std::string itemId;
    double rating = 0.0;
    std::int64_t timestamp = 0;
};

/// Implicit-positive interactions after thresholding and de-duplication of
/// exact (user, item, timestamp) triples.
struct InteractionLog {
    std::vector<Interaction> records;
    std::size_t malformedLines = 0;
    std::size_t duplicatesDropped = 0;
    std::size_t belowThreshold = 0;
};

/// Column layout of an interaction file. The "movielens" preset is a CSV with
/// header userId,movieId,rating,timestamp; other layouts name their columns.
struct IngestFormat {
    char delimiter = ',';
    bool hasHeader = true;
    std::string userColumn = "userId";
    std::string itemColumn = "movieId";
    std::string ratingColumn = "rating";
    std::string timestampColumn = "timestamp";

    static IngestFormat movielens() { return {}; }
};

InteractionLog ingest(const std::filesystem::path& path, const IngestFormat& format,
                      double implicitThreshold);

enum class FeatureFamily { DayOfWeek, HourOfDay, RatingCountBucket, ReviewCountBucket };

FeatureFamily parseFeatureFamily(const std::string& tag);
std::string featureFamilyName(FeatureFamily f);

/// One label per (interaction, family), e.g. "dow=wed" or "rc=10-99".
struct FeatureAssignment {
    std::vector<FeatureFamily> families;
    std::vector<std::vector<std::string>> labels;  // labels[record][family]
};

/// Count buckets use half-open ranges from the configured edges; the last
/// edge is open-ended ("1000+").
std::string countBucketLabel(std::int64_t count, const std::vector<std::int64_t>& edges);

FeatureAssignment engineerUserFeatures(const InteractionLog& log,
                                       const std::vector<std::string>& familyTags,
                                       const std::vector<std::int64_t>& bucketEdges = {1, 10, 100,
                                                                                       1000});

/// Sparse binary user-item matrix over segmented users, plus the index maps.
struct InteractionMatrix {
    SpMatrix entries;  // N x M, values are exactly 1.0
    std::vector<std::string> userKeys;
    std::vector<std::string> itemIds;
    std::unordered_map<std::string, int> userIndex;
    std::unordered_map<std::string, int> itemIndex;
};

/// Tag-item matrix T (L x M), user-attribute matrix U (N x K) and their
/// vocabularies. U rows one-hot encode each segment's feature combination.
struct SideFeatures {
    SpMatrix tagItem;   // L x M
    SpMatrix userAttr;  // N x K
    std::vector<std::string> tagVocab;
    std::vector<std::string> attrVocab;
};

/// Segmented-user key: raw user id plus its feature-value combination. With
/// no families this is the identity segmentation and U has zero columns.
std::pair<InteractionMatrix, SideFeatures> segmentUsers(const InteractionLog& log,
                                                        const FeatureAssignment& features);

std::vector<ItemMeta> loadItemMetadata(const std::filesystem::path& path);

/// T aligned to the item index; tags of unknown items are dropped.
std::pair<SpMatrix, std::vector<std::string>> buildTagItemMatrix(
    const std::vector<ItemMeta>& metadata, const InteractionMatrix& matrix);

/// Raw user id portion of a segmented key (prefix before the first '|').
std::string rawUserOf(const std::string& userKey);

/// Block input Z = [[X, beta U], [alpha T, 0]] of shape (N+L) x (M+K).
/// Zero-weight blocks are left structurally empty.
struct AugmentedInput {
    SpMatrix z;
    double alpha = 0.0;
    double beta = 0.0;
    Index items = 0;  // M
    Index attrs = 0;  // K
};

AugmentedInput buildAugmentedInput(const InteractionMatrix& train, const SpMatrix& userAttr,
                                   const SpMatrix& tagItem, double alpha, double beta);

}  // namespace fease
