#pragma once

#include "fease/types.hpp"

#include <string>
#include <vector>

namespace fease {

/// Bag of normalized tokens extracted from an item's tags, description and
/// other metadata. An empty bag is valid and yields a zero similarity row.
struct ItemDocument {
    std::string itemId;
    std::vector<std::string> tokens;
};

/// Row-per-item TF-IDF vectors, L2-normalized. Vocabulary is sorted so the
/// column assignment is independent of document order.
struct TfidfVectors {
    SpMatrix vectors;  // M x V
    std::vector<std::string> vocab;
};

/// Dense symmetric item-item cosine similarity matrix R.
struct SimilarityPrior {
    Matrix values;  // M x M, entries in [0, 1], unit diagonal for non-empty docs
};

/// tf(t,i) * idf(t) with raw term counts and smoothed idf
/// log((1+M)/(1+df)) + 1, rows L2-normalized.
TfidfVectors buildTfidf(const std::vector<ItemDocument>& docs);

/// R(i,j) = dot(v_i, v_j) of the normalized vectors; exactly symmetric, unit
/// diagonal for items with any tokens and zero rows for empty ones.
SimilarityPrior cosineSimilarity(const TfidfVectors& vectors);

/// (M+extra)^2 matrix with R in the top-left block and zeros elsewhere.
Matrix padPrior(const SimilarityPrior& prior, Index extra);

/// Item metadata record as found in the metadata CSV.
struct ItemMeta {
    std::string itemId;
    std::vector<std::string> tags;
    std::string description;
    int year = 0;
};

/// Lowercased tokens: tags kept atomic, description split on
/// non-alphanumerics, year folded to a decade token like "year_1990s".
ItemDocument tokenizeMetadata(const ItemMeta& meta);

}  // namespace fease
