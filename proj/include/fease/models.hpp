#pragma once

#include "fease/dataset.hpp"
#include "fease/solver.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fease {

enum class ModelKind {
    Ease,
    EaseFull,
    Cease,
    FeaseU,
    FeaseI,
    FeaseIPrior,
    Fease,
    FeasePrior,
    Popularity,
    PopularitySeg,
};

ModelKind parseModelKind(const std::string& name);
std::string modelKindName(ModelKind kind);
bool isPopularityKind(ModelKind kind);
bool isAugmentedKind(ModelKind kind);  // weight dim M+K instead of M

/// A fitted recommender: either a weight matrix or popularity counts.
struct FittedModel {
    ModelKind kind = ModelKind::Ease;
    std::optional<WeightMatrix> weights;
    Vector popularity;  // per-item counts, empty unless a popularity kind
    std::map<std::string, Vector> segmentPopularity;  // attr-combo key -> counts
    SolverParams hyper;
    Index itemCount = 0;
    Index attrCount = 0;
    std::vector<int> coldItems;  // sorted
};

struct ScoreRequest {
    std::vector<int> seenItems;  // sorted unique item indices
    std::vector<int> userAttrs;  // sorted unique attribute indices
    int k = 20;
    bool excludeSeen = true;
};

/// Attribute-combination key used by the segmented popularity model.
std::string attrComboKey(const std::vector<int>& attrs);

FittedModel fitEase(const InteractionMatrix& train, const SolverParams& params,
                    const SolverLimits& limits = {});

/// EASE on raw users: segment rows of the same raw user are merged first.
FittedModel fitEaseFull(const InteractionMatrix& train, const SolverParams& params,
                        const SolverLimits& limits = {});

/// EASE over user rows stacked with alpha-weighted tag rows.
FittedModel fitCease(const InteractionMatrix& train, const SpMatrix& tagItem,
                     const SolverParams& params, const SolverLimits& limits = {});

FittedModel fitFeaseU(const AugmentedInput& aug, const SolverParams& params,
                      const SolverLimits& limits = {});

FittedModel fitFeaseIPrior(const InteractionMatrix& train, const SimilarityPrior& prior,
                           const SolverParams& params, const SolverLimits& limits = {});

/// Cold-item heuristic: min-max rescale the prior to the leading block's
/// value range, scale by delta, and substitute the cold rows and columns of
/// the leading block. Warm-warm entries are preserved bit for bit and the
/// diagonal is re-zeroed. A flat prior degenerates to the midpoint value
/// (with a warning on stderr).
WeightMatrix mergeColdWeights(const WeightMatrix& warm, const Matrix& prior,
                              const std::vector<int>& coldItems, double delta);

/// EASE plus the cold-item weight replacement.
FittedModel fitFeaseI(const InteractionMatrix& train, const SimilarityPrior& prior,
                      const std::vector<int>& coldItems, const SolverParams& params,
                      const SolverLimits& limits = {});

enum class FeaseMode { Replace, Joint };

/// Replace mode solves FEASE-U then substitutes cold-item weights (delta = 0
/// skips the substitution); joint mode solves with the padded prior in the
/// objective.
FittedModel fitFease(const AugmentedInput& aug, const Matrix& priorPadded,
                     const std::vector<int>& coldItems, const SolverParams& params,
                     FeaseMode mode, const SolverLimits& limits = {});

/// Global interaction counts, or per-attribute-combination counts with a
/// global fallback for unseen combinations.
FittedModel fitPopularity(const InteractionMatrix& train, bool bySegment,
                          const SpMatrix* trainUserAttr = nullptr, Index attrCount = 0);

/// Top-k scores for one user. Ranking is by descending score with ascending
/// item index as the tie break; seen items are dropped when excludeSeen.
std::vector<std::pair<int, double>> score(const FittedModel& model, const ScoreRequest& req);

/// Weight files: magic FWM1, little-endian u32 dim, u32 item_count, u8 dtype
/// (4 = float32, 8 = float64), then dim*dim values row-major. A sidecar
/// <stem>.meta.tsv carries kind, hyperparameters and the cold-item list.
/// Popularity models write <stem>.pop.tsv (+ .popseg.tsv) instead.
void saveWeights(const FittedModel& model, const std::filesystem::path& path,
                 bool asFloat32 = true);
FittedModel loadWeights(const std::filesystem::path& path, const SolverLimits& limits = {});

/// Off-diagonal weight distributions of the leading block, split into entries
/// touching a cold row/column vs the rest. Bins are symmetric around zero.
struct WeightHistogram {
    Vector edges;             // nbins + 1
    Eigen::VectorXi warm;
    Eigen::VectorXi cold;
    double warmZeroBinMass() const;
    double coldZeroBinMass() const;
};

WeightHistogram weightScoreSummary(const FittedModel& model, const std::vector<int>& coldItems,
                                   int bins = 201);

}  // namespace fease
