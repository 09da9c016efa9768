#include "fease/models.hpp"

#include "fease/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

namespace fease {

ModelKind parseModelKind(const std::string& name) {
    if (name == "ease") return ModelKind::Ease;
    if (name == "ease_full") return ModelKind::EaseFull;
    if (name == "cease") return ModelKind::Cease;
    if (name == "fease_u") return ModelKind::FeaseU;
    if (name == "fease_i") return ModelKind::FeaseI;
    if (name == "fease_i_prior") return ModelKind::FeaseIPrior;
    if (name == "fease") return ModelKind::Fease;
    if (name == "fease_prior") return ModelKind::FeasePrior;
    if (name == "popularity") return ModelKind::Popularity;
    if (name == "popularity_seg") return ModelKind::PopularitySeg;
    throw ConfigError("unknown model kind: " + name);
}

std::string modelKindName(ModelKind kind) {
    switch (kind) {
        case ModelKind::Ease: return "ease";
        case ModelKind::EaseFull: return "ease_full";
        case ModelKind::Cease: return "cease";
        case ModelKind::FeaseU: return "fease_u";
        case ModelKind::FeaseI: return "fease_i";
        case ModelKind::FeaseIPrior: return "fease_i_prior";
        case ModelKind::Fease: return "fease";
        case ModelKind::FeasePrior: return "fease_prior";
        case ModelKind::Popularity: return "popularity";
        case ModelKind::PopularitySeg: return "popularity_seg";
    }
    return "?";
}

bool isPopularityKind(ModelKind kind) {
    return kind == ModelKind::Popularity || kind == ModelKind::PopularitySeg;
}

bool isAugmentedKind(ModelKind kind) {
    return kind == ModelKind::FeaseU || kind == ModelKind::Fease
           || kind == ModelKind::FeasePrior;
}

std::string attrComboKey(const std::vector<int>& attrs) {
    std::string key;
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        if (i) key += '|';
        key += std::to_string(attrs[i]);
    }
    return key;
}

FittedModel fitEase(const InteractionMatrix& train, const SolverParams& params,
                    const SolverLimits& limits) {
    FittedModel model;
    model.kind = ModelKind::Ease;
    model.hyper = params;
    model.itemCount = train.entries.cols();
    model.weights = solveEase(computeGram(train.entries), params, limits);
    return model;
}

FittedModel fitEaseFull(const InteractionMatrix& train, const SolverParams& params,
                        const SolverLimits& limits) {
    // collapse segments of the same raw user into one row
    std::map<std::string, int> rawIndex;
    for (const auto& key : train.userKeys) rawIndex.emplace(rawUserOf(key), 0);
    int next = 0;
    for (auto& [raw, idx] : rawIndex) idx = next++;

    std::set<std::pair<int, int>> cells;
    for (Index r = 0; r < train.entries.outerSize(); ++r) {
        int row = rawIndex.at(rawUserOf(train.userKeys[r]));
        for (SpMatrix::InnerIterator it(train.entries, r); it; ++it)
            cells.emplace(row, static_cast<int>(it.col()));
    }
    std::vector<Triplet> trips;
    trips.reserve(cells.size());
    for (const auto& [r, c] : cells) trips.emplace_back(r, c, 1.0);
    SpMatrix merged(next, train.entries.cols());
    merged.setFromTriplets(trips.begin(), trips.end());

    FittedModel model;
    model.kind = ModelKind::EaseFull;
    model.hyper = params;
    model.itemCount = train.entries.cols();
    model.weights = solveEase(computeGram(merged), params, limits);
    return model;
}

FittedModel fitCease(const InteractionMatrix& train, const SpMatrix& tagItem,
                     const SolverParams& params, const SolverLimits& limits) {
    if (tagItem.rows() > 0 && tagItem.cols() != train.entries.cols())
        throw ParameterError("fitCease: tag matrix columns must match item count");
    if (params.alpha < 0) throw ParameterError("fitCease: alpha must be >= 0");

    const Index n = train.entries.rows();
    const Index l = tagItem.rows();
    std::vector<Triplet> trips;
    trips.reserve(train.entries.nonZeros() + tagItem.nonZeros());
    for (Index r = 0; r < train.entries.outerSize(); ++r)
        for (SpMatrix::InnerIterator it(train.entries, r); it; ++it)
            trips.emplace_back(it.row(), it.col(), it.value());
    for (Index r = 0; r < tagItem.outerSize(); ++r)
        for (SpMatrix::InnerIterator it(tagItem, r); it; ++it)
            trips.emplace_back(n + it.row(), it.col(), it.value());
    SpMatrix stacked(n + l, train.entries.cols());
    stacked.setFromTriplets(trips.begin(), trips.end());

    Vector weights(n + l);
    weights.head(n).setOnes();
    weights.tail(l).setConstant(params.alpha);

    FittedModel model;
    model.kind = ModelKind::Cease;
    model.hyper = params;
    model.itemCount = train.entries.cols();
    model.weights = solveEase(computeGram(stacked, &weights), params, limits);
    return model;
}

FittedModel fitFeaseU(const AugmentedInput& aug, const SolverParams& params,
                      const SolverLimits& limits) {
    FittedModel model;
    model.kind = ModelKind::FeaseU;
    model.hyper = params;
    model.hyper.alpha = aug.alpha;
    model.hyper.beta = aug.beta;
    model.itemCount = aug.items;
    model.attrCount = aug.attrs;
    model.weights = solveEase(computeGram(aug.z), params, limits);
    model.weights->itemCount = aug.items;
    return model;
}

FittedModel fitFeaseIPrior(const InteractionMatrix& train, const SimilarityPrior& prior,
                           const SolverParams& params, const SolverLimits& limits) {
    FittedModel model;
    model.kind = ModelKind::FeaseIPrior;
    model.hyper = params;
    model.itemCount = train.entries.cols();
    model.weights = solveEaseWithPrior(computeGram(train.entries), prior.values, params, limits);
    return model;
}

WeightMatrix mergeColdWeights(const WeightMatrix& warm, const Matrix& prior,
                              const std::vector<int>& coldItems, double delta) {
    const Index m = warm.itemCount;
    if (prior.rows() < m || prior.cols() < m)
        throw ParameterError("mergeColdWeights: prior smaller than the item block");
    if (!(delta > 0.0)) throw ParameterError("mergeColdWeights: delta must be > 0");
    if (coldItems.empty()) return warm;
    for (int c : coldItems)
        if (c < 0 || c >= m) throw ParameterError("mergeColdWeights: cold item out of range");

    const auto block = warm.values.topLeftCorner(m, m);
    const double bMin = block.minCoeff();
    const double bMax = block.maxCoeff();
    const auto pBlock = prior.topLeftCorner(m, m);
    const double rMin = pBlock.minCoeff();
    const double rMax = pBlock.maxCoeff();

    double scale = 0.0, shift = 0.5 * (bMin + bMax);
    if (rMax > rMin) {
        scale = (bMax - bMin) / (rMax - rMin);
        shift = bMin - rMin * scale;
    } else {
        std::cerr << "mergeColdWeights: constant prior, using midpoint rescale\n";
    }

    WeightMatrix out = warm;
    for (int c : coldItems) {
        for (Index j = 0; j < m; ++j) {
            out.values(c, j) = delta * (pBlock(c, j) * scale + shift);
            out.values(j, c) = delta * (pBlock(j, c) * scale + shift);
        }
    }
    out.values.diagonal().setZero();
    return out;
}

FittedModel fitFeaseI(const InteractionMatrix& train, const SimilarityPrior& prior,
                      const std::vector<int>& coldItems, const SolverParams& params,
                      const SolverLimits& limits) {
    FittedModel model = fitEase(train, params, limits);
    model.kind = ModelKind::FeaseI;
    model.hyper = params;
    model.coldItems = coldItems;
    if (!coldItems.empty() && params.delta > 0)
        model.weights = mergeColdWeights(*model.weights, prior.values, coldItems, params.delta);
    return model;
}

FittedModel fitFease(const AugmentedInput& aug, const Matrix& priorPadded,
                     const std::vector<int>& coldItems, const SolverParams& params,
                     FeaseMode mode, const SolverLimits& limits) {
    const Index dim = aug.items + aug.attrs;
    if (priorPadded.rows() != dim || priorPadded.cols() != dim)
        throw ParameterError("fitFease: padded prior must be (M+K) x (M+K)");

    FittedModel model;
    model.hyper = params;
    model.hyper.alpha = aug.alpha;
    model.hyper.beta = aug.beta;
    model.itemCount = aug.items;
    model.attrCount = aug.attrs;
    model.coldItems = coldItems;
    if (mode == FeaseMode::Replace) {
        model.kind = ModelKind::Fease;
        model.weights = solveEase(computeGram(aug.z), params, limits);
        model.weights->itemCount = aug.items;
        if (!coldItems.empty() && params.delta > 0)
            model.weights = mergeColdWeights(*model.weights, priorPadded, coldItems, params.delta);
    } else {
        model.kind = ModelKind::FeasePrior;
        model.weights = solveEaseWithPrior(computeGram(aug.z), priorPadded, params, limits);
        model.weights->itemCount = aug.items;
    }
    return model;
}

FittedModel fitPopularity(const InteractionMatrix& train, bool bySegment,
                          const SpMatrix* trainUserAttr, Index attrCount) {
    FittedModel model;
    model.kind = bySegment ? ModelKind::PopularitySeg : ModelKind::Popularity;
    model.itemCount = train.entries.cols();
    model.popularity = Vector::Zero(model.itemCount);
    if (bySegment) {
        if (!trainUserAttr || trainUserAttr->rows() != train.entries.rows())
            throw ParameterError("fitPopularity: segment mode needs attrs aligned to train rows");
        model.attrCount = attrCount;
    }
    for (Index r = 0; r < train.entries.outerSize(); ++r) {
        Vector* seg = nullptr;
        if (bySegment) {
            std::vector<int> attrs;
            for (SpMatrix::InnerIterator it(*trainUserAttr, r); it; ++it)
                attrs.push_back(static_cast<int>(it.col()));
            auto [sit, inserted] =
                model.segmentPopularity.try_emplace(attrComboKey(attrs),
                                                    Vector::Zero(model.itemCount));
            seg = &sit->second;
        }
        for (SpMatrix::InnerIterator it(train.entries, r); it; ++it) {
            model.popularity(it.col()) += 1.0;
            if (seg) (*seg)(it.col()) += 1.0;
        }
    }
    return model;
}

std::vector<std::pair<int, double>> score(const FittedModel& model, const ScoreRequest& req) {
    if (req.k < 1) throw ParameterError("score: k must be >= 1");
    const Index m = model.itemCount;
    for (int i : req.seenItems)
        if (i < 0 || i >= m) throw ParameterError("score: seen item out of range");
    for (int a : req.userAttrs)
        if (a < 0 || a >= model.attrCount) throw ParameterError("score: attribute out of range");

    Vector s = Vector::Zero(m);
    if (isPopularityKind(model.kind)) {
        s = model.popularity;
        if (model.kind == ModelKind::PopularitySeg) {
            auto it = model.segmentPopularity.find(attrComboKey(req.userAttrs));
            if (it != model.segmentPopularity.end()) s = it->second;
        }
    } else {
        const Matrix& w = model.weights->values;
        for (int i : req.seenItems) s += w.row(i).head(m).transpose();
        if (isAugmentedKind(model.kind))
            for (int a : req.userAttrs)
                s += model.hyper.beta * w.row(m + a).head(m).transpose();
    }

    if (req.excludeSeen)
        for (int i : req.seenItems) s(i) = -std::numeric_limits<double>::infinity();

    std::vector<int> order;
    order.reserve(m);
    for (Index i = 0; i < m; ++i)
        if (!req.excludeSeen || s(i) != -std::numeric_limits<double>::infinity())
            order.push_back(static_cast<int>(i));
    const std::size_t k = std::min<std::size_t>(req.k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](int a, int b) { return s(a) > s(b) || (s(a) == s(b) && a < b); });
    std::vector<std::pair<int, double>> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.emplace_back(order[i], s(order[i]));
    return out;
}

namespace {

std::filesystem::path sidecarPath(const std::filesystem::path& path, const char* suffix) {
    std::filesystem::path p = path;
    p.replace_extension();
    p += suffix;
    return p;
}

void writeMeta(const FittedModel& model, const std::filesystem::path& path, int dtype) {
    std::ostringstream out;
    out << "kind\t" << modelKindName(model.kind) << '\n';
    out << "item_count\t" << model.itemCount << '\n';
    out << "attr_count\t" << model.attrCount << '\n';
    out << "dtype\t" << dtype << '\n';
    out << "lambda\t" << model.hyper.lambda << '\n';
    out << "delta\t" << model.hyper.delta << '\n';
    out << "alpha\t" << model.hyper.alpha << '\n';
    out << "beta\t" << model.hyper.beta << '\n';
    std::string cold;
    for (std::size_t i = 0; i < model.coldItems.size(); ++i) {
        if (i) cold += ' ';
        cold += std::to_string(model.coldItems[i]);
    }
    out << "cold_items\t" << cold << '\n';
    io::writeFile(sidecarPath(path, ".meta.tsv"), out.str());
}

template <typename T>
void writeRaw(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
bool readRaw(std::ifstream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return bool(in);
}

}  // namespace

void saveWeights(const FittedModel& model, const std::filesystem::path& path, bool asFloat32) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    if (isPopularityKind(model.kind)) {
        std::ostringstream out;
        for (Index i = 0; i < model.popularity.size(); ++i)
            out << i << '\t' << model.popularity(i) << '\n';
        io::writeFile(sidecarPath(path, ".pop.tsv"), out.str());
        if (model.kind == ModelKind::PopularitySeg) {
            std::ostringstream segOut;
            for (const auto& [combo, counts] : model.segmentPopularity) {
                segOut << combo << '\t';
                for (Index i = 0; i < counts.size(); ++i) {
                    if (i) segOut << ' ';
                    segOut << counts(i);
                }
                segOut << '\n';
            }
            io::writeFile(sidecarPath(path, ".popseg.tsv"), segOut.str());
        }
        writeMeta(model, path, 0);
        return;
    }

    const WeightMatrix& w = *model.weights;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write weights file: " + path.string());
    out.write("FWM1", 4);
    writeRaw(out, static_cast<std::uint32_t>(w.dim));
    writeRaw(out, static_cast<std::uint32_t>(w.itemCount));
    writeRaw(out, static_cast<std::uint8_t>(asFloat32 ? 4 : 8));
    for (Index r = 0; r < w.dim; ++r) {
        for (Index c = 0; c < w.dim; ++c) {
            if (asFloat32) writeRaw(out, static_cast<float>(w.values(r, c)));
            else writeRaw(out, w.values(r, c));
        }
    }
    if (!out) throw ConfigError("short write on weights file: " + path.string());
    writeMeta(model, path, asFloat32 ? 4 : 8);
}

FittedModel loadWeights(const std::filesystem::path& path, const SolverLimits& limits) {
    auto metaPath = sidecarPath(path, ".meta.tsv");
    if (!std::filesystem::exists(metaPath))
        throw MissingArtifact("missing weights sidecar: " + metaPath.string());

    FittedModel model;
    std::string cold;
    for (const auto& row : io::readCsv(metaPath, '\t')) {
        if (row.size() < 2) continue;
        if (row[0] == "kind") model.kind = parseModelKind(row[1]);
        else if (row[0] == "item_count") model.itemCount = std::stoll(row[1]);
        else if (row[0] == "attr_count") model.attrCount = std::stoll(row[1]);
        else if (row[0] == "lambda") model.hyper.lambda = std::stod(row[1]);
        else if (row[0] == "delta") model.hyper.delta = std::stod(row[1]);
        else if (row[0] == "alpha") model.hyper.alpha = std::stod(row[1]);
        else if (row[0] == "beta") model.hyper.beta = std::stod(row[1]);
        else if (row[0] == "cold_items") cold = row[1];
    }
    std::istringstream coldIn(cold);
    int idx = 0;
    while (coldIn >> idx) model.coldItems.push_back(idx);

    if (isPopularityKind(model.kind)) {
        model.popularity = Vector::Zero(model.itemCount);
        for (const auto& row : io::readCsv(sidecarPath(path, ".pop.tsv"), '\t'))
            if (row.size() >= 2) model.popularity(std::stoll(row[0])) = std::stod(row[1]);
        if (model.kind == ModelKind::PopularitySeg) {
            for (const auto& row : io::readCsv(sidecarPath(path, ".popseg.tsv"), '\t')) {
                if (row.size() < 2) continue;
                Vector counts = Vector::Zero(model.itemCount);
                std::istringstream in(row[1]);
                double v = 0;
                Index i = 0;
                while (in >> v && i < model.itemCount) counts(i++) = v;
                model.segmentPopularity[row[0]] = std::move(counts);
            }
        }
        return model;
    }

    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifact("missing weights file: " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "FWM1", 4) != 0)
        throw ConfigError("bad magic in weights file: " + path.string());
    std::uint32_t dim = 0, itemCount = 0;
    std::uint8_t dtype = 0;
    if (!readRaw(in, dim) || !readRaw(in, itemCount) || !readRaw(in, dtype))
        throw ConfigError("truncated weights header: " + path.string());
    if (dim == 0 || itemCount == 0 || itemCount > dim)
        throw ConfigError("invalid dimensions in weights file: " + path.string());
    if (static_cast<Index>(dim) > limits.maxDim)
        throw CapExceeded("weights dimension " + std::to_string(dim) + " exceeds cap "
                          + std::to_string(limits.maxDim));
    if (dtype != 4 && dtype != 8)
        throw ConfigError("unknown dtype tag in weights file: " + path.string());

    WeightMatrix w;
    w.dim = dim;
    w.itemCount = itemCount;
    w.values.resize(dim, dim);
    for (std::uint32_t r = 0; r < dim; ++r) {
        for (std::uint32_t c = 0; c < dim; ++c) {
            if (dtype == 4) {
                float v = 0;
                if (!readRaw(in, v)) throw ConfigError("truncated weights file: " + path.string());
                w.values(r, c) = v;
            } else {
                double v = 0;
                if (!readRaw(in, v)) throw ConfigError("truncated weights file: " + path.string());
                w.values(r, c) = v;
            }
        }
    }
    model.weights = std::move(w);
    if (model.itemCount == 0) model.itemCount = dim;
    return model;
}

double WeightHistogram::warmZeroBinMass() const {
    const double total = warm.sum();
    if (total == 0) return 0.0;
    Index zero = (warm.size() - 1) / 2;
    return warm(zero) / total;
}

double WeightHistogram::coldZeroBinMass() const {
    const double total = cold.sum();
    if (total == 0) return 0.0;
    Index zero = (cold.size() - 1) / 2;
    return cold(zero) / total;
}

WeightHistogram weightScoreSummary(const FittedModel& model, const std::vector<int>& coldItems,
                                   int bins) {
    if (!model.weights) throw ParameterError("weightScoreSummary: model has no weight matrix");
    if (bins < 3 || bins % 2 == 0) throw ParameterError("weightScoreSummary: bins must be odd >= 3");
    const Index m = model.itemCount;
    const auto block = model.weights->values.topLeftCorner(m, m);

    double amax = 0.0;
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            if (i != j) amax = std::max(amax, std::abs(block(i, j)));
    if (amax == 0.0) amax = 1.0;

    WeightHistogram h;
    h.edges = Vector::LinSpaced(bins + 1, -amax, amax);
    h.warm = Eigen::VectorXi::Zero(bins);
    h.cold = Eigen::VectorXi::Zero(bins);

    std::vector<char> isCold(m, 0);
    for (int c : coldItems)
        if (c >= 0 && c < m) isCold[c] = 1;

    const double width = 2.0 * amax / bins;
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
            if (i == j) continue;
            int b = static_cast<int>((block(i, j) + amax) / width);
            b = std::clamp(b, 0, bins - 1);
            if (isCold[i] || isCold[j]) h.cold(b) += 1;
            else h.warm(b) += 1;
        }
    }
    return h;
}

}  // namespace fease
