#include "fease/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <unordered_map>

namespace fease {

TfidfVectors buildTfidf(const std::vector<ItemDocument>& docs) {
    if (docs.empty()) throw ParameterError("buildTfidf: need at least one document");
    const Index m = static_cast<Index>(docs.size());

    // document frequency per token; map keeps the vocabulary sorted
    std::map<std::string, Index> df;
    std::unordered_map<std::string, int> counts;
    for (const auto& doc : docs) {
        counts.clear();
        for (const auto& t : doc.tokens) ++counts[t];
        for (const auto& [t, c] : counts) ++df[t];
    }

    TfidfVectors out;
    out.vocab.reserve(df.size());
    std::unordered_map<std::string, Index> col;
    std::vector<double> idf;
    for (const auto& [t, d] : df) {
        col[t] = static_cast<Index>(out.vocab.size());
        out.vocab.push_back(t);
        idf.push_back(std::log((1.0 + m) / (1.0 + d)) + 1.0);
    }

    std::vector<Triplet> trips;
    for (Index i = 0; i < m; ++i) {
        counts.clear();
        for (const auto& t : docs[i].tokens) ++counts[t];
        double norm2 = 0.0;
        for (const auto& [t, c] : counts) {
            double w = c * idf[col[t]];
            norm2 += w * w;
        }
        if (norm2 == 0.0) continue;
        const double inv = 1.0 / std::sqrt(norm2);
        for (const auto& [t, c] : counts)
            trips.emplace_back(i, col[t], c * idf[col[t]] * inv);
    }
    out.vectors.resize(m, static_cast<Index>(out.vocab.size()));
    out.vectors.setFromTriplets(trips.begin(), trips.end());
    return out;
}

SimilarityPrior cosineSimilarity(const TfidfVectors& tv) {
    const Index m = tv.vectors.rows();
    Matrix r = Matrix::Zero(m, m);

    // accumulate per token column: every pair of items sharing the token
    Eigen::SparseMatrix<double> byToken = tv.vectors;  // column-major copy
    std::vector<std::pair<Index, double>> items;
    for (Index t = 0; t < byToken.outerSize(); ++t) {
        items.clear();
        for (Eigen::SparseMatrix<double>::InnerIterator it(byToken, t); it; ++it)
            items.emplace_back(it.row(), it.value());
        for (std::size_t a = 0; a < items.size(); ++a)
            for (std::size_t b = a + 1; b < items.size(); ++b)
                r(items[a].first, items[b].first) += items[a].second * items[b].second;
    }
    r.triangularView<Eigen::StrictlyLower>() = r.triangularView<Eigen::StrictlyUpper>().transpose();

    // rows are unit vectors, so clamp rounding noise and pin the diagonal
    r = r.cwiseMin(1.0);
    for (Index i = 0; i < m; ++i) {
        bool empty = !tv.vectors.row(i).nonZeros();
        r(i, i) = empty ? 0.0 : 1.0;
    }
    return {std::move(r)};
}

Matrix padPrior(const SimilarityPrior& prior, Index extra) {
    if (extra < 0) throw ParameterError("padPrior: extra must be >= 0");
    const Index m = prior.values.rows();
    Matrix padded = Matrix::Zero(m + extra, m + extra);
    padded.topLeftCorner(m, m) = prior.values;
    return padded;
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

ItemDocument tokenizeMetadata(const ItemMeta& meta) {
    ItemDocument doc;
    doc.itemId = meta.itemId;
    for (const auto& tag : meta.tags) {
        std::string t = lower(tag);
        if (!t.empty()) doc.tokens.push_back(t);
    }
    std::string word;
    for (char c : lower(meta.description) + " ") {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            word += c;
        } else if (!word.empty()) {
            doc.tokens.push_back(word);
            word.clear();
        }
    }
    if (meta.year > 0)
        doc.tokens.push_back("year_" + std::to_string(meta.year / 10 * 10) + "s");
    return doc;
}

}  // namespace fease
