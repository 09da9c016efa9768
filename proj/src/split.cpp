#include "fease/split.hpp"

#include "fease/io.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace fease {

namespace {

// rng() % n is biased by < 2^-40 for desk-scale n; fine and portable
std::size_t bounded(std::mt19937_64& rng, std::size_t n) { return rng() % n; }

void fisherYates(std::vector<int>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[bounded(rng, i)]);
}

std::vector<int> samplePrefix(std::vector<int> pool, std::size_t count, std::mt19937_64& rng) {
    for (std::size_t i = 0; i < count && i + 1 < pool.size(); ++i)
        std::swap(pool[i], pool[i + bounded(rng, pool.size() - i)]);
    pool.resize(std::min(count, pool.size()));
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace

bool ColdSplit::isColdUser(int u) const {
    return std::binary_search(coldUsers.begin(), coldUsers.end(), u);
}

bool ColdSplit::isColdItem(int i) const {
    return std::binary_search(coldItems.begin(), coldItems.end(), i);
}

SpMatrix ColdSplit::trainUserAttr() const {
    std::vector<Triplet> trips;
    for (std::size_t r = 0; r < train.userKeys.size(); ++r) {
        int u = userIndex.at(train.userKeys[r]);
        for (SpMatrix::InnerIterator it(side.userAttr, u); it; ++it)
            trips.emplace_back(static_cast<Index>(r), it.col(), it.value());
    }
    SpMatrix m(static_cast<Index>(train.userKeys.size()), side.userAttr.cols());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

ColdSplit makeColdSplit(const InteractionMatrix& matrix, const SideFeatures& side,
                        const SplitQuota& quota) {
    const Index n = matrix.entries.rows();
    const Index m = matrix.entries.cols();
    if (quota.coldUsers < 0 || quota.coldUsers >= n)
        throw ParameterError("makeColdSplit: cold user quota must be in [0, N)");
    if (quota.coldItems < 0 || quota.coldItems >= m)
        throw ParameterError("makeColdSplit: cold item quota must be in [0, M)");
    if (!(quota.holdoutFraction > 0.0 && quota.holdoutFraction < 1.0))
        throw ParameterError("makeColdSplit: holdout fraction must be in (0, 1)");

    std::mt19937_64 rng(quota.seed);

    ColdSplit split;
    split.seed = quota.seed;
    split.side = side;
    split.userKeys = matrix.userKeys;
    split.userIndex = matrix.userIndex;
    split.itemIds = matrix.itemIds;
    split.itemIndex = matrix.itemIndex;

    // cold users: uniform over all segmented users
    {
        std::vector<int> all(n);
        for (Index i = 0; i < n; ++i) all[i] = static_cast<int>(i);
        split.coldUsers = samplePrefix(std::move(all), quota.coldUsers, rng);
    }

    // cold items: uniform among below-median-count items, widening the pool
    // when the quota cannot be met there
    if (quota.coldItems > 0) {
        Vector counts = Vector::Zero(m);
        for (Index r = 0; r < matrix.entries.outerSize(); ++r)
            for (SpMatrix::InnerIterator it(matrix.entries, r); it; ++it) counts(it.col()) += 1;
        std::vector<double> sorted(counts.data(), counts.data() + m);
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[m / 2];
        std::vector<int> pool;
        for (Index i = 0; i < m; ++i)
            if (counts(i) > 0 && counts(i) < median) pool.push_back(static_cast<int>(i));
        if (static_cast<int>(pool.size()) < quota.coldItems) {
            pool.clear();
            for (Index i = 0; i < m; ++i)
                if (counts(i) > 0 && counts(i) <= median) pool.push_back(static_cast<int>(i));
        }
        if (static_cast<int>(pool.size()) < quota.coldItems) {
            pool.clear();
            for (Index i = 0; i < m; ++i)
                if (counts(i) > 0) pool.push_back(static_cast<int>(i));
        }
        split.coldItems = samplePrefix(std::move(pool), quota.coldItems, rng);
    }

    split.inputs.resize(n);
    split.valTargets.resize(n);
    split.testTargets.resize(n);

    std::unordered_map<int, int> coldUserSide;  // universe row -> 0 val, 1 test
    for (std::size_t j = 0; j < split.coldUsers.size(); ++j)
        coldUserSide[split.coldUsers[j]] = static_cast<int>(j % 2);

    for (Index u = 0; u < n; ++u) {
        std::vector<int> items;
        for (SpMatrix::InnerIterator it(matrix.entries, u); it; ++it)
            items.push_back(static_cast<int>(it.col()));

        auto coldIt = coldUserSide.find(static_cast<int>(u));
        if (coldIt != coldUserSide.end()) {
            auto& dst = coldIt->second == 0 ? split.valTargets[u] : split.testTargets[u];
            dst = items;
            continue;
        }

        std::vector<int> coldPart, warmPart;
        for (int it : items)
            (split.isColdItem(it) ? coldPart : warmPart).push_back(it);
        for (int it : coldPart)
            ((rng() & 1) == 0 ? split.valTargets[u] : split.testTargets[u]).push_back(it);

        fisherYates(warmPart, rng);
        const std::size_t h =
            static_cast<std::size_t>(quota.holdoutFraction * static_cast<double>(warmPart.size()));
        for (std::size_t i = 0; i < h; ++i)
            (i % 2 == 0 ? split.valTargets[u] : split.testTargets[u]).push_back(warmPart[i]);
        split.inputs[u].assign(warmPart.begin() + static_cast<std::ptrdiff_t>(h), warmPart.end());
        std::sort(split.inputs[u].begin(), split.inputs[u].end());
        if (split.inputs[u].empty() && !items.empty()) ++split.emptiedRows;
    }
    for (Index u = 0; u < n; ++u) {
        std::sort(split.valTargets[u].begin(), split.valTargets[u].end());
        std::sort(split.testTargets[u].begin(), split.testTargets[u].end());
    }

    // train matrix over rows that kept at least one input
    std::vector<Triplet> trips;
    for (Index u = 0; u < n; ++u) {
        if (split.inputs[u].empty()) continue;
        int row = static_cast<int>(split.train.userKeys.size());
        split.train.userKeys.push_back(matrix.userKeys[u]);
        split.train.userIndex[matrix.userKeys[u]] = row;
        for (int it : split.inputs[u]) trips.emplace_back(row, it, 1.0);
    }
    split.train.itemIds = matrix.itemIds;
    split.train.itemIndex = matrix.itemIndex;
    split.train.entries.resize(static_cast<Index>(split.train.userKeys.size()), m);
    split.train.entries.setFromTriplets(trips.begin(), trips.end());
    return split;
}

namespace {

std::string joinItems(const std::vector<int>& idx, const std::vector<std::string>& ids) {
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += ' ';
        out += ids[idx[i]];
    }
    return out;
}

void writeTargets(const std::filesystem::path& path, const ColdSplit& split,
                  const std::vector<std::vector<int>>& targets) {
    std::ostringstream out;
    for (std::size_t u = 0; u < split.userKeys.size(); ++u) {
        if (targets[u].empty()) continue;
        out << split.userKeys[u] << '\t' << joinItems(targets[u], split.itemIds) << '\n';
    }
    io::writeFile(path, out.str());
}

void writeVocab(const std::filesystem::path& path, const std::vector<std::string>& vocab) {
    std::ostringstream out;
    for (std::size_t i = 0; i < vocab.size(); ++i) out << i << '\t' << vocab[i] << '\n';
    io::writeFile(path, out.str());
}

std::vector<std::string> readVocab(const std::filesystem::path& path) {
    std::vector<std::string> vocab;
    for (const auto& line : io::readCsv(path, '\t')) {
        if (line.size() < 2) continue;
        vocab.push_back(line[1]);
    }
    return vocab;
}

}  // namespace

void saveSplit(const std::filesystem::path& dir, const ColdSplit& split) {
    std::filesystem::create_directories(dir);

    // train matrix in universe row indexing so row ids are stable
    {
        std::ostringstream out;
        std::size_t nnz = 0;
        for (const auto& in : split.inputs) nnz += in.size();
        out << split.userKeys.size() << ' ' << split.itemIds.size() << ' ' << nnz << '\n';
        for (std::size_t u = 0; u < split.userKeys.size(); ++u)
            for (int it : split.inputs[u]) out << u << ' ' << it << '\n';
        io::writeFile(dir / "train.txt", out.str());
    }

    writeTargets(dir / "targets_val.tsv", split, split.valTargets);
    writeTargets(dir / "targets_test.tsv", split, split.testTargets);
    writeVocab(dir / "vocab_items.tsv", split.itemIds);
    writeVocab(dir / "vocab_tags.tsv", split.side.tagVocab);
    writeVocab(dir / "vocab_attrs.tsv", split.side.attrVocab);
    writeVocab(dir / "vocab_users.tsv", split.userKeys);
    io::writeTripletMatrix(dir / "user_attrs.txt", split.side.userAttr);
    io::writeTripletMatrix(dir / "tag_items.txt", split.side.tagItem);

    {
        std::ostringstream out;
        for (int u : split.coldUsers) out << split.userKeys[u] << '\n';
        io::writeFile(dir / "cold_users.tsv", out.str());
    }
    {
        std::ostringstream out;
        for (int i : split.coldItems) out << split.itemIds[i] << '\n';
        io::writeFile(dir / "cold_items.tsv", out.str());
    }
    {
        std::ostringstream out;
        out << "seed\t" << split.seed << '\n';
        out << "emptied_rows\t" << split.emptiedRows << '\n';
        out << "n_users\t" << split.userKeys.size() << '\n';
        out << "n_items\t" << split.itemIds.size() << '\n';
        out << "n_tags\t" << split.side.tagVocab.size() << '\n';
        out << "n_attrs\t" << split.side.attrVocab.size() << '\n';
        out << "n_cold_users\t" << split.coldUsers.size() << '\n';
        out << "n_cold_items\t" << split.coldItems.size() << '\n';
        for (const auto& [k, v] : split.meta) out << k << '\t' << v << '\n';
        io::writeFile(dir / "split_meta.tsv", out.str());
    }
}

ColdSplit loadSplit(const std::filesystem::path& dir) {
    if (!std::filesystem::exists(dir / "split_meta.tsv"))
        throw MissingArtifact("split directory not found or incomplete: " + dir.string());

    ColdSplit split;
    split.userKeys = readVocab(dir / "vocab_users.tsv");
    split.itemIds = readVocab(dir / "vocab_items.tsv");
    split.side.tagVocab = readVocab(dir / "vocab_tags.tsv");
    split.side.attrVocab = readVocab(dir / "vocab_attrs.tsv");
    for (std::size_t i = 0; i < split.userKeys.size(); ++i)
        split.userIndex[split.userKeys[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < split.itemIds.size(); ++i)
        split.itemIndex[split.itemIds[i]] = static_cast<int>(i);

    SpMatrix full = io::readTripletMatrix(dir / "train.txt");
    if (full.rows() != static_cast<Index>(split.userKeys.size())
        || full.cols() != static_cast<Index>(split.itemIds.size()))
        throw ConfigError("train.txt dimensions disagree with vocab files in " + dir.string());
    split.inputs.resize(split.userKeys.size());
    for (Index u = 0; u < full.outerSize(); ++u)
        for (SpMatrix::InnerIterator it(full, u); it; ++it)
            split.inputs[u].push_back(static_cast<int>(it.col()));

    split.side.userAttr = io::readTripletMatrix(dir / "user_attrs.txt");
    split.side.tagItem = io::readTripletMatrix(dir / "tag_items.txt");

    auto readTargets = [&](const std::filesystem::path& path, std::vector<std::vector<int>>& dst) {
        dst.assign(split.userKeys.size(), {});
        for (const auto& row : io::readCsv(path, '\t')) {
            if (row.size() < 2) continue;
            auto uit = split.userIndex.find(row[0]);
            if (uit == split.userIndex.end())
                throw ConfigError("unknown user key in " + path.string() + ": " + row[0]);
            std::istringstream items(row[1]);
            std::string id;
            while (items >> id) dst[uit->second].push_back(split.itemIndex.at(id));
            std::sort(dst[uit->second].begin(), dst[uit->second].end());
        }
    };
    readTargets(dir / "targets_val.tsv", split.valTargets);
    readTargets(dir / "targets_test.tsv", split.testTargets);

    for (const auto& row : io::readCsv(dir / "cold_users.tsv", '\t'))
        if (!row.empty() && !row[0].empty()) split.coldUsers.push_back(split.userIndex.at(row[0]));
    std::sort(split.coldUsers.begin(), split.coldUsers.end());
    for (const auto& row : io::readCsv(dir / "cold_items.tsv", '\t'))
        if (!row.empty() && !row[0].empty()) split.coldItems.push_back(split.itemIndex.at(row[0]));
    std::sort(split.coldItems.begin(), split.coldItems.end());

    for (const auto& row : io::readCsv(dir / "split_meta.tsv", '\t')) {
        if (row.size() < 2) continue;
        if (row[0] == "seed") split.seed = std::stoull(row[1]);
        else if (row[0] == "emptied_rows") split.emptiedRows = std::stoi(row[1]);
        else if (row[0].rfind("n_", 0) != 0) split.meta[row[0]] = row[1];
    }

    // rebuild the warm-row train matrix
    std::vector<Triplet> trips;
    for (std::size_t u = 0; u < split.userKeys.size(); ++u) {
        if (split.inputs[u].empty()) continue;
        int row = static_cast<int>(split.train.userKeys.size());
        split.train.userKeys.push_back(split.userKeys[u]);
        split.train.userIndex[split.userKeys[u]] = row;
        for (int it : split.inputs[u]) trips.emplace_back(row, it, 1.0);
    }
    split.train.itemIds = split.itemIds;
    split.train.itemIndex = split.itemIndex;
    split.train.entries.resize(static_cast<Index>(split.train.userKeys.size()),
                               static_cast<Index>(split.itemIds.size()));
    split.train.entries.setFromTriplets(trips.begin(), trips.end());
    return split;
}

}  // namespace fease
