#include "fease/dataset.hpp"

#include "fease/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_set>

namespace fease {

namespace {

bool parseDouble(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e && !s.empty();
}

bool parseInt64(const std::string& s, std::int64_t& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e && !s.empty();
}

int columnOf(const io::CsvRow& header, const std::string& name,
             const std::filesystem::path& path) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    // allow positional specs like "0", "1" when no header matches
    std::int64_t idx = -1;
    if (parseInt64(name, idx) && idx >= 0) return static_cast<int>(idx);
    throw ConfigError("column '" + name + "' not found in " + path.string());
}

}  // namespace

InteractionLog ingest(const std::filesystem::path& path, const IngestFormat& format,
                      double implicitThreshold) {
    auto rows = io::readCsv(path, format.delimiter);
    if (rows.empty() || (rows.size() == 1 && format.hasHeader))
        throw ConfigError("no records in " + path.string());

    std::size_t first = 0;
    io::CsvRow header;
    if (format.hasHeader) {
        header = rows[0];
        first = 1;
    }
    const int cu = format.hasHeader ? columnOf(header, format.userColumn, path)
                                    : std::stoi(format.userColumn);
    const int ci = format.hasHeader ? columnOf(header, format.itemColumn, path)
                                    : std::stoi(format.itemColumn);
    const int cr = format.hasHeader ? columnOf(header, format.ratingColumn, path)
                                    : std::stoi(format.ratingColumn);
    const int ct = format.hasHeader ? columnOf(header, format.timestampColumn, path)
                                    : std::stoi(format.timestampColumn);
    const int needed = std::max(std::max(cu, ci), std::max(cr, ct));

    InteractionLog log;
    std::vector<std::size_t> badLines;
    std::unordered_set<std::string> seen;
    std::size_t parsed = 0;
    for (std::size_t r = first; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty()) continue;  // blank line
        Interaction rec;
        if (static_cast<int>(row.size()) <= needed || !parseDouble(row[cr], rec.rating)
            || !parseInt64(row[ct], rec.timestamp) || rec.timestamp < 0 || row[cu].empty()
            || row[ci].empty()) {
            ++log.malformedLines;
            if (badLines.size() < 10) badLines.push_back(r + 1);
            continue;
        }
        ++parsed;
        rec.userId = row[cu];
        rec.itemId = row[ci];
        std::string key = rec.userId + '\x1f' + rec.itemId + '\x1f' + row[ct];
        if (!seen.insert(std::move(key)).second) {
            ++log.duplicatesDropped;
            continue;
        }
        if (rec.rating < implicitThreshold) {
            ++log.belowThreshold;
            continue;
        }
        log.records.push_back(std::move(rec));
    }

    const std::size_t total = parsed + log.malformedLines;
    if (total == 0) throw ConfigError("no records in " + path.string());
    if (log.malformedLines * 100 > total) {
        std::string lines;
        for (std::size_t l : badLines) lines += " " + std::to_string(l);
        throw ConfigError("too many malformed lines in " + path.string() + " ("
                          + std::to_string(log.malformedLines) + "/" + std::to_string(total)
                          + "), e.g. lines" + lines);
    }
    return log;
}

FeatureFamily parseFeatureFamily(const std::string& tag) {
    if (tag == "day_of_week") return FeatureFamily::DayOfWeek;
    if (tag == "hour_of_day") return FeatureFamily::HourOfDay;
    if (tag == "rating_count_bucket") return FeatureFamily::RatingCountBucket;
    if (tag == "review_count_bucket") return FeatureFamily::ReviewCountBucket;
    throw ParameterError("unknown feature family: " + tag);
}

std::string featureFamilyName(FeatureFamily f) {
    switch (f) {
        case FeatureFamily::DayOfWeek: return "day_of_week";
        case FeatureFamily::HourOfDay: return "hour_of_day";
        case FeatureFamily::RatingCountBucket: return "rating_count_bucket";
        case FeatureFamily::ReviewCountBucket: return "review_count_bucket";
    }
    return "?";
}

std::string countBucketLabel(std::int64_t count, const std::vector<std::int64_t>& edges) {
    if (edges.empty()) throw ParameterError("bucket edges must be non-empty");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (count < edges[i + 1])
            return std::to_string(edges[i]) + "-" + std::to_string(edges[i + 1] - 1);
    return std::to_string(edges.back()) + "+";
}

namespace {

const char* kDayNames[7] = {"sun", "mon", "tue", "wed", "thu", "fri", "sat"};

std::string dayOfWeekUtc(std::int64_t ts) {
    // epoch day 0 (1970-01-01) was a Thursday
    std::int64_t days = ts / 86400;
    return kDayNames[(days + 4) % 7];
}

std::string hourOfDayUtc(std::int64_t ts) {
    int h = static_cast<int>((ts % 86400) / 3600);
    char buf[4];
    std::snprintf(buf, sizeof buf, "%02d", h);
    return buf;
}

}  // namespace

FeatureAssignment engineerUserFeatures(const InteractionLog& log,
                                       const std::vector<std::string>& familyTags,
                                       const std::vector<std::int64_t>& bucketEdges) {
    FeatureAssignment fa;
    for (const auto& tag : familyTags) fa.families.push_back(parseFeatureFamily(tag));

    std::unordered_map<std::string, std::int64_t> perUserCount;
    for (const auto& rec : log.records) ++perUserCount[rec.userId];

    fa.labels.resize(log.records.size());
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        const auto& rec = log.records[i];
        auto& labels = fa.labels[i];
        labels.reserve(fa.families.size());
        for (FeatureFamily f : fa.families) {
            switch (f) {
                case FeatureFamily::DayOfWeek:
                    labels.push_back("dow=" + dayOfWeekUtc(rec.timestamp));
                    break;
                case FeatureFamily::HourOfDay:
                    labels.push_back("hod=" + hourOfDayUtc(rec.timestamp));
                    break;
                case FeatureFamily::RatingCountBucket:
                    labels.push_back("rc=" + countBucketLabel(perUserCount[rec.userId], bucketEdges));
                    break;
                case FeatureFamily::ReviewCountBucket:
                    labels.push_back("rv=" + countBucketLabel(perUserCount[rec.userId], bucketEdges));
                    break;
            }
        }
    }
    return fa;
}

std::string rawUserOf(const std::string& userKey) {
    auto pos = userKey.find('|');
    return pos == std::string::npos ? userKey : userKey.substr(0, pos);
}

std::pair<InteractionMatrix, SideFeatures> segmentUsers(const InteractionLog& log,
                                                        const FeatureAssignment& features) {
    if (features.labels.size() != log.records.size())
        throw ParameterError("feature assignment does not cover every interaction");

    // segmented key -> set of items; maps are ordered so indices are stable
    std::map<std::string, std::set<std::string>> byKey;
    std::map<std::string, std::vector<std::string>> keyLabels;
    std::set<std::string> items;
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        std::string key = log.records[i].userId;
        for (const auto& l : features.labels[i]) key += "|" + l;
        byKey[key].insert(log.records[i].itemId);
        items.insert(log.records[i].itemId);
        if (!features.labels[i].empty()) keyLabels.emplace(key, features.labels[i]);
    }

    InteractionMatrix m;
    m.itemIds.assign(items.begin(), items.end());
    for (std::size_t i = 0; i < m.itemIds.size(); ++i)
        m.itemIndex[m.itemIds[i]] = static_cast<int>(i);
    for (const auto& [key, _] : byKey) {
        m.userIndex[key] = static_cast<int>(m.userKeys.size());
        m.userKeys.push_back(key);
    }

    std::vector<Triplet> trips;
    for (const auto& [key, itemSet] : byKey) {
        int row = m.userIndex[key];
        for (const auto& it : itemSet) trips.emplace_back(row, m.itemIndex[it], 1.0);
    }
    m.entries.resize(static_cast<Index>(m.userKeys.size()), static_cast<Index>(m.itemIds.size()));
    m.entries.setFromTriplets(trips.begin(), trips.end());

    SideFeatures side;
    std::set<std::string> attrSet;
    for (const auto& [_, labels] : keyLabels)
        for (const auto& l : labels) attrSet.insert(l);
    side.attrVocab.assign(attrSet.begin(), attrSet.end());
    std::unordered_map<std::string, int> attrIndex;
    for (std::size_t i = 0; i < side.attrVocab.size(); ++i)
        attrIndex[side.attrVocab[i]] = static_cast<int>(i);

    std::vector<Triplet> attrTrips;
    for (const auto& [key, labels] : keyLabels) {
        int row = m.userIndex[key];
        for (const auto& l : labels) attrTrips.emplace_back(row, attrIndex[l], 1.0);
    }
    side.userAttr.resize(static_cast<Index>(m.userKeys.size()),
                         static_cast<Index>(side.attrVocab.size()));
    side.userAttr.setFromTriplets(attrTrips.begin(), attrTrips.end());
    side.tagItem.resize(0, static_cast<Index>(m.itemIds.size()));
    return {std::move(m), std::move(side)};
}

std::vector<ItemMeta> loadItemMetadata(const std::filesystem::path& path) {
    auto rows = io::readCsv(path);
    if (rows.empty()) throw ConfigError("no records in " + path.string());
    const auto& header = rows[0];
    auto col = [&](const std::string& name) { return columnOf(header, name, path); };
    const int ci = col("item_id"), ctag = col("tags"), cd = col("description"), cy = col("year");

    std::vector<ItemMeta> metas;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() == 1 && row[0].empty()) continue;
        if (static_cast<int>(row.size()) <= std::max(std::max(ci, ctag), std::max(cd, cy)))
            continue;
        ItemMeta meta;
        meta.itemId = row[ci];
        std::string tag;
        for (char c : row[ctag] + "|") {
            if (c == '|') {
                if (!tag.empty()) meta.tags.push_back(tag);
                tag.clear();
            } else {
                tag += c;
            }
        }
        meta.description = row[cd];
        std::int64_t y = 0;
        if (parseInt64(row[cy], y)) meta.year = static_cast<int>(y);
        metas.push_back(std::move(meta));
    }
    return metas;
}

std::pair<SpMatrix, std::vector<std::string>> buildTagItemMatrix(
    const std::vector<ItemMeta>& metadata, const InteractionMatrix& matrix) {
    std::set<std::string> tagSet;
    for (const auto& meta : metadata)
        if (matrix.itemIndex.count(meta.itemId))
            for (const auto& t : meta.tags) tagSet.insert(t);

    std::vector<std::string> vocab(tagSet.begin(), tagSet.end());
    std::unordered_map<std::string, int> tagIndex;
    for (std::size_t i = 0; i < vocab.size(); ++i) tagIndex[vocab[i]] = static_cast<int>(i);

    std::vector<Triplet> trips;
    for (const auto& meta : metadata) {
        auto it = matrix.itemIndex.find(meta.itemId);
        if (it == matrix.itemIndex.end()) continue;
        for (const auto& t : meta.tags) trips.emplace_back(tagIndex[t], it->second, 1.0);
    }
    SpMatrix tagItem(static_cast<Index>(vocab.size()), static_cast<Index>(matrix.itemIds.size()));
    tagItem.setFromTriplets(trips.begin(), trips.end());
    return {std::move(tagItem), std::move(vocab)};
}

AugmentedInput buildAugmentedInput(const InteractionMatrix& train, const SpMatrix& userAttr,
                                   const SpMatrix& tagItem, double alpha, double beta) {
    const Index n = train.entries.rows();
    const Index m = train.entries.cols();
    const Index l = tagItem.rows();
    const Index k = userAttr.cols();
    if (userAttr.rows() != n)
        throw ParameterError("buildAugmentedInput: U rows must match train rows");
    if (l > 0 && tagItem.cols() != m)
        throw ParameterError("buildAugmentedInput: T columns must match train columns");
    if (alpha < 0 || beta < 0)
        throw ParameterError("buildAugmentedInput: alpha and beta must be >= 0");

    std::vector<Triplet> trips;
    trips.reserve(train.entries.nonZeros() + (beta > 0 ? userAttr.nonZeros() : 0)
                  + (alpha > 0 ? tagItem.nonZeros() : 0));
    for (Index r = 0; r < train.entries.outerSize(); ++r)
        for (SpMatrix::InnerIterator it(train.entries, r); it; ++it)
            trips.emplace_back(it.row(), it.col(), it.value());
    if (beta > 0)
        for (Index r = 0; r < userAttr.outerSize(); ++r)
            for (SpMatrix::InnerIterator it(userAttr, r); it; ++it)
                trips.emplace_back(it.row(), m + it.col(), beta * it.value());
    if (alpha > 0)
        for (Index r = 0; r < tagItem.outerSize(); ++r)
            for (SpMatrix::InnerIterator it(tagItem, r); it; ++it)
                trips.emplace_back(n + it.row(), it.col(), alpha * it.value());

    AugmentedInput aug;
    aug.alpha = alpha;
    aug.beta = beta;
    aug.items = m;
    aug.attrs = k;
    aug.z.resize(n + l, m + k);
    aug.z.setFromTriplets(trips.begin(), trips.end());
    return aug;
}

}  // namespace fease
