#pragma once

// Scaling benchmark: INTERNAL over the small store, EXTERNAL over the small
// store, EXTERNAL over the large store, per query.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "extrans/engine.hpp"
#include "extrans/text.hpp"

namespace extrans::bench {

namespace fs = std::filesystem;

using AnswerKey = std::set<std::pair<std::string, int>>;

struct Row {
    std::string query;
    double internalSmallMs = 0.0;
    double externalSmallMs = 0.0;
    double externalLargeMs = 0.0;
    std::size_t answersSmall = 0;
    std::size_t answersLarge = 0;
    bool modesAgree = false;     // INTERNAL and EXTERNAL over the small store
    bool largeConsistent = false; // large answers restricted to small docs equal small answers
    bool unparseable = false;

    double ratio() const { return externalLargeMs / std::max(externalSmallMs, 1e-9); }
};

struct Report {
    std::vector<Row> rows;
    std::size_t smallBytes = 0;
    std::size_t largeBytes = 0;
    std::size_t smallDocs = 0;
    std::size_t largeDocs = 0;
    int repetitions = 0;
    int warmups = 0;

    double corpusSizeRatio() const
    {
        return smallBytes ? static_cast<double>(largeBytes) / static_cast<double>(smallBytes) : 0.0;
    }

    std::vector<double> ratios() const
    {
        std::vector<double> out;
        for (const auto& r : rows)
            if (!r.unparseable)
                out.push_back(r.ratio());
        return out;
    }

    double geometricMeanRatio() const
    {
        const auto rs = ratios();
        if (rs.empty())
            return 0.0;
        double logSum = 0.0;
        for (double r : rs)
            logSum += std::log(r);
        return std::exp(logSum / static_cast<double>(rs.size()));
    }

    double maxRatio() const
    {
        const auto rs = ratios();
        return rs.empty() ? 0.0 : *std::max_element(rs.begin(), rs.end());
    }

    bool answersConsistent() const
    {
        return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.modesAgree && r.largeConsistent; });
    }

    bool sublinear() const
    {
        const auto rs = ratios();
        return !rs.empty() && std::all_of(rs.begin(), rs.end(), [&](double r) { return r < corpusSizeRatio(); });
    }

    nlohmann::json toJson() const
    {
        nlohmann::json j;
        j["small"] = {{"bytes", smallBytes}, {"docs", smallDocs}};
        j["large"] = {{"bytes", largeBytes}, {"docs", largeDocs}};
        j["corpusSizeRatio"] = corpusSizeRatio();
        j["repetitions"] = repetitions;
        j["warmups"] = warmups;
        j["queries"] = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json q = {{"query", r.query}, {"unparseable", r.unparseable}};
            if (!r.unparseable) {
                q["internalSmallMs"] = r.internalSmallMs;
                q["externalSmallMs"] = r.externalSmallMs;
                q["externalLargeMs"] = r.externalLargeMs;
                q["ratio"] = r.ratio();
                q["answersSmall"] = r.answersSmall;
                q["answersLarge"] = r.answersLarge;
                q["modesAgree"] = r.modesAgree;
                q["largeConsistent"] = r.largeConsistent;
            }
            j["queries"].push_back(std::move(q));
        }
        j["geometricMeanRatio"] = geometricMeanRatio();
        j["maxRatio"] = maxRatio();
        j["sublinear"] = sublinear();
        j["answersConsistent"] = answersConsistent();
        return j;
    }

    std::string renderTable() const
    {
        std::ostringstream os;
        os << std::fixed << std::setprecision(3);
        os << "query\tint-small ms\text-small ms\text-large ms\tratio\n";
        for (const auto& r : rows) {
            if (r.unparseable) {
                os << r.query << "\tunparseable\n";
                continue;
            }
            os << r.query << "\t" << r.internalSmallMs << "\t" << r.externalSmallMs << "\t" << r.externalLargeMs << "\t"
               << r.ratio() << "\n";
        }
        os << "corpus size ratio " << corpusSizeRatio() << ", geometric mean ratio " << geometricMeanRatio()
           << ", max ratio " << maxRatio() << "\n";
        return os.str();
    }
};

inline std::vector<std::string> loadQueries(const fs::path& path)
{
    std::vector<std::string> out;
    const std::string body = text::readFile(path);
    for (std::string_view line : text::splitLines(body)) {
        auto q = text::trim(line);
        if (!q.empty() && q.front() != '#')
            out.emplace_back(q);
    }
    return out;
}

inline AnswerKey keysOf(const std::vector<rank::Answer>& answers)
{
    AnswerKey out;
    for (const auto& a : answers)
        out.emplace(a.docId, a.sentId);
    return out;
}

template <typename F>
double medianMs(F&& run, int reps, int warmups)
{
    for (int i = 0; i < warmups; ++i)
        run();
    std::vector<double> samples;
    for (int i = 0; i < std::max(reps, 1); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        run();
        samples.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    return n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

inline Report run(const QueryEngine& small, const QueryEngine& large, const std::vector<std::string>& queries,
    int reps = 9, int warmups = 2)
{
    using store::StorageMode;
    Report rep;
    rep.repetitions = reps;
    rep.warmups = warmups;
    rep.smallBytes = small.database().index().totalBytes();
    rep.largeBytes = large.database().index().totalBytes();
    rep.smallDocs = small.database().documentCount();
    rep.largeDocs = large.database().documentCount();
    small.database().preloadAll();

    for (const auto& q : queries) {
        Row row;
        row.query = q;
        try {
            const AnswerKey internal = keysOf(small.ask(q, StorageMode::Internal).answers);
            const AnswerKey external = keysOf(small.ask(q, StorageMode::External).answers);
            const AnswerKey bigAll = keysOf(large.ask(q, StorageMode::External).answers);
            AnswerKey bigSmall;
            for (const auto& k : bigAll)
                if (small.database().index().contains(k.first))
                    bigSmall.insert(k);
            row.answersSmall = external.size();
            row.answersLarge = bigAll.size();
            row.modesAgree = internal == external;
            row.largeConsistent = bigSmall == external;

            row.internalSmallMs = medianMs([&] { small.ask(q, StorageMode::Internal); }, reps, warmups);
            row.externalSmallMs = medianMs([&] { small.ask(q, StorageMode::External); }, reps, warmups);
            row.externalLargeMs = medianMs([&] { large.ask(q, StorageMode::External); }, reps, warmups);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::UnparseableQuery)
                throw;
            row.unparseable = true;
            row.modesAgree = row.largeConsistent = true;
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace extrans::bench
