#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "extrans/lingua.hpp"
#include "extrans/logform.hpp"
#include "extrans/rank.hpp"
#include "extrans/store.hpp"

namespace extrans {

namespace fs = std::filesystem;

struct QueryResult {
    logform::QueryForm form;
    std::vector<rank::Answer> answers;
    double elapsedMs = 0.0;
};

// Question in, ranked answers out, over one store root.
class QueryEngine {
public:
    QueryEngine(const fs::path& storeRoot, lingua::Lexicon lexicon, logform::ConceptLexicon concepts,
        bool preload = false)
        : lexicon_(std::move(lexicon)), concepts_(std::move(concepts)), db_(storeRoot, preload) { }

    // Lexicons default to the copies written into the store root at indexing time.
    static QueryEngine open(const fs::path& storeRoot, const std::optional<fs::path>& lexiconPath = std::nullopt,
        const std::optional<fs::path>& conceptsPath = std::nullopt, bool preload = false)
    {
        return QueryEngine(storeRoot, lingua::Lexicon::load(lexiconPath.value_or(storeRoot / "lexicon.tsv")),
            logform::ConceptLexicon::load(conceptsPath.value_or(storeRoot / "concepts.tsv")), preload);
    }

    logform::QueryForm queryForm(std::string_view question) const
    {
        return logform::buildQueryGoals(question, lexicon_, concepts_);
    }

    QueryResult ask(std::string_view question, store::StorageMode mode) const
    {
        const auto start = std::chrono::steady_clock::now();
        QueryResult r;
        r.form = queryForm(question);
        r.answers = rank::answersFrom(db_.query(r.form, mode));
        r.elapsedMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return r;
    }

    const store::ClauseDatabase& database() const { return db_; }
    const lingua::Lexicon& lexicon() const { return lexicon_; }
    const logform::ConceptLexicon& concepts() const { return concepts_; }

private:
    lingua::Lexicon lexicon_;
    logform::ConceptLexicon concepts_;
    store::ClauseDatabase db_;
};

} // namespace extrans
