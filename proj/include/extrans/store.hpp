#pragma once

// Per-document clause stores on disk, the inverted concept-symbol index used
// for preselection, and the query front over both storage modes.
//
// Layout under a store root:
//   index.tsv          symbol<TAB>docId, sorted
//   docs.tsv           docId<TAB>source bytes, sorted
//   docs/<id>.facts    `#sent <id> <readingCount> <text>` headers, one fact per line
//   docs/<id>.meta     sentence token spans and fact provenance
//   lexicon.tsv, concepts.tsv   copies of the lexicons used at indexing time

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "extrans/error.hpp"
#include "extrans/lingua.hpp"
#include "extrans/logform.hpp"
#include "extrans/prover.hpp"
#include "extrans/text.hpp"

namespace extrans::store {

namespace fs = std::filesystem;
using logform::HornFact;
using logform::QueryForm;

struct CharSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    auto operator<=>(const CharSpan&) const = default;
};

struct SentenceRecord {
    std::string rawText;
    std::uint64_t readingCount = 1;
    std::vector<CharSpan> tokenSpans;

    bool operator==(const SentenceRecord&) const = default;
};

struct DocClauseStore {
    std::string docId;
    std::size_t sourceBytes = 0;
    std::map<int, SentenceRecord> sentences;
    std::vector<HornFact> facts; // (sentId, ordinal) ascending

    const HornFact* fact(const prover::FactRef& ref) const
    {
        auto it = std::lower_bound(facts.begin(), facts.end(), ref, [](const HornFact& f, const prover::FactRef& r) {
            return std::pair(f.sentId, f.ordinal) < std::pair(r.sentId, r.ordinal);
        });
        if (it == facts.end() || it->sentId != ref.sentId || it->ordinal != ref.ordinal)
            return nullptr;
        return &*it;
    }

    std::set<std::string> symbols() const
    {
        std::set<std::string> out;
        for (const auto& f : facts)
            if (f.literal.predicate != logform::Predicate::Holds)
                out.insert(f.literal.symbol());
        return out;
    }

    bool operator==(const DocClauseStore&) const = default;
};

inline bool validDocId(std::string_view id)
{
    return !id.empty() && id != "." && id != ".." &&
        id.find_first_of("/\\\t\n\r") == std::string_view::npos;
}

// ---------------------------------------------------------------------------
// Serialization

inline std::string serializeFacts(const DocClauseStore& store)
{
    std::string out;
    auto factIt = store.facts.begin();
    for (const auto& [sentId, rec] : store.sentences) {
        out += "#sent " + std::to_string(sentId) + " " + std::to_string(rec.readingCount) + " " + rec.rawText + "\n";
        for (; factIt != store.facts.end() && factIt->sentId == sentId; ++factIt)
            out += logform::to_string(factIt->literal) + ".\n";
    }
    return out;
}

inline std::string serializeMeta(const DocClauseStore& store)
{
    std::string out = "#doc\t" + store.docId + "\t" + std::to_string(store.sourceBytes) + "\n";
    for (const auto& [sentId, rec] : store.sentences) {
        std::string spans;
        for (const auto& sp : rec.tokenSpans) {
            if (!spans.empty())
                spans += ',';
            spans += std::to_string(sp.start) + "-" + std::to_string(sp.end);
        }
        out += "sent\t" + std::to_string(sentId) + "\t" + std::to_string(rec.readingCount) + "\t" + spans + "\t" +
            rec.rawText + "\n";
    }
    for (const auto& f : store.facts) {
        std::string toks;
        for (std::size_t t : f.sourceTokens) {
            if (!toks.empty())
                toks += ',';
            toks += std::to_string(t);
        }
        out += "fact\t" + std::to_string(f.sentId) + "\t" + std::to_string(f.ordinal) + "\t" + toks + "\n";
    }
    return out;
}

namespace detail {

[[noreturn]] inline void corrupt(const std::string& file, std::size_t line, const std::string& why)
{
    throw Error(ErrorCode::StoreCorrupt, file + ":" + std::to_string(line) + ": " + why);
}

template <typename Int>
bool parseInt(std::string_view s, Int& out)
{
    if (s.empty())
        return false;
    Int value = 0;
    for (char c : s) {
        if (c < '0' || c > '9')
            return false;
        value = static_cast<Int>(value * 10 + (c - '0'));
    }
    out = value;
    return true;
}

} // namespace detail

inline DocClauseStore parseStore(const std::string& docId, std::string_view factsText, std::string_view metaText,
    const std::string& factsName = "<facts>", const std::string& metaName = "<meta>")
{
    using detail::corrupt;
    DocClauseStore store;
    store.docId = docId;

    std::map<std::pair<int, int>, std::vector<std::size_t>> provenance;
    std::size_t lineNo = 0;
    for (std::string_view line : text::splitLines(metaText)) {
        ++lineNo;
        if (lineNo == 1) {
            auto f = text::split(line, '\t');
            if (f.size() != 3 || f[0] != "#doc" || f[1] != docId || !detail::parseInt(f[2], store.sourceBytes))
                corrupt(metaName, lineNo, "bad #doc header");
            continue;
        }
        if (line.substr(0, 5) == "sent\t") {
            auto f = text::splitN(line, '\t', 5);
            int sentId = 0;
            SentenceRecord rec;
            if (f.size() != 5 || !detail::parseInt(f[1], sentId) || !detail::parseInt(f[2], rec.readingCount) ||
                rec.readingCount == 0)
                corrupt(metaName, lineNo, "bad sentence record");
            if (!f[3].empty()) {
                for (std::string_view sp : text::split(f[3], ',')) {
                    auto ab = text::split(sp, '-');
                    CharSpan span;
                    if (ab.size() != 2 || !detail::parseInt(ab[0], span.start) || !detail::parseInt(ab[1], span.end) ||
                        span.start >= span.end || span.end > f[4].size())
                        corrupt(metaName, lineNo, "bad token span");
                    rec.tokenSpans.push_back(span);
                }
            }
            rec.rawText = std::string(f[4]);
            if (!store.sentences.emplace(sentId, std::move(rec)).second)
                corrupt(metaName, lineNo, "duplicate sentence id");
        } else if (line.substr(0, 5) == "fact\t") {
            auto f = text::split(line, '\t');
            int sentId = 0;
            int ordinal = 0;
            if (f.size() != 4 || !detail::parseInt(f[1], sentId) || !detail::parseInt(f[2], ordinal))
                corrupt(metaName, lineNo, "bad fact record");
            std::vector<std::size_t> toks;
            if (!f[3].empty()) {
                for (std::string_view t : text::split(f[3], ',')) {
                    std::size_t v = 0;
                    if (!detail::parseInt(t, v))
                        corrupt(metaName, lineNo, "bad token index");
                    toks.push_back(v);
                }
            }
            provenance[{sentId, ordinal}] = std::move(toks);
        } else {
            corrupt(metaName, lineNo, "unrecognized line");
        }
    }
    if (lineNo == 0)
        corrupt(metaName, 1, "missing #doc header");

    lineNo = 0;
    std::optional<int> current;
    int ordinal = 0;
    for (std::string_view line : text::splitLines(factsText)) {
        ++lineNo;
        if (line.substr(0, 6) == "#sent ") {
            auto f = text::splitN(line, ' ', 4);
            int sentId = 0;
            std::uint64_t readings = 0;
            if (f.size() != 4 || !detail::parseInt(f[1], sentId) || !detail::parseInt(f[2], readings))
                corrupt(factsName, lineNo, "bad #sent header");
            auto it = store.sentences.find(sentId);
            if (it == store.sentences.end() || it->second.readingCount != readings || it->second.rawText != f[3])
                corrupt(factsName, lineNo, "sentence header disagrees with meta");
            if (current && sentId <= *current)
                corrupt(factsName, lineNo, "sentences out of order");
            current = sentId;
            ordinal = 0;
            continue;
        }
        if (!current)
            corrupt(factsName, lineNo, "fact before any #sent header");
        auto lit = logform::parseLiteral(line, *current);
        if (!lit || !logform::isGround(*lit))
            corrupt(factsName, lineNo, "malformed fact");
        HornFact fact;
        fact.literal = std::move(*lit);
        fact.docId = docId;
        fact.sentId = *current;
        fact.ordinal = ordinal++;
        auto prov = provenance.find({fact.sentId, fact.ordinal});
        if (prov == provenance.end())
            corrupt(factsName, lineNo, "fact without provenance record");
        const std::size_t tokenCount = store.sentences.at(fact.sentId).tokenSpans.size();
        for (std::size_t t : prov->second)
            if (t >= tokenCount)
                corrupt(metaName, 0, "token index out of range for sentence " + std::to_string(fact.sentId));
        fact.sourceTokens = prov->second;
        provenance.erase(prov);
        store.facts.push_back(std::move(fact));
    }
    if (!provenance.empty())
        corrupt(metaName, 0, "provenance for missing facts");
    return store;
}

// ---------------------------------------------------------------------------
// Document ingestion (pure part)

struct IngestStats {
    std::size_t sentences = 0;
    std::size_t facts = 0;
    std::size_t parseFailures = 0;
};

using WarningSink = std::function<void(const std::string&)>;

// One sentence per non-blank line; sentence ids count non-blank lines from 0.
inline DocClauseStore buildDocument(const std::string& docId, std::string_view body, const lingua::Lexicon& lexicon,
    const logform::ConceptLexicon& concepts, const WarningSink& warn = {})
{
    DocClauseStore store;
    store.docId = docId;
    store.sourceBytes = body.size();
    int sentId = 0;
    for (std::string_view line : text::splitLines(body)) {
        const std::string_view sentence = text::trim(line);
        if (sentence.empty())
            continue;
        auto analyzed = lingua::analyze(docId, sentId, sentence, lexicon);
        SentenceRecord rec;
        rec.rawText = std::string(sentence);
        rec.readingCount = analyzed.sentence.readingCount;
        for (const auto& tok : analyzed.sentence.tokens)
            rec.tokenSpans.push_back({tok.spanStart, tok.spanEnd});
        store.sentences.emplace(sentId, std::move(rec));
        if (analyzed.parseFailed()) {
            if (warn)
                warn("parse failure: " + docId + ":" + std::to_string(sentId) + ": " + std::string(sentence));
        } else {
            for (auto& f : logform::buildFactClauses(analyzed.structures, analyzed.sentence, concepts))
                store.facts.push_back(std::move(f));
        }
        ++sentId;
    }
    return store;
}

// ---------------------------------------------------------------------------
// Inverted index

class CorpusIndex {
public:
    void addDocument(const DocClauseStore& store)
    {
        docSizes_[store.docId] = store.sourceBytes;
        for (const auto& s : store.symbols())
            symbolToDocs_[s].insert(store.docId);
    }

    void merge(const CorpusIndex& other)
    {
        for (const auto& [d, n] : other.docSizes_)
            docSizes_[d] = n;
        for (const auto& [s, docs] : other.symbolToDocs_)
            symbolToDocs_[s].insert(docs.begin(), docs.end());
    }

    bool contains(const std::string& docId) const { return docSizes_.count(docId) > 0; }

    // Documents containing every symbol. No symbols selects every document;
    // a symbol absent from the index selects none.
    std::set<std::string> preselect(const std::set<std::string>& symbols) const
    {
        std::set<std::string> out;
        if (symbols.empty()) {
            for (const auto& [d, _] : docSizes_)
                out.insert(d);
            return out;
        }
        std::vector<const std::set<std::string>*> postings;
        for (const auto& s : symbols) {
            auto it = symbolToDocs_.find(s);
            if (it == symbolToDocs_.end())
                return out;
            postings.push_back(&it->second);
        }
        std::sort(postings.begin(), postings.end(), [](auto* a, auto* b) { return a->size() < b->size(); });
        for (const auto& doc : *postings.front()) {
            if (std::all_of(postings.begin() + 1, postings.end(), [&](auto* p) { return p->count(doc) > 0; }))
                out.insert(doc);
        }
        return out;
    }

    const std::map<std::string, std::set<std::string>>& symbolToDocs() const { return symbolToDocs_; }
    const std::map<std::string, std::size_t>& docSizes() const { return docSizes_; }

    std::size_t totalBytes() const
    {
        std::size_t n = 0;
        for (const auto& [_, b] : docSizes_)
            n += b;
        return n;
    }

    std::string serializeIndex() const
    {
        std::string out;
        for (const auto& [s, docs] : symbolToDocs_)
            for (const auto& d : docs)
                out += s + "\t" + d + "\n";
        return out;
    }

    std::string serializeDocs() const
    {
        std::string out;
        for (const auto& [d, n] : docSizes_)
            out += d + "\t" + std::to_string(n) + "\n";
        return out;
    }

    static CorpusIndex parse(std::string_view indexText, std::string_view docsText, const std::string& indexName = "index.tsv",
        const std::string& docsName = "docs.tsv")
    {
        CorpusIndex idx;
        std::size_t lineNo = 0;
        for (std::string_view line : text::splitLines(docsText)) {
            ++lineNo;
            auto f = text::split(line, '\t');
            std::size_t bytes = 0;
            if (f.size() != 2 || !validDocId(f[0]) || !detail::parseInt(f[1], bytes))
                detail::corrupt(docsName, lineNo, "expected docId<TAB>bytes");
            idx.docSizes_[std::string(f[0])] = bytes;
        }
        lineNo = 0;
        for (std::string_view line : text::splitLines(indexText)) {
            ++lineNo;
            auto f = text::split(line, '\t');
            if (f.size() != 2 || f[0].empty() || !idx.contains(std::string(f[1])))
                detail::corrupt(indexName, lineNo, "expected symbol<TAB>known docId");
            idx.symbolToDocs_[std::string(f[0])].insert(std::string(f[1]));
        }
        return idx;
    }

    bool operator==(const CorpusIndex&) const = default;

private:
    std::map<std::string, std::set<std::string>> symbolToDocs_;
    std::map<std::string, std::size_t> docSizes_;
};

inline std::set<std::string> preselect(const std::set<std::string>& symbols, const CorpusIndex& index)
{
    return index.preselect(symbols);
}

// ---------------------------------------------------------------------------
// Writing a store root

inline fs::path factsPath(const fs::path& root, const std::string& docId)
{
    return root / "docs" / (docId + ".facts");
}

inline fs::path metaPath(const fs::path& root, const std::string& docId)
{
    return root / "docs" / (docId + ".meta");
}

class Indexer {
public:
    Indexer(fs::path root, const lingua::Lexicon& lexicon, const logform::ConceptLexicon& concepts)
        : root_(std::move(root)), lexicon_(lexicon), concepts_(concepts)
    {
        std::error_code ec;
        fs::create_directories(root_ / "docs", ec);
        if (ec)
            throw Error(ErrorCode::IoError, "cannot create store directory " + (root_ / "docs").string() + ": " +
                    ec.message());
    }

    void onWarning(WarningSink sink) { warn_ = std::move(sink); }

    DocClauseStore ingestDocument(const std::string& docId, std::string_view body)
    {
        checkNew(docId);
        DocClauseStore store = buildDocument(docId, body, lexicon_, concepts_, [&](const std::string& msg) {
            ++stats_.parseFailures;
            if (warn_)
                warn_(msg);
        });
        write(store);
        return store;
    }

    // Persists an already-built store (used by generators and tests).
    void addStore(const DocClauseStore& store)
    {
        checkNew(store.docId);
        write(store);
    }

    void finish(std::string_view lexiconText = {}, std::string_view conceptsText = {})
    {
        text::writeFile(root_ / "index.tsv", index_.serializeIndex());
        text::writeFile(root_ / "docs.tsv", index_.serializeDocs());
        if (!lexiconText.empty())
            text::writeFile(root_ / "lexicon.tsv", lexiconText);
        if (!conceptsText.empty())
            text::writeFile(root_ / "concepts.tsv", conceptsText);
    }

    const CorpusIndex& index() const { return index_; }
    const IngestStats& stats() const { return stats_; }
    std::size_t documents() const { return index_.docSizes().size(); }

private:
    void checkNew(const std::string& docId) const
    {
        if (!validDocId(docId))
            throw Error(ErrorCode::IoError, "invalid document id '" + docId + "'");
        if (index_.contains(docId))
            throw Error(ErrorCode::DuplicateDoc, "duplicate document id '" + docId + "'");
    }

    void write(const DocClauseStore& store)
    {
        text::writeFile(factsPath(root_, store.docId), serializeFacts(store));
        text::writeFile(metaPath(root_, store.docId), serializeMeta(store));
        index_.addDocument(store);
        stats_.sentences += store.sentences.size();
        stats_.facts += store.facts.size();
    }

    fs::path root_;
    const lingua::Lexicon& lexicon_;
    const logform::ConceptLexicon& concepts_;
    CorpusIndex index_;
    IngestStats stats_;
    WarningSink warn_;
};

// ---------------------------------------------------------------------------
// Query side

enum class StorageMode { Internal, External };

inline const char* to_string(StorageMode m)
{
    return m == StorageMode::Internal ? "internal" : "external";
}

struct DocProof {
    std::string docId;
    int sentId = 0;
    prover::Proof proof;
    std::shared_ptr<const DocClauseStore> store;
};

// A proof counts as an answer when it stays inside one sentence and every
// matched event is asserted by a holds/1 fact (negated clauses carry none).
inline bool isAnswer(const prover::Proof& proof, const DocClauseStore& store)
{
    if (proof.matchedFacts.empty())
        return false;
    const int sent = proof.matchedFacts.front().sentId;
    for (const auto& ref : proof.matchedFacts) {
        if (ref.sentId != sent)
            return false;
        const HornFact* f = store.fact(ref);
        if (!f)
            return false;
        if (f->literal.predicate != logform::Predicate::Evt)
            continue;
        const auto& event = f->literal.args[1];
        const bool asserted = std::any_of(store.facts.begin(), store.facts.end(), [&](const HornFact& h) {
            return h.sentId == sent && h.literal.predicate == logform::Predicate::Holds && h.literal.args[0] == event;
        });
        if (!asserted)
            return false;
    }
    return true;
}

inline std::vector<DocProof> answersIn(const QueryForm& q, const std::shared_ptr<const DocClauseStore>& store)
{
    std::vector<DocProof> out;
    for (auto& p : prover::solve(q.goals, store->facts)) {
        if (!isAnswer(p, *store))
            continue;
        const int sent = p.matchedFacts.front().sentId;
        out.push_back({store->docId, sent, std::move(p), store});
    }
    std::stable_sort(out.begin(), out.end(), [](const DocProof& a, const DocProof& b) { return a.sentId < b.sentId; });
    return out;
}

class ClauseDatabase {
public:
    explicit ClauseDatabase(fs::path root, bool preload = false)
        : root_(std::move(root))
    {
        index_ = CorpusIndex::parse(text::readFile(root_ / "index.tsv"), text::readFile(root_ / "docs.tsv"),
            (root_ / "index.tsv").string(), (root_ / "docs.tsv").string());
        if (preload)
            preloadAll();
    }

    const fs::path& root() const { return root_; }
    const CorpusIndex& index() const { return index_; }
    std::size_t documentCount() const { return index_.docSizes().size(); }

    // Number of document stores read from disk so far.
    std::size_t storeLoads() const { return loads_.load(); }

    std::shared_ptr<const DocClauseStore> load(const std::string& docId) const
    {
        ++loads_;
        const fs::path fp = factsPath(root_, docId);
        const fs::path mp = metaPath(root_, docId);
        return std::make_shared<const DocClauseStore>(
            parseStore(docId, text::readFile(fp), text::readFile(mp), fp.string(), mp.string()));
    }

    void preloadAll() const
    {
        std::call_once(preloaded_, [&] {
            for (const auto& [docId, _] : index_.docSizes())
                memory_.emplace(docId, load(docId));
        });
    }

    // EXTERNAL: preselect, then load and solve each candidate.
    // INTERNAL: solve over every preloaded store.
    // Results ordered by docId, then sentId, then proof order.
    std::vector<DocProof> query(const QueryForm& q, StorageMode mode) const
    {
        std::vector<DocProof> out;
        auto append = [&](std::vector<DocProof> more) {
            for (auto& m : more)
                out.push_back(std::move(m));
        };
        if (mode == StorageMode::External) {
            for (const auto& docId : index_.preselect(q.conceptSymbols))
                append(answersIn(q, load(docId)));
        } else {
            preloadAll();
            for (const auto& [_, store] : memory_)
                append(answersIn(q, store));
        }
        return out;
    }

private:
    fs::path root_;
    CorpusIndex index_;
    mutable std::atomic<std::size_t> loads_{0};
    mutable std::once_flag preloaded_;
    mutable std::map<std::string, std::shared_ptr<const DocClauseStore>> memory_;
};

inline std::vector<DocProof> queryCorpus(const QueryForm& q, const ClauseDatabase& db, StorageMode mode)
{
    return db.query(q, mode);
}

// Rebuilds the index from the fact files alone.
inline CorpusIndex rebuildIndex(const ClauseDatabase& db)
{
    CorpusIndex idx;
    for (const auto& [docId, _] : db.index().docSizes())
        idx.addDocument(*db.load(docId));
    return idx;
}

} // namespace extrans::store
