#pragma once

// Command-line front: index, query, serve, bench, synth, analyze.
//
// Exit codes: 0 ok, 1 IO or usage error, 2 missing or malformed lexicon,
// 3 unparseable query, 4 corrupt store, 5 benchmark equality check failed.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "extrans/bench.hpp"
#include "extrans/engine.hpp"
#include "extrans/service.hpp"
#include "extrans/synth.hpp"

namespace extrans::cli {

namespace fs = std::filesystem;

enum Exit : int { Ok = 0, IoFailure = 1, LexiconFailure = 2, Unparseable = 3, Corrupt = 4, AssertionFailed = 5 };

inline int exitFor(const Error& e)
{
    switch (e.code()) {
    case ErrorCode::UnparseableQuery: return Unparseable;
    case ErrorCode::StoreCorrupt: return Corrupt;
    case ErrorCode::BadLexicon: return LexiconFailure;
    default: return IoFailure;
    }
}

// One ranked answer per line: score, docId, sentId, marked-up sentence.
inline std::string formatAnswer(const rank::Answer& a)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << a.score << '\t' << a.docId << '\t' << a.sentId << '\t'
       << rank::renderHighlighted(a.sentenceText, a.spans);
    return os.str();
}

inline std::vector<fs::path> corpusFiles(const fs::path& dir)
{
    std::vector<fs::path> out;
    std::error_code ec;
    fs::directory_iterator it(dir, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot read corpus directory " + dir.string() + ": " + ec.message());
    for (const auto& entry : it)
        if (entry.path().extension() == ".txt")
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

struct Lexicons {
    lingua::Lexicon lexicon;
    logform::ConceptLexicon concepts;
    std::string lexiconText;
    std::string conceptsText;
};

inline Lexicons loadLexicons(const fs::path& lexiconPath, const fs::path& conceptsPath)
{
    for (const auto& p : {lexiconPath, conceptsPath})
        if (!fs::is_regular_file(p))
            throw Error(ErrorCode::BadLexicon, "missing lexicon file: " + p.string());
    Lexicons l;
    l.lexiconText = text::readFile(lexiconPath);
    l.conceptsText = text::readFile(conceptsPath);
    l.lexicon = lingua::Lexicon::parse(l.lexiconText);
    l.concepts = logform::ConceptLexicon::parse(l.conceptsText);
    return l;
}

// Removes the artifacts of an earlier indexing run so stale documents do not survive.
inline void clearStore(const fs::path& root)
{
    std::error_code ec;
    fs::remove_all(root / "docs", ec);
    for (const char* name : {"index.tsv", "docs.tsv", "lexicon.tsv", "concepts.tsv"})
        fs::remove(root / name, ec);
}

inline int cmdIndex(const fs::path& corpus, const fs::path& root, const fs::path& lexiconPath,
    const fs::path& conceptsPath, bool verbose, std::ostream& out, std::ostream& err)
{
    const Lexicons lex = loadLexicons(lexiconPath, conceptsPath);
    const auto files = corpusFiles(corpus);
    clearStore(root);
    store::Indexer indexer(root, lex.lexicon, lex.concepts);
    if (verbose)
        indexer.onWarning([&](const std::string& msg) { err << msg << '\n'; });
    for (const auto& f : files)
        indexer.ingestDocument(f.stem().string(), text::readFile(f));
    indexer.finish(lex.lexiconText, lex.conceptsText);
    const auto& st = indexer.stats();
    out << indexer.documents() << " documents, " << st.sentences << " sentences, " << st.facts << " facts";
    if (st.parseFailures)
        out << " (" << st.parseFailures << " sentences unparsed)";
    out << '\n';
    return Ok;
}

inline int cmdQuery(const fs::path& root, store::StorageMode mode, const std::string& question, std::ostream& out)
{
    const QueryEngine engine = QueryEngine::open(root, std::nullopt, std::nullopt, mode == store::StorageMode::Internal);
    for (const auto& a : engine.ask(question, mode).answers)
        out << formatAnswer(a) << '\n';
    return Ok;
}

inline int cmdAnalyze(const fs::path& lexiconPath, const fs::path& conceptsPath, const std::vector<std::string>& sentences,
    std::ostream& out)
{
    const Lexicons lex = loadLexicons(lexiconPath, conceptsPath);
    int sentId = 0;
    for (const auto& s : sentences) {
        const auto a = lingua::analyze("input", sentId, s, lex.lexicon);
        out << "sentence " << sentId << ": " << s << "\n  readings " << a.sentence.readingCount << "\n  tokens";
        for (const auto& t : a.sentence.tokens) {
            out << ' ' << t.surface << '/' << lingua::to_string(t.tag);
            if (t.lemma != text::lower(t.surface))
                out << '[' << t.lemma << ']';
            if (t.antecedent)
                out << "->" << *t.antecedent;
        }
        out << '\n';
        if (a.parseFailed()) {
            out << "  parse failed\n";
        } else {
            for (const auto& pa : a.structures) {
                out << "  pa " << pa.verbLemma << (pa.negated ? " (negated)" : "")
                    << (pa.voice == lingua::Voice::Passive ? " passive" : "");
                if (pa.subject)
                    out << " subj=" << a.sentence.tokens[*pa.subject].surface;
                for (std::size_t o : pa.objects)
                    out << " obj=" << a.sentence.tokens[o].surface;
                out << '\n';
            }
            for (const auto& f : logform::buildFactClauses(a.structures, a.sentence, lex.concepts))
                out << "  fact " << logform::to_string(f.literal) << '\n';
        }
        try {
            const auto q = logform::buildQueryGoals(s, lex.lexicon, lex.concepts);
            for (const auto& g : q.goals)
                out << "  goal " << logform::to_string(g) << '\n';
        } catch (const Error& e) {
            out << "  goal <none: " << e.what() << ">\n";
        }
        ++sentId;
    }
    return Ok;
}

inline int cmdBench(const fs::path& small, const fs::path& large, const fs::path& queries, int reps, int warmups,
    const std::optional<fs::path>& outPath, std::ostream& out)
{
    const QueryEngine smallEngine = QueryEngine::open(small);
    const QueryEngine largeEngine = QueryEngine::open(large, small / "lexicon.tsv", small / "concepts.tsv");
    const bench::Report report = bench::run(smallEngine, largeEngine, bench::loadQueries(queries), reps, warmups);
    if (outPath)
        text::writeFile(*outPath, report.toJson().dump(2) + "\n");
    out << report.renderTable();
    if (!report.answersConsistent()) {
        out << "ASSERTION_FAILED: answer sets differ between configurations\n";
        return AssertionFailed;
    }
    return Ok;
}

inline int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"extrans: answer extraction over a manpage corpus"};
    app.require_subcommand(1);

    std::string corpus, storeRoot, lexiconPath, conceptsPath, mode = "external", question, uiDir;
    std::string small, large, queries, reportPath;
    int port = 8080, reps = 9, warmups = 2;
    double ratio = 13.6;
    unsigned seed = 1999;
    bool verbose = false;
    std::vector<std::string> sentences;

    const char* envStore = std::getenv("EXTRANS_STORE");
    auto addStore = [&](CLI::App* sub) {
        auto* opt = sub->add_option("--store", storeRoot, "store root directory (default $EXTRANS_STORE)");
        if (envStore && *envStore)
            storeRoot = envStore;
        else
            opt->required();
    };

    auto* index = app.add_subcommand("index", "ingest a directory of *.txt documents into a store");
    index->add_option("--corpus", corpus, "directory of *.txt documents")->required();
    addStore(index);
    index->add_option("--lexicon", lexiconPath, "word lexicon (TSV)")->required();
    index->add_option("--concepts", conceptsPath, "concept lexicon (TSV)")->required();
    index->add_flag("--verbose", verbose, "report sentences that fail to parse");

    auto* query = app.add_subcommand("query", "answer a question from a store");
    addStore(query);
    query->add_option("--mode", mode, "storage mode")->check(CLI::IsMember({"internal", "external"}));
    query->add_option("question", question, "question in plain English")->required();

    auto* serve = app.add_subcommand("serve", "serve the HTTP API and web UI");
    addStore(serve);
    serve->add_option("--port", port, "TCP port");
    serve->add_option("--ui", uiDir, "static UI bundle served at /");

    auto* benchCmd = app.add_subcommand("bench", "time queries over a small and a large store");
    benchCmd->add_option("--small", small, "small store root")->required();
    benchCmd->add_option("--large", large, "large store root")->required();
    benchCmd->add_option("--queries", queries, "one question per line")->required();
    benchCmd->add_option("--reps", reps, "timed repetitions per configuration")->check(CLI::PositiveNumber);
    benchCmd->add_option("--warmups", warmups, "untimed runs before timing")->check(CLI::NonNegativeNumber);
    benchCmd->add_option("--out", reportPath, "JSON report path");

    auto* synthCmd = app.add_subcommand("synth", "generate the large benchmark corpus");
    synthCmd->add_option("--small", small, "small corpus directory")->required();
    synthCmd->add_option("--out", corpus, "output corpus directory")->required();
    synthCmd->add_option("--ratio", ratio, "target byte ratio large/small")->check(CLI::PositiveNumber);
    synthCmd->add_option("--seed", seed, "generator seed");

    auto* analyze = app.add_subcommand("analyze", "print the linguistic analysis of sentences");
    analyze->add_option("--lexicon", lexiconPath, "word lexicon (TSV)")->required();
    analyze->add_option("--concepts", conceptsPath, "concept lexicon (TSV)")->required();
    analyze->add_option("sentences", sentences, "sentences")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? Ok : IoFailure;
    }

    try {
        const auto m = mode == "internal" ? store::StorageMode::Internal : store::StorageMode::External;
        if (index->parsed())
            return cmdIndex(corpus, storeRoot, lexiconPath, conceptsPath, verbose, out, err);
        if (query->parsed())
            return cmdQuery(storeRoot, m, question, out);
        if (analyze->parsed())
            return cmdAnalyze(lexiconPath, conceptsPath, sentences, out);
        if (benchCmd->parsed())
            return cmdBench(small, large, queries, reps, warmups,
                reportPath.empty() ? std::nullopt : std::optional<fs::path>(reportPath), out);
        if (synthCmd->parsed()) {
            const auto sum = synth::synthesizeLargeCorpus(small, corpus, {ratio, seed});
            out << sum.smallDocs + sum.generatedDocs << " documents, " << sum.largeBytes << " bytes, ratio "
                << sum.ratio() << '\n';
            return Ok;
        }
        if (serve->parsed()) {
            const QueryEngine engine = QueryEngine::open(storeRoot);
            service::Server server(engine, uiDir.empty() ? std::nullopt : std::optional<fs::path>(uiDir));
            err << "listening on port " << port << '\n';
            return server.listen("0.0.0.0", port) ? Ok : IoFailure;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exitFor(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return IoFailure;
    }
    return Ok;
}

} // namespace extrans::cli
