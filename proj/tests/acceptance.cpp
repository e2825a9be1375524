// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>

#include "support.hpp"

using namespace extrans;
using namespace testsupport;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

using Check = std::function<Outcome()>;

Outcome fail(std::string why)
{
    return {false, std::move(why)};
}

std::string fmt(double v, int prec = 2)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << v;
    return os.str();
}

Outcome roundTrip()
{
    TempDir dir("acc");
    store::Indexer ix(dir.path(), lexicon(), concepts());
    const auto doc = ix.ingestDocument("rm", "rm removes one or more files");
    const auto want = parseAll({"holds(v_e2)", "object(rm,v_o_a1,v_x1)", "object(s_command,v_o_a2,v_x1)",
        "evt(s_remove,v_e2,[v_x1,v_x6])", "object(s_file,v_o_a3,v_x6)"});
    if (doc.facts.size() != 5)
        return fail(std::to_string(doc.facts.size()) + " facts, expected 5");
    if (!equalUpToRenaming(want, literalsOf(doc.facts)))
        return fail("facts differ from the expected block beyond renaming");

    const auto q = logform::buildQueryGoals("which command erases files?", lexicon(), concepts());
    const auto goals = parseAll({"object(s_command,A,B)", "evt(s_remove,C,[B,D])", "object(s_file,E,D)"});
    if (!equalUpToRenaming(goals, q.goals))
        return fail("query goals differ from the expected block beyond renaming");

    const auto proofs = prover::solve(q.goals, doc.facts);
    if (proofs.size() != 1)
        return fail(std::to_string(proofs.size()) + " proofs, expected 1");

    std::optional<Term> rmEntity, fileEntity;
    for (const auto& f : doc.facts) {
        if (f.literal.predicate != Predicate::Object)
            continue;
        if (f.literal.symbol() == "rm")
            rmEntity = f.literal.args[2];
        if (f.literal.symbol() == "s_file")
            fileEntity = f.literal.args[2];
    }
    // Goal variable names follow the query's own order; find the ones in the B and D positions.
    const auto& evtGoal = q.goals[1].args[2].items;
    const auto& s = proofs[0].substitution;
    const Term* b = s.find(evtGoal.at(0).name);
    const Term* d = s.find(evtGoal.at(1).name);
    if (!b || !d || !rmEntity || !fileEntity || *b != *rmEntity || *d != *fileEntity)
        return fail("proof does not bind the participants to the rm and file entities");
    return {true, "5 facts, 3 goals, 1 proof"};
}

Outcome modeEquivalence()
{
    const auto& engine = fixtureEngine();
    std::size_t total = 0;
    for (const auto& question : benchQueries()) {
        const auto q = engine.queryForm(question);
        const auto internal = answerKeys(engine.database().query(q, store::StorageMode::Internal));
        const auto external = answerKeys(engine.database().query(q, store::StorageMode::External));
        if (internal != external)
            return fail("answer sets differ for '" + question + "'");
        total += internal.size();
    }
    return {true, std::to_string(benchQueries().size()) + " queries, " + std::to_string(total) + " answers"};
}

Outcome scaling()
{
    TempDir dir("acc");
    const auto sum = synth::synthesizeLargeCorpus(smallCorpus(), dir / "large");
    if (std::abs(sum.ratio() - 13.6) > 13.6 * 0.1)
        return fail("synthesized byte ratio " + fmt(sum.ratio()) + " outside 13.6 +- 10%");
    for (const auto& [corpus, root] : {std::pair{smallCorpus(), dir / "st-small"}, std::pair{dir / "large", dir / "st-large"}}) {
        const auto r = indexCorpus(corpus, root);
        if (r.code != 0)
            return fail("indexing " + corpus.string() + " failed: " + r.err);
    }
    const QueryEngine small = QueryEngine::open(dir / "st-small");
    const QueryEngine large = QueryEngine::open(dir / "st-large");
    const auto rep = bench::run(small, large, benchQueries(), 9, 2);
    std::string ratios;
    for (double r : rep.ratios())
        ratios += (ratios.empty() ? "" : " ") + fmt(r);
    const std::string detail = "corpus ratio " + fmt(rep.corpusSizeRatio()) + ", ratios [" + ratios +
        "], geometric mean " + fmt(rep.geometricMeanRatio());
    if (!rep.answersConsistent())
        return fail("answer sets differ between configurations; " + detail);
    if (rep.ratios().size() != benchQueries().size())
        return fail("some queries did not parse; " + detail);
    if (!rep.sublinear())
        return fail("a ratio reaches the corpus ratio; " + detail);
    if (rep.geometricMeanRatio() >= 7.0)
        return fail("geometric mean not below 7; " + detail);
    return {true, detail};
}

Outcome preselectionLossless()
{
    Gen gen(2024);
    std::size_t violations = 0, proofsSeen = 0;
    for (int corpus = 0; corpus < 200; ++corpus) {
        TempDir dir("acc");
        store::Indexer ix(dir.path(), lexicon(), concepts());
        std::vector<store::DocClauseStore> docs;
        for (int d = 0, n = 1 + gen.below(20); d < n; ++d) {
            docs.push_back(gen.document("d" + std::to_string(d), 6));
            ix.addStore(docs.back());
        }
        ix.finish();
        store::ClauseDatabase db(dir.path(), true);
        for (int k = 0; k < 50; ++k) {
            logform::QueryForm q;
            q.goals = gen.goals(4, docs[static_cast<std::size_t>(gen.below(static_cast<int>(docs.size())))].facts);
            q.conceptSymbols = logform::QueryForm::symbolsOf(q.goals);
            const auto selected = store::preselect(q.conceptSymbols, db.index());
            for (const auto& d : docs) {
                const bool proves = !prover::solve(q.goals, d.facts).empty();
                if (proves && !selected.count(d.docId))
                    ++violations;
            }
            const auto external = db.query(q, store::StorageMode::External);
            const auto internal = db.query(q, store::StorageMode::Internal);
            proofsSeen += internal.size();
            if (answerKeys(external) != answerKeys(internal) || external.size() != internal.size())
                ++violations;
        }
    }
    if (violations)
        return fail(std::to_string(violations) + " violations");
    return {true, "200 corpora x 50 queries, " + std::to_string(proofsSeen) + " answers, 0 violations"};
}

Outcome proverOracle()
{
    Gen gen(77);
    std::size_t discrepancies = 0, proofs = 0;
    const int cases = 20000;
    for (int trial = 0; trial < cases; ++trial) {
        std::vector<HornFact> facts;
        for (int i = 0, n = gen.below(9); i < n; ++i)
            facts.push_back({gen.fact(gen.below(2)), "d", 0, i, {}});
        const auto goals = gen.goals(4, facts);
        const auto want = oracleProofs(goals, facts);
        proofs += want.size();
        if (proverProofs(goals, facts) != want)
            ++discrepancies;
    }
    if (discrepancies)
        return fail(std::to_string(discrepancies) + " discrepancies");
    return {true, std::to_string(cases) + " cases, " + std::to_string(proofs) + " proofs, 0 discrepancies"};
}

Outcome storeDeterminism()
{
    TempDir a("acc"), b("acc");
    for (const auto* dir : {&a, &b}) {
        const auto r = indexCorpus(smallCorpus(), dir->path());
        if (r.code != 0)
            return fail("indexing failed: " + r.err);
    }
    std::size_t compared = 0;
    std::vector<fs::path> files{"index.tsv", "docs.tsv"};
    for (const auto& e : fs::directory_iterator(a / "docs"))
        files.push_back(fs::path("docs") / e.path().filename());
    for (const auto& rel : files) {
        if (!fs::exists(b.path() / rel))
            return fail(rel.string() + " missing from the second run");
        if (text::readFile(a.path() / rel) != text::readFile(b.path() / rel))
            return fail(rel.string() + " differs between runs");
        ++compared;
    }
    std::size_t second = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(b / "docs"))
        ++second;
    if (second + 2 != compared)
        return fail("the runs wrote different file sets");
    return {true, std::to_string(compared) + " files byte-identical"};
}

// Span checks for one proof: sorted, disjoint, in bounds, and covering exactly
// the tokens recorded as sources of the matched facts.
std::optional<std::string> spanProblem(const store::DocProof& m, const std::vector<store::CharSpan>& spans)
{
    const auto& rec = m.store->sentences.at(m.sentId);
    const std::string& text = rec.rawText;
    std::set<std::size_t> sources;
    for (const auto& ref : m.proof.matchedFacts)
        if (const auto* f = m.store->fact(ref))
            sources.insert(f->sourceTokens.begin(), f->sourceTokens.end());
    std::size_t last = 0;
    std::set<std::size_t> covered;
    for (const auto& sp : spans) {
        if (sp.start >= sp.end || sp.end > text.size())
            return "span out of bounds";
        if (sp.start < last)
            return "spans overlap or are unsorted";
        last = sp.end;
        std::vector<bool> inToken(sp.end - sp.start, false);
        for (std::size_t t = 0; t < rec.tokenSpans.size(); ++t) {
            const auto& tok = rec.tokenSpans[t];
            if (tok.end <= sp.start || tok.start >= sp.end)
                continue;
            if (tok.start < sp.start || tok.end > sp.end)
                return "span cuts through a token";
            if (!sources.count(t))
                return "span covers token '" + text.substr(tok.start, tok.end - tok.start) + "' outside the proof";
            covered.insert(t);
            for (std::size_t c = tok.start; c < tok.end; ++c)
                inToken[c - sp.start] = true;
        }
        for (std::size_t c = sp.start; c < sp.end; ++c)
            if (!inToken[c - sp.start] && !text::isSpace(text[c]))
                return "span covers text outside any token";
    }
    if (covered != sources)
        return "spans miss a source token";
    return std::nullopt;
}

Outcome highlightIntegrity()
{
    const auto& engine = fixtureEngine();
    std::vector<std::string> questions = benchQueries();
    for (const char* extra : {"which command copies directories?", "what is rm?", "which command prints lines?",
             "which command lists files?", "how can I change the owner of a file?"})
        questions.emplace_back(extra);
    std::size_t proofs = 0, answers = 0;
    for (const auto& question : questions) {
        const auto matches = engine.database().query(engine.queryForm(question), store::StorageMode::External);
        for (const auto& m : matches) {
            ++proofs;
            if (auto why = spanProblem(m, rank::highlightSpans(m.proof, *m.store)))
                return fail(question + ": " + m.docId + ":" + std::to_string(m.sentId) + ": " + *why);
        }
        for (const auto& a : engine.ask(question, store::StorageMode::External).answers) {
            ++answers;
            const auto it = std::find_if(matches.begin(), matches.end(), [&](const store::DocProof& m) {
                return m.docId == a.docId && m.sentId == a.sentId && rank::highlightSpans(m.proof, *m.store) == a.spans;
            });
            if (it == matches.end())
                return fail(question + ": ranked answer " + a.docId + ":" + std::to_string(a.sentId) +
                    " carries spans of no proof");
        }
    }
    if (answers == 0)
        return fail("no answers to check");
    return {true, std::to_string(answers) + " answers, " + std::to_string(proofs) + " proofs"};
}

} // namespace

int main()
{
    const std::vector<std::tuple<std::string, double, Check>> checks = {
        {"rm-sentence round trip", 1.0, roundTrip},
        {"mode equivalence on the fixture corpus", 10.0, modeEquivalence},
        {"sub-linear scaling on the synthesized corpus", 300.0, scaling},
        {"preselection losslessness", 120.0, preselectionLossless},
        {"prover matches brute-force oracle", 60.0, proverOracle},
        {"store determinism", 30.0, storeDeterminism},
        {"highlight integrity", 10.0, highlightIntegrity},
    };
    // Shared fixture store build is not charged to any single check.
    fixtureStore();

    int failures = 0;
    for (const auto& [name, budget, check] : checks) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.ok && secs >= budget)
            o = fail("took " + fmt(secs) + " s, budget " + fmt(budget, 0) + " s; " + o.detail);
        failures += !o.ok;
        std::cout << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << fmt(secs) << " s]"
                  << std::endl;
    }
    return failures ? 1 : 0;
}
