#pragma once

// Shared fixtures, reference oracles and random generators for the test suites.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "extrans/cli.hpp"
#include "extrans/extrans.hpp"

namespace testsupport {

namespace fs = std::filesystem;
using namespace extrans;
using logform::HornFact;
using logform::Literal;
using logform::Predicate;
using logform::Term;

inline fs::path dataDir()
{
    return fs::path(EXTRANS_DATA_DIR);
}

inline fs::path smallCorpus()
{
    return dataDir() / "corpus" / "small";
}

inline const lingua::Lexicon& lexicon()
{
    static const lingua::Lexicon lex = lingua::Lexicon::load(dataDir() / "lexicon.tsv");
    return lex;
}

inline const logform::ConceptLexicon& concepts()
{
    static const logform::ConceptLexicon c = logform::ConceptLexicon::load(dataDir() / "concepts.tsv");
    return c;
}

inline std::vector<std::string> benchQueries()
{
    return bench::loadQueries(dataDir() / "queries.txt");
}

class TempDir {
public:
    explicit TempDir(const std::string& tag = "t")
    {
        std::string pattern = (fs::temp_directory_path() / ("extrans-" + tag + "-XXXXXX")).string();
        if (!mkdtemp(pattern.data()))
            throw std::runtime_error("mkdtemp failed");
        path_ = pattern;
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

inline CliRun runCli(std::vector<std::string> args)
{
    args.insert(args.begin(), "extrans");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::runCli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

inline CliRun indexCorpus(const fs::path& corpus, const fs::path& root)
{
    return runCli({"index", "--corpus", corpus.string(), "--store", root.string(), "--lexicon",
        (dataDir() / "lexicon.tsv").string(), "--concepts", (dataDir() / "concepts.tsv").string()});
}

// The 30-document fixture store, built once per process.
inline const fs::path& fixtureStore()
{
    static TempDir dir("fixture");
    static const bool built = [] {
        const auto r = indexCorpus(smallCorpus(), dir.path());
        if (r.code != 0)
            throw std::runtime_error("fixture indexing failed: " + r.err);
        return true;
    }();
    (void)built;
    return dir.path();
}

inline const QueryEngine& fixtureEngine()
{
    static const QueryEngine engine = QueryEngine::open(fixtureStore());
    return engine;
}

inline std::set<std::pair<std::string, int>> answerKeys(const std::vector<store::DocProof>& proofs)
{
    std::set<std::pair<std::string, int>> out;
    for (const auto& p : proofs)
        out.emplace(p.docId, p.sentId);
    return out;
}

// ---------------------------------------------------------------------------
// Comparison up to renaming of Skolem constants and variables

inline bool renameable(const Term& t)
{
    return t.isVar() || (t.isConst() && t.scope >= 0);
}

inline std::vector<Literal> canonical(const std::vector<Literal>& lits)
{
    std::map<std::pair<bool, std::string>, std::string> names;
    auto fix = [&](auto& self, Term& t) -> void {
        if (renameable(t)) {
            auto key = std::make_pair(t.isVar(), t.name);
            auto [it, inserted] = names.try_emplace(key, std::string());
            if (inserted)
                it->second = "#" + std::to_string(names.size());
            t = Term::var(it->second);
        }
        for (auto& i : t.items)
            self(self, i);
    };
    std::vector<Literal> out = lits;
    for (auto& l : out)
        for (auto& a : l.args)
            fix(fix, a);
    return out;
}

// True when some ordering of `b` is a consistent renaming of `a`.
inline bool equalUpToRenaming(const std::vector<Literal>& a, std::vector<Literal> b)
{
    if (a.size() != b.size())
        return false;
    const auto ca = canonical(a);
    std::vector<std::size_t> perm(b.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::vector<Literal> pb;
        for (std::size_t i : perm)
            pb.push_back(b[i]);
        if (canonical(pb) == ca)
            return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

inline std::vector<Literal> parseAll(const std::vector<std::string>& texts, int scope = 0)
{
    std::vector<Literal> out;
    for (const auto& t : texts) {
        auto lit = logform::parseLiteral(t, scope);
        if (!lit)
            throw std::runtime_error("bad literal in test: " + t);
        out.push_back(*lit);
    }
    return out;
}

inline std::vector<Literal> literalsOf(const std::vector<HornFact>& facts)
{
    std::vector<Literal> out;
    for (const auto& f : facts)
        out.push_back(f.literal);
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force proof oracle: every assignment of facts to goals, checked by an
// independent one-way matcher (facts are ground).

using Env = std::map<std::string, Term>;
using OracleProof = std::pair<std::vector<std::size_t>, std::map<std::string, std::string>>;

// Ordering key that keeps Skolem scopes apart.
inline std::string termKey(const Term& t)
{
    if (t.isList()) {
        std::string out = "[";
        for (const auto& i : t.items)
            out += termKey(i) + ",";
        return out + "]";
    }
    return (t.isVar() ? "?" : "") + t.name + "@" + std::to_string(t.scope);
}

inline std::map<std::string, std::string> envKey(const Env& env)
{
    std::map<std::string, std::string> out;
    for (const auto& [v, t] : env)
        out.emplace(v, termKey(t));
    return out;
}

inline bool matchTerm(const Term& goal, const Term& fact, Env& env)
{
    if (goal.isVar()) {
        auto it = env.find(goal.name);
        if (it != env.end())
            return it->second == fact;
        env.emplace(goal.name, fact);
        return true;
    }
    if (goal.kind != fact.kind)
        return false;
    if (goal.isConst())
        return goal.name == fact.name && goal.scope == fact.scope;
    if (goal.items.size() != fact.items.size())
        return false;
    for (std::size_t i = 0; i < goal.items.size(); ++i)
        if (!matchTerm(goal.items[i], fact.items[i], env))
            return false;
    return true;
}

inline std::set<OracleProof> oracleProofs(const std::vector<Literal>& goals, const std::vector<HornFact>& facts)
{
    std::set<OracleProof> out;
    if (goals.empty() || facts.empty())
        return out;
    std::vector<std::size_t> pick(goals.size(), 0);
    while (true) {
        Env env;
        bool ok = true;
        for (std::size_t g = 0; g < goals.size() && ok; ++g) {
            const Literal& gl = goals[g];
            const Literal& fl = facts[pick[g]].literal;
            ok = gl.predicate == fl.predicate && gl.args.size() == fl.args.size();
            for (std::size_t i = 0; ok && i < gl.args.size(); ++i)
                ok = matchTerm(gl.args[i], fl.args[i], env);
        }
        if (ok)
            out.emplace(pick, envKey(env));
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == facts.size())
            pick[k++] = 0;
        if (k == pick.size())
            break;
    }
    return out;
}

inline std::set<OracleProof> proverProofs(const std::vector<Literal>& goals, const std::vector<HornFact>& facts)
{
    std::set<OracleProof> out;
    for (const auto& p : prover::solve(goals, facts)) {
        Env env;
        for (const auto& [v, t] : p.substitution.bindings)
            env.emplace(v, prover::applySubst(t, p.substitution));
        out.emplace(p.factIndices, envKey(env));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Random facts and goals over a tiny vocabulary, so that matches are common.

struct Gen {
    std::mt19937 rng;
    explicit Gen(unsigned seed) : rng(seed) { }

    int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
    bool chance(int percent) { return below(100) < percent; }

    std::string symbol() { return "s_" + std::string(1, static_cast<char>('a' + below(4))); }
    Term skolem(int scope) { return Term::constant("v_x" + std::to_string(1 + below(3)), scope); }

    Literal fact(int scope)
    {
        switch (below(3)) {
        case 0: return {Predicate::Object, {Term::constant(symbol()), skolem(scope), skolem(scope)}};
        case 1: {
            std::vector<Term> items;
            for (int i = 0, n = 1 + below(2); i < n; ++i)
                items.push_back(skolem(scope));
            return {Predicate::Evt, {Term::constant(symbol()), skolem(scope), Term::list(items)}};
        }
        default: return {Predicate::Holds, {skolem(scope)}};
        }
    }

    Term goalTerm()
    {
        if (chance(85))
            return Term::var(std::string(1, static_cast<char>('A' + below(4))));
        return skolem(below(2));
    }

    Literal goal()
    {
        if (below(2) == 0)
            return {Predicate::Object, {Term::constant(symbol()), goalTerm(), goalTerm()}};
        std::vector<Term> items;
        for (int i = 0, n = 1 + below(2); i < n; ++i)
            items.push_back(goalTerm());
        return {Predicate::Evt, {Term::constant(symbol()), goalTerm(), Term::list(items)}};
    }

    // A fact with most Skolem positions turned into variables; holds/1 becomes an object goal.
    Literal goalFrom(const Literal& fact)
    {
        if (fact.predicate == Predicate::Holds)
            return goal();
        Literal g = fact;
        auto loosen = [&](Term& t) {
            if (t.isConst() && t.scope >= 0 && chance(75))
                t = Term::var(std::string(1, static_cast<char>('A' + below(4))));
        };
        loosen(g.args[1]);
        if (g.args[2].isList())
            for (auto& item : g.args[2].items)
                loosen(item);
        else
            loosen(g.args[2]);
        return g;
    }

    // Half of the goals are drawn from `facts` when given, so that proofs are common.
    std::vector<Literal> goals(int maxGoals, const std::vector<HornFact>& facts = {})
    {
        std::vector<Literal> out;
        for (int i = 0, n = 1 + below(maxGoals); i < n; ++i) {
            if (!facts.empty() && chance(50))
                out.push_back(goalFrom(facts[static_cast<std::size_t>(below(static_cast<int>(facts.size())))].literal));
            else
                out.push_back(goal());
        }
        return out;
    }

    // A document of up to `maxFacts` facts spread over up to three sentences.
    store::DocClauseStore document(const std::string& docId, int maxFacts)
    {
        store::DocClauseStore doc;
        doc.docId = docId;
        const int sentences = 1 + below(3);
        for (int s = 0; s < sentences; ++s)
            doc.sentences.emplace(s, store::SentenceRecord{"w0 w1 w2 w3", 1, {{0, 2}, {3, 5}, {6, 8}, {9, 11}}});
        const int n = below(maxFacts + 1);
        std::vector<int> sents;
        for (int i = 0; i < n; ++i)
            sents.push_back(below(sentences));
        std::sort(sents.begin(), sents.end());
        std::map<int, int> ordinals;
        for (int s : sents) {
            HornFact f;
            f.literal = fact(s);
            f.docId = docId;
            f.sentId = s;
            f.ordinal = ordinals[s]++;
            f.sourceTokens = {static_cast<std::size_t>(below(4))};
            doc.facts.push_back(std::move(f));
        }
        doc.sourceBytes = store::serializeFacts(doc).size();
        return doc;
    }
};

} // namespace testsupport
