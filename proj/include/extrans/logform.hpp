#pragma once

// Minimal logical forms: flat object/3, evt/3 and holds/1 literals over
// constants, sentence-scoped Skolem constants and query variables.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "extrans/error.hpp"
#include "extrans/lingua.hpp"
#include "extrans/text.hpp"

namespace extrans::logform {

struct Term {
    enum class Kind { Var, Const, List };

    Kind kind = Kind::Const;
    std::string name;
    // Skolem constants are only unique inside one sentence; -1 for global symbols.
    int scope = -1;
    std::vector<Term> items;

    static Term var(std::string name) { return Term{Kind::Var, std::move(name), -1, {}}; }
    static Term constant(std::string name, int scope = -1)
    {
        return Term{Kind::Const, std::move(name), scope, {}};
    }
    static Term list(std::vector<Term> items) { return Term{Kind::List, {}, -1, std::move(items)}; }

    bool isVar() const { return kind == Kind::Var; }
    bool isConst() const { return kind == Kind::Const; }
    bool isList() const { return kind == Kind::List; }

    bool operator==(const Term& other) const
    {
        return kind == other.kind && name == other.name && scope == other.scope && items == other.items;
    }
    bool operator!=(const Term& other) const { return !(*this == other); }
};

inline std::string to_string(const Term& t)
{
    if (!t.isList())
        return t.name;
    std::string out = "[";
    for (std::size_t i = 0; i < t.items.size(); ++i) {
        if (i)
            out += ',';
        out += to_string(t.items[i]);
    }
    return out + "]";
}

enum class Predicate { Object, Evt, Holds };

inline const char* to_string(Predicate p)
{
    switch (p) {
    case Predicate::Object: return "object";
    case Predicate::Evt: return "evt";
    case Predicate::Holds: return "holds";
    }
    return "?";
}

inline std::size_t arityOf(Predicate p)
{
    return p == Predicate::Holds ? 1 : 3;
}

struct Literal {
    Predicate predicate = Predicate::Object;
    std::vector<Term> args;

    // arg 0 of object/evt: the concept symbol
    const std::string& symbol() const { return args.front().name; }

    bool operator==(const Literal&) const = default;
};

inline std::string to_string(const Literal& lit)
{
    std::string out = to_string(lit.predicate);
    out += '(';
    for (std::size_t i = 0; i < lit.args.size(); ++i) {
        if (i)
            out += ',';
        out += to_string(lit.args[i]);
    }
    return out + ")";
}

inline bool containsVar(const Term& t)
{
    if (t.isVar())
        return true;
    return std::any_of(t.items.begin(), t.items.end(), [](const Term& i) { return containsVar(i); });
}

inline bool isGround(const Literal& lit)
{
    return std::none_of(lit.args.begin(), lit.args.end(), [](const Term& t) { return containsVar(t); });
}

// Structural well-formedness: arity, concept symbol position, one-level lists.
inline bool wellFormed(const Literal& lit)
{
    if (lit.args.size() != arityOf(lit.predicate))
        return false;
    auto flat = [](const Term& t) { return !t.isList(); };
    switch (lit.predicate) {
    case Predicate::Object:
        return lit.args[0].isConst() && std::all_of(lit.args.begin(), lit.args.end(), flat);
    case Predicate::Evt:
        return lit.args[0].isConst() && flat(lit.args[1]) && lit.args[2].isList() &&
            std::all_of(lit.args[2].items.begin(), lit.args[2].items.end(), flat);
    case Predicate::Holds:
        return flat(lit.args[0]);
    }
    return false;
}

// Parses the canonical text form, e.g. `evt(s_remove,v_e2,[v_x1,v_x6]).`
// Names starting with an uppercase letter or '_' are variables. Constants
// other than arg 0 of object/evt receive `scope`.
inline std::optional<Literal> parseLiteral(std::string_view s, int scope = -1)
{
    s = text::trim(s);
    if (!s.empty() && s.back() == '.')
        s.remove_suffix(1);
    const std::size_t open = s.find('(');
    if (open == std::string_view::npos || s.empty() || s.back() != ')')
        return std::nullopt;
    Literal lit;
    const std::string_view head = s.substr(0, open);
    if (head == "object")
        lit.predicate = Predicate::Object;
    else if (head == "evt")
        lit.predicate = Predicate::Evt;
    else if (head == "holds")
        lit.predicate = Predicate::Holds;
    else
        return std::nullopt;

    std::string_view body = s.substr(open + 1, s.size() - open - 2);
    auto atom = [](std::string_view name, int sc) -> std::optional<Term> {
        if (name.empty() || name.find_first_of("()[], \t") != std::string_view::npos)
            return std::nullopt;
        const char c = name.front();
        if ((c >= 'A' && c <= 'Z') || c == '_')
            return Term::var(std::string(name));
        return Term::constant(std::string(name), sc);
    };
    std::size_t pos = 0;
    while (pos <= body.size()) {
        const std::size_t argIndex = lit.args.size();
        const bool symbolSlot = argIndex == 0 && lit.predicate != Predicate::Holds;
        const int sc = symbolSlot ? -1 : scope;
        if (pos < body.size() && body[pos] == '[') {
            const std::size_t close = body.find(']', pos);
            if (close == std::string_view::npos)
                return std::nullopt;
            std::vector<Term> items;
            std::string_view inner = body.substr(pos + 1, close - pos - 1);
            if (!inner.empty()) {
                for (std::string_view part : text::split(inner, ',')) {
                    auto t = atom(part, sc);
                    if (!t)
                        return std::nullopt;
                    items.push_back(std::move(*t));
                }
            }
            lit.args.push_back(Term::list(std::move(items)));
            pos = close + 1;
        } else {
            std::size_t end = body.find(',', pos);
            if (end == std::string_view::npos)
                end = body.size();
            auto t = atom(body.substr(pos, end - pos), sc);
            if (!t)
                return std::nullopt;
            lit.args.push_back(std::move(*t));
            pos = end;
        }
        if (pos == body.size())
            break;
        if (body[pos] != ',')
            return std::nullopt;
        ++pos;
    }
    if (!wellFormed(lit))
        return std::nullopt;
    return lit;
}

// ---------------------------------------------------------------------------
// Concept lexicon

class ConceptLexicon {
public:
    static constexpr std::string_view kConceptPrefix = "s_";

    // Lines: `SYN<TAB>lemma<TAB>concept` and `HYP<TAB>concept<TAB>hypernym`.
    static ConceptLexicon parse(std::string_view content, std::string_view origin = "<concepts>")
    {
        ConceptLexicon lex;
        std::size_t lineNo = 0;
        for (std::string_view line : text::splitLines(content)) {
            ++lineNo;
            if (line.empty() || line.front() == '#')
                continue;
            auto fields = text::split(line, '\t');
            const std::string where = std::string(origin) + ":" + std::to_string(lineNo) + ": ";
            if (fields.size() != 3 || fields[1].empty() || fields[2].empty())
                throw Error(ErrorCode::BadLexicon, where + "expected KIND<TAB>a<TAB>b");
            try {
                if (fields[0] == "SYN")
                    lex.addSynonym(fields[1], fields[2]);
                else if (fields[0] == "HYP")
                    lex.addHypernym(fields[1], fields[2]);
                else
                    throw Error(ErrorCode::BadLexicon, "unknown entry kind '" + std::string(fields[0]) + "'");
            } catch (const Error& e) {
                throw Error(ErrorCode::BadLexicon, where + e.what());
            }
        }
        return lex;
    }

    static ConceptLexicon load(const std::filesystem::path& path)
    {
        return parse(text::readFile(path), path.string());
    }

    void addSynonym(std::string_view lemma, std::string_view sym)
    {
        if (sym.substr(0, kConceptPrefix.size()) != kConceptPrefix)
            throw Error(ErrorCode::BadLexicon, "concept '" + std::string(sym) + "' lacks the s_ prefix");
        synonyms_[text::lower(lemma)] = std::string(sym);
    }

    void addHypernym(std::string_view sym, std::string_view hypernym)
    {
        const std::string c(sym);
        const std::string h(hypernym);
        if (c == h || reaches(h, c))
            throw Error(ErrorCode::BadLexicon, "hypernym cycle through '" + c + "'");
        auto& slot = hypernyms_[c];
        if (std::find(slot.begin(), slot.end(), h) == slot.end())
            slot.push_back(h);
    }

    std::string conceptOf(std::string_view lemma) const
    {
        auto it = synonyms_.find(lemma);
        return it == synonyms_.end() ? std::string(lemma) : it->second;
    }

    // Transitive hypernyms in breadth-first order, without duplicates.
    std::vector<std::string> hypernymsOf(std::string_view sym) const
    {
        std::vector<std::string> out;
        std::deque<std::string> frontier{std::string(sym)};
        while (!frontier.empty()) {
            auto it = hypernyms_.find(frontier.front());
            frontier.pop_front();
            if (it == hypernyms_.end())
                continue;
            for (const auto& h : it->second) {
                if (std::find(out.begin(), out.end(), h) == out.end()) {
                    out.push_back(h);
                    frontier.push_back(h);
                }
            }
        }
        return out;
    }

    const std::map<std::string, std::string, std::less<>>& synonyms() const { return synonyms_; }
    const std::map<std::string, std::vector<std::string>, std::less<>>& hypernyms() const
    {
        return hypernyms_;
    }

private:
    bool reaches(const std::string& from, const std::string& target) const
    {
        auto all = hypernymsOf(from);
        return std::find(all.begin(), all.end(), target) != all.end();
    }

    std::map<std::string, std::string, std::less<>> synonyms_;
    std::map<std::string, std::vector<std::string>, std::less<>> hypernyms_;
};

inline std::string conceptOf(std::string_view lemma, const ConceptLexicon& lexicon)
{
    return lexicon.conceptOf(lemma);
}

// ---------------------------------------------------------------------------
// Skolem constants

enum class SkolemKind { Entity, Witness, Event };

inline Term skolemFresh(SkolemKind kind, int sentId, int ordinal)
{
    const char* prefix = kind == SkolemKind::Entity ? "v_x" : kind == SkolemKind::Witness ? "v_o_a" : "v_e";
    return Term::constant(prefix + std::to_string(ordinal), sentId);
}

// ---------------------------------------------------------------------------
// Facts and queries

struct HornFact {
    Literal literal;
    std::string docId;
    int sentId = 0;
    int ordinal = 0; // position within the sentence's facts
    std::vector<std::size_t> sourceTokens;

    bool operator==(const HornFact&) const = default;
};

struct QueryForm {
    std::vector<Literal> goals;
    std::set<std::string> conceptSymbols;

    static std::set<std::string> symbolsOf(const std::vector<Literal>& goals)
    {
        std::set<std::string> out;
        for (const auto& g : goals)
            if (g.predicate != Predicate::Holds && !g.args.empty() && g.args[0].isConst())
                out.insert(g.args[0].name);
        return out;
    }
};

// Builds the literals of one sentence. Fact mode yields ground Skolemized
// facts with hypernym expansion and holds/1; goal mode replaces every Skolem
// position by a fresh variable and emits neither.
class ClauseBuilder {
public:
    enum class Target { Facts, Goals };

    struct Emitted {
        Literal literal;
        std::set<std::size_t> tokens;
    };

    ClauseBuilder(const lingua::TaggedSentence& sentence, const ConceptLexicon& concepts, Target target)
        : sentence_(sentence), concepts_(concepts), target_(target) { }

    void add(const lingua::PredArgStructure& pa)
    {
        if (pa.isCopula()) {
            addCopula(pa);
            return;
        }
        const std::set<std::size_t> verbTokens(pa.verbGroup.begin(), pa.verbGroup.end());
        std::vector<Emitted> subjectFacts;
        std::vector<Emitted> objectFacts;
        const Term subject = entityFor(pa.subject, subjectFacts);
        const Term event = fresh(SkolemKind::Event);
        std::vector<Term> participants{subject};
        for (std::size_t o : pa.objects)
            participants.push_back(entityFor(o, objectFacts));

        if (target_ == Target::Facts && !pa.negated)
            out_.push_back({Literal{Predicate::Holds, {event}}, verbTokens});
        for (auto& e : subjectFacts)
            out_.push_back(std::move(e));
        out_.push_back({Literal{Predicate::Evt,
                            {Term::constant(concepts_.conceptOf(pa.verbLemma)), event,
                                Term::list(std::move(participants))}},
            verbTokens});
        for (auto& e : objectFacts)
            out_.push_back(std::move(e));
    }

    const std::vector<Emitted>& emitted() const { return out_; }

    std::vector<HornFact> facts() const
    {
        std::vector<HornFact> out;
        for (const auto& e : out_) {
            HornFact f;
            f.literal = e.literal;
            f.docId = sentence_.docId;
            f.sentId = sentence_.sentId;
            f.ordinal = static_cast<int>(out.size());
            f.sourceTokens.assign(e.tokens.begin(), e.tokens.end());
            out.push_back(std::move(f));
        }
        return out;
    }

    // Goals with variables renamed A, B, C, ... in order of first appearance.
    std::vector<Literal> goals() const
    {
        std::map<std::string, std::string> names;
        auto rename = [&](auto& self, Term& t) -> void {
            if (t.isVar()) {
                auto [it, inserted] = names.try_emplace(t.name, std::string());
                if (inserted)
                    it->second = variableName(names.size() - 1);
                t.name = it->second;
            }
            for (auto& item : t.items)
                self(self, item);
        };
        std::vector<Literal> out;
        for (const auto& e : out_) {
            Literal lit = e.literal;
            for (auto& arg : lit.args)
                rename(rename, arg);
            out.push_back(std::move(lit));
        }
        return out;
    }

    static std::string variableName(std::size_t index)
    {
        std::string name(1, static_cast<char>('A' + index % 26));
        if (index >= 26)
            name += std::to_string(index / 26);
        return name;
    }

private:
    Term fresh(SkolemKind kind)
    {
        const int n = ++counters_[static_cast<int>(kind)];
        if (target_ == Target::Goals)
            return Term::var("_G" + std::to_string(++varCounter_));
        return skolemFresh(kind, sentence_.sentId, n);
    }

    void emitObject(const std::string& lemma, const Term& entity, std::size_t token, std::vector<Emitted>& sink)
    {
        const std::string sym = concepts_.conceptOf(lemma);
        sink.push_back({Literal{Predicate::Object, {Term::constant(sym), fresh(SkolemKind::Witness), entity}},
            {token}});
        if (target_ == Target::Facts)
            for (const auto& h : concepts_.hypernymsOf(sym))
                sink.push_back(
                    {Literal{Predicate::Object, {Term::constant(h), fresh(SkolemKind::Witness), entity}}, {token}});
    }

    bool denotesNothing(std::size_t token) const
    {
        const auto& tok = sentence_.tokens[token];
        return tok.tag == lingua::Tag::Wh || tok.unresolvedPronoun();
    }

    Term entityFor(std::optional<std::size_t> token, std::vector<Emitted>& sink)
    {
        if (!token)
            return fresh(SkolemKind::Entity);
        const auto& tok = sentence_.tokens[*token];
        if (tok.tag == lingua::Tag::Pron && tok.antecedent)
            return entityFor(*tok.antecedent, sink);
        if (auto it = entities_.find(*token); it != entities_.end())
            return it->second;
        Term entity = fresh(SkolemKind::Entity);
        entities_.emplace(*token, entity);
        if (!denotesNothing(*token))
            emitObject(tok.lemma, entity, *token, sink);
        return entity;
    }

    // "X is Y": the complement describes the subject's entity; no event.
    void addCopula(const lingua::PredArgStructure& pa)
    {
        const Term subject = entityFor(pa.subject, out_);
        if (pa.negated)
            return;
        for (std::size_t o : pa.objects) {
            if (denotesNothing(o) || sentence_.tokens[o].tag == lingua::Tag::Pron)
                continue;
            entities_.emplace(o, subject);
            emitObject(sentence_.tokens[o].lemma, subject, o, out_);
        }
    }

    const lingua::TaggedSentence& sentence_;
    const ConceptLexicon& concepts_;
    Target target_;
    std::vector<Emitted> out_;
    std::map<std::size_t, Term> entities_;
    int counters_[3] = {0, 0, 0};
    int varCounter_ = 0;
};

inline std::vector<HornFact> buildFactClauses(const std::vector<lingua::PredArgStructure>& structures,
    const lingua::TaggedSentence& sentence, const ConceptLexicon& concepts)
{
    ClauseBuilder builder(sentence, concepts, ClauseBuilder::Target::Facts);
    for (const auto& pa : structures)
        builder.add(pa);
    return builder.facts();
}

inline std::vector<HornFact> buildFactClauses(const lingua::PredArgStructure& pa,
    const lingua::TaggedSentence& sentence, const ConceptLexicon& concepts)
{
    return buildFactClauses(std::vector<lingua::PredArgStructure>{pa}, sentence, concepts);
}

inline QueryForm buildQueryGoals(std::string_view question, const lingua::Lexicon& lexicon,
    const ConceptLexicon& concepts)
{
    const std::string_view trimmed = text::trim(question);
    if (trimmed.empty())
        throw Error(ErrorCode::UnparseableQuery, "empty question");
    const auto analyzed = lingua::analyze("", 0, trimmed, lexicon);
    if (analyzed.parseFailed())
        throw Error(ErrorCode::UnparseableQuery, "no verb group in question: " + std::string(trimmed));
    ClauseBuilder builder(analyzed.sentence, concepts, ClauseBuilder::Target::Goals);
    for (const auto& pa : analyzed.structures)
        builder.add(pa);
    QueryForm q;
    q.goals = builder.goals();
    if (q.goals.empty())
        throw Error(ErrorCode::UnparseableQuery, "question yields no goals: " + std::string(trimmed));
    q.conceptSymbols = QueryForm::symbolsOf(q.goals);
    return q;
}

// Replaces every Skolem constant (scoped constant) by a variable, giving the
// question form of a fact set.
inline std::vector<Literal> skolemsToVariables(const std::vector<HornFact>& facts)
{
    std::map<std::pair<int, std::string>, std::string> names;
    auto convert = [&](auto& self, Term& t) -> void {
        if (t.isConst() && t.scope >= 0) {
            auto key = std::make_pair(t.scope, t.name);
            auto [it, inserted] = names.try_emplace(key, std::string());
            if (inserted)
                it->second = "V" + std::to_string(names.size());
            t = Term::var(it->second);
        }
        for (auto& item : t.items)
            self(self, item);
    };
    std::vector<Literal> out;
    for (const auto& f : facts) {
        Literal lit = f.literal;
        for (auto& a : lit.args)
            convert(convert, a);
        out.push_back(std::move(lit));
    }
    return out;
}

} // namespace extrans::logform
