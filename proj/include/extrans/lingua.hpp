#pragma once

// Deterministic sentence analysis: tokenizer, lexicon-driven tagger with
// rule-based pruning, suffix lemmatizer, intra-sentential pronoun
// resolution and a chunk-level predicate-argument extractor.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "extrans/error.hpp"
#include "extrans/text.hpp"

namespace extrans::lingua {

enum class Tag : std::uint8_t { Noun, Verb, Aux, Det, Pron, Prep, Conj, Wh, Adj, Num, Other };

inline constexpr std::array<Tag, 11> kAllTags = {Tag::Noun, Tag::Verb, Tag::Aux, Tag::Det,
    Tag::Pron, Tag::Prep, Tag::Conj, Tag::Wh, Tag::Adj, Tag::Num, Tag::Other};

inline const char* to_string(Tag tag)
{
    switch (tag) {
    case Tag::Noun: return "NOUN";
    case Tag::Verb: return "VERB";
    case Tag::Aux: return "AUX";
    case Tag::Det: return "DET";
    case Tag::Pron: return "PRON";
    case Tag::Prep: return "PREP";
    case Tag::Conj: return "CONJ";
    case Tag::Wh: return "WH";
    case Tag::Adj: return "ADJ";
    case Tag::Num: return "NUM";
    case Tag::Other: return "OTHER";
    }
    return "OTHER";
}

inline std::optional<Tag> tagFromString(std::string_view name)
{
    for (Tag t : kAllTags)
        if (name == to_string(t))
            return t;
    return std::nullopt;
}

struct Token {
    std::string surface;
    std::string lemma;
    Tag tag = Tag::Other;
    std::size_t spanStart = 0;
    std::size_t spanEnd = 0;
    // false when neither the surface nor a derivable base form is in the lexicon
    bool known = true;
    // PRON only: index of the antecedent token once resolved
    std::optional<std::size_t> antecedent;

    bool isPunct() const { return surface.size() == 1 && text::isPunctChar(surface[0]); }
    bool unresolvedPronoun() const { return tag == Tag::Pron && !antecedent; }

    bool operator==(const Token&) const = default;
};

struct TaggedSentence {
    std::string docId;
    int sentId = 0;
    std::string rawText;
    std::vector<Token> tokens;
    std::uint64_t readingCount = 1;

    bool operator==(const TaggedSentence&) const = default;
};

enum class Voice { Active, Passive };

struct PredArgStructure {
    std::string verbLemma;
    Voice voice = Voice::Active;
    std::optional<std::size_t> subject;
    std::vector<std::size_t> objects;
    bool negated = false;
    std::size_t verb = 0;
    std::vector<std::size_t> verbGroup;
    std::set<std::size_t> sourceTokens;

    bool isCopula() const { return verbLemma == "be"; }
    bool operator==(const PredArgStructure&) const = default;
};

// ---------------------------------------------------------------------------
// Lexicon

namespace detail {

inline bool endsWith(std::string_view s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline bool hasVowel(std::string_view s)
{
    return s.find_first_of("aeiouy") != std::string_view::npos;
}

inline bool isVowel(char c)
{
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

inline const std::set<std::string, std::less<>>& modalWords()
{
    static const std::set<std::string, std::less<>> words = {"can", "could", "will", "would",
        "shall", "should", "may", "might", "must", "do", "does", "did"};
    return words;
}

inline const std::set<std::string, std::less<>>& beWords()
{
    static const std::set<std::string, std::less<>> words = {"is", "are", "was", "were", "be",
        "been", "being", "am"};
    return words;
}

inline const std::set<std::string, std::less<>>& thirdPersonPronouns()
{
    static const std::set<std::string, std::less<>> words = {"it", "they", "them", "he", "she",
        "him", "her"};
    return words;
}

inline const std::set<std::string, std::less<>>& negationWords()
{
    static const std::set<std::string, std::less<>> words = {"not", "never"};
    return words;
}

} // namespace detail

class Lexicon {
public:
    struct Lookup {
        std::vector<Tag> tags;
        bool known = true;
    };

    // Line format: `surface<TAB>TAG[,TAG...]` or `surface<TAB>LEMMA<TAB>base`.
    // Blank lines and lines starting with '#' are ignored.
    static Lexicon parse(std::string_view content, std::string_view origin = "<lexicon>")
    {
        Lexicon lex;
        std::size_t lineNo = 0;
        for (std::string_view line : text::splitLines(content)) {
            ++lineNo;
            if (line.empty() || line.front() == '#')
                continue;
            auto fields = text::split(line, '\t');
            auto fail = [&](const std::string& why) {
                throw Error(ErrorCode::BadLexicon,
                    std::string(origin) + ":" + std::to_string(lineNo) + ": " + why);
            };
            if (fields.size() == 3 && fields[1] == "LEMMA") {
                if (fields[0].empty() || fields[2].empty())
                    fail("empty LEMMA entry");
                lex.addLemma(fields[0], fields[2]);
                continue;
            }
            if (fields.size() != 2 || fields[0].empty())
                fail("expected surface<TAB>tags");
            std::vector<Tag> tags;
            for (std::string_view name : text::split(fields[1], ',')) {
                auto tag = tagFromString(name);
                if (!tag)
                    fail("unknown tag '" + std::string(name) + "'");
                tags.push_back(*tag);
            }
            lex.addTags(fields[0], std::move(tags));
        }
        return lex;
    }

    static Lexicon load(const std::filesystem::path& path)
    {
        return parse(text::readFile(path), path.string());
    }

    void addTags(std::string_view surface, std::vector<Tag> tags)
    {
        auto& slot = tags_[text::lower(surface)];
        for (Tag t : tags)
            if (std::find(slot.begin(), slot.end(), t) == slot.end())
                slot.push_back(t);
    }

    void addLemma(std::string_view surface, std::string_view base)
    {
        lemmas_[text::lower(surface)] = text::lower(base);
    }

    bool contains(std::string_view word) const { return tags_.count(text::lower(word)) > 0; }

    std::vector<std::string> words() const
    {
        std::vector<std::string> out;
        for (const auto& [w, _] : tags_)
            out.push_back(w);
        for (const auto& [w, _] : lemmas_)
            out.push_back(w);
        return out;
    }

    std::vector<Tag> tagsOf(std::string_view word) const
    {
        auto it = tags_.find(word);
        return it == tags_.end() ? std::vector<Tag>{} : it->second;
    }

    Lookup lookup(std::string_view surface) const
    {
        const std::string w = text::lower(surface);
        if (w.size() == 1 && text::isPunctChar(w[0]))
            return {{Tag::Other}, true};
        if (!w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; }))
            return {{Tag::Num}, true};
        if (auto it = tags_.find(w); it != tags_.end())
            return {it->second, true};
        if (auto it = lemmas_.find(w); it != lemmas_.end()) {
            if (auto b = tags_.find(it->second); b != tags_.end())
                return {b->second, true};
        }
        std::vector<Tag> derived;
        auto derivesFrom = [&](Tag tag) {
            std::string base = lemmatize(w, tag);
            if (base == w)
                return false;
            auto b = tags_.find(base);
            return b != tags_.end() && std::find(b->second.begin(), b->second.end(), tag) != b->second.end();
        };
        if (derivesFrom(Tag::Noun))
            derived.push_back(Tag::Noun);
        if (derivesFrom(Tag::Verb))
            derived.push_back(Tag::Verb);
        if (!derived.empty())
            return {derived, true};
        return {{Tag::Noun}, false};
    }

    // Exceptions first, then suffix rules for NOUN and VERB, iterated to a
    // fixed point. Every rule strictly shortens the word, so this terminates
    // and the result is idempotent.
    std::string lemmatize(std::string_view surface, Tag tag) const
    {
        std::string word = text::lower(surface);
        for (int guard = 0; guard < 64; ++guard) {
            std::string next = stripOnce(word, tag);
            if (next == word)
                break;
            word = std::move(next);
        }
        return word;
    }

private:
    bool knownBase(const std::string& w) const { return tags_.count(w) > 0; }

    bool isVerb(const std::string& w) const
    {
        auto it = tags_.find(w);
        return it != tags_.end() && std::find(it->second.begin(), it->second.end(), Tag::Verb) != it->second.end();
    }

    std::string stripOnce(const std::string& w, Tag tag) const
    {
        using detail::endsWith;
        if (auto it = lemmas_.find(w); it != lemmas_.end())
            return it->second;
        if (tag != Tag::Noun && tag != Tag::Verb)
            return w;
        if (knownBase(w)) {
            // participles listed in their own right still reduce to a listed verb
            if (tag == Tag::Verb && w.size() > 4 && (detail::endsWith(w, "ed") || detail::endsWith(w, "ing"))) {
                const std::size_t cut = detail::endsWith(w, "ed") ? 2 : 3;
                std::string base = detail::endsWith(w, "ied") ? w.substr(0, w.size() - 3) + "y"
                                                              : restoreStem(w, w.substr(0, w.size() - cut));
                if (base != w && isVerb(base))
                    return base;
            }
            return w;
        }

        const std::size_t n = w.size();
        if (endsWith(w, "ies") && n > 4)
            return w.substr(0, n - 3) + "y";
        if (endsWith(w, "s") && n > 3 && knownBase(w.substr(0, n - 1)))
            return w.substr(0, n - 1);
        if (endsWith(w, "es") && n > 3) {
            std::string stem = w.substr(0, n - 2);
            if (endsWith(stem, "s") || endsWith(stem, "x") || endsWith(stem, "z") ||
                endsWith(stem, "sh") || endsWith(stem, "ch"))
                return stem;
        }
        if (endsWith(w, "s") && n > 3 && !endsWith(w, "ss") && !endsWith(w, "us") &&
            !endsWith(w, "is"))
            return w.substr(0, n - 1);
        if (tag != Tag::Verb)
            return w;
        if (endsWith(w, "ied") && n > 4)
            return w.substr(0, n - 3) + "y";
        if (endsWith(w, "ed") && n > 4)
            return restoreStem(w, w.substr(0, n - 2));
        if (endsWith(w, "ing") && n > 5)
            return restoreStem(w, w.substr(0, n - 3));
        return w;
    }

    // e-restoration and consonant undoubling after -ed / -ing removal
    std::string restoreStem(const std::string& word, std::string stem) const
    {
        using detail::endsWith;
        if (!detail::hasVowel(stem))
            return word;
        if (knownBase(stem))
            return stem;
        if (knownBase(stem + "e"))
            return stem + "e";
        const std::size_t n = stem.size();
        if (n >= 3 && stem[n - 1] == stem[n - 2] && !detail::isVowel(stem[n - 1]) &&
            stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z')
            return stem.substr(0, n - 1);
        for (std::string_view ending : {"v", "c", "z", "at", "iz", "ur"})
            if (endsWith(stem, ending))
                return stem + "e";
        return stem;
    }

    std::map<std::string, std::vector<Tag>, std::less<>> tags_;
    std::map<std::string, std::string, std::less<>> lemmas_;
};

// ---------------------------------------------------------------------------
// Tokenizer

inline std::vector<Token> tokenize(std::string_view sentence)
{
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = sentence.size();
    while (i < n) {
        const char c = sentence[i];
        if (text::isSpace(c)) {
            ++i;
            continue;
        }
        Token tok;
        tok.spanStart = i;
        if (text::isWordChar(c)) {
            while (i < n && text::isWordChar(sentence[i]))
                ++i;
        } else {
            ++i;
        }
        tok.spanEnd = i;
        tok.surface = std::string(sentence.substr(tok.spanStart, tok.spanEnd - tok.spanStart));
        out.push_back(std::move(tok));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tagging with pruning rules

namespace detail {

using Candidates = std::vector<std::vector<Tag>>;

inline bool has(const std::vector<Tag>& set, Tag t)
{
    return std::find(set.begin(), set.end(), t) != set.end();
}

inline bool resolvedAs(const std::vector<Tag>& set, Tag t)
{
    return set.size() == 1 && set.front() == t;
}

inline bool dropTag(std::vector<Tag>& set, Tag t)
{
    if (set.size() < 2 || !has(set, t))
        return false;
    set.erase(std::find(set.begin(), set.end(), t));
    return true;
}

inline bool forceTag(std::vector<Tag>& set, Tag t)
{
    if (set.size() < 2 || !has(set, t))
        return false;
    set = {t};
    return true;
}

inline bool isClauseBoundary(const std::vector<Token>& toks, const Candidates& cand, std::size_t i)
{
    if (toks[i].isPunct())
        return toks[i].surface == "," || toks[i].surface == ";" || toks[i].surface == ":";
    return resolvedAs(cand[i], Tag::Conj) || (i > 0 && resolvedAs(cand[i], Tag::Wh));
}

inline bool verbBeforeInClause(const std::vector<Token>& toks, const Candidates& cand, std::size_t i)
{
    while (i > 0) {
        --i;
        if (isClauseBoundary(toks, cand, i))
            return false;
        if (resolvedAs(cand[i], Tag::Verb))
            return true;
    }
    return false;
}

inline bool nominalAlternative(const std::vector<Tag>& set)
{
    return has(set, Tag::Noun) || has(set, Tag::Adj);
}

// One pass of every pruning rule over the sentence; true when anything changed.
inline bool prunePass(const std::vector<Token>& toks, Candidates& cand)
{
    bool changed = false;
    const std::size_t n = toks.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto& c = cand[i];
        if (c.size() < 2)
            continue;
        const std::string lw = text::lower(toks[i].surface);

        // sentence-initial wh-word
        if (i == 0 && forceTag(c, Tag::Wh)) {
            changed = true;
            continue;
        }
        // a verb form never directly precedes an auxiliary or another verb
        if (i + 1 < n && (resolvedAs(cand[i + 1], Tag::Aux) || resolvedAs(cand[i + 1], Tag::Verb)) &&
            nominalAlternative(c) && dropTag(c, Tag::Verb)) {
            changed = true;
            continue;
        }
        if (i > 0) {
            const auto& prev = cand[i - 1];
            const std::string pw = text::lower(toks[i - 1].surface);
            // determiner, numeral or adjective before a noun/verb form
            if ((resolvedAs(prev, Tag::Det) || resolvedAs(prev, Tag::Num) || resolvedAs(prev, Tag::Adj)) &&
                nominalAlternative(c) && dropTag(c, Tag::Verb)) {
                changed = true;
                continue;
            }
            // auxiliary (other than have), negation or infinitival "to" before a verb form
            if ((resolvedAs(prev, Tag::Aux) && pw != "has" && pw != "have" && pw != "had") ||
                negationWords().count(pw) || pw == "to") {
                if (forceTag(c, Tag::Verb)) {
                    changed = true;
                    continue;
                }
            }
            // two finite verbs never stand side by side; nor does a verb follow a preposition
            if ((resolvedAs(prev, Tag::Verb) || resolvedAs(prev, Tag::Prep)) && nominalAlternative(c) &&
                dropTag(c, Tag::Verb)) {
                changed = true;
                continue;
            }
            // after a nominal: first verb of the clause, otherwise still nominal
            if (resolvedAs(prev, Tag::Noun) || resolvedAs(prev, Tag::Pron)) {
                if (!verbBeforeInClause(toks, cand, i) ? forceTag(c, Tag::Verb)
                                                       : (nominalAlternative(c) && dropTag(c, Tag::Verb))) {
                    changed = true;
                    continue;
                }
            }
        }
        if (i + 1 < n) {
            const auto& next = cand[i + 1];
            // a verb form before a determiner or numeral; sentence-initially also before a pronoun
            if ((resolvedAs(next, Tag::Det) || resolvedAs(next, Tag::Num) || (i == 0 && resolvedAs(next, Tag::Pron))) &&
                forceTag(c, Tag::Verb)) {
                changed = true;
                continue;
            }
        }
        // noun or adjective between a modifier and a noun: the adjective
        if (i > 0 && i + 1 < n && !has(c, Tag::Verb) && has(c, Tag::Adj) && resolvedAs(cand[i + 1], Tag::Noun) &&
            (resolvedAs(cand[i - 1], Tag::Det) || resolvedAs(cand[i - 1], Tag::Adj) ||
                resolvedAs(cand[i - 1], Tag::Num)) &&
            dropTag(c, Tag::Noun)) {
            changed = true;
            continue;
        }
        // noun or adjective with nothing nominal after it: the noun
        const bool nominalNext = i + 1 < n && !toks[i + 1].isPunct() && has(cand[i + 1], Tag::Noun);
        if (!nominalNext && !has(c, Tag::Verb) && has(c, Tag::Noun) && dropTag(c, Tag::Adj)) {
            changed = true;
            continue;
        }
    }
    return changed;
}

// A clause with no verb reading at all may still have its verb among the
// unknown words: an inflected unknown word right after a nominal is read as one.
inline void recoverUnknownVerbs(std::vector<Token>& toks)
{
    std::size_t begin = 0;
    while (begin < toks.size()) {
        std::size_t end = begin;
        while (end < toks.size() &&
            !(toks[end].isPunct() || toks[end].tag == Tag::Conj || (end > 0 && toks[end].tag == Tag::Wh)))
            ++end;
        const bool hasVerb = std::any_of(toks.begin() + static_cast<std::ptrdiff_t>(begin),
            toks.begin() + static_cast<std::ptrdiff_t>(end),
            [](const Token& t) { return t.tag == Tag::Verb || t.tag == Tag::Aux; });
        if (!hasVerb) {
            for (std::size_t i = std::max<std::size_t>(begin, 1); i < end; ++i) {
                const std::string lw = text::lower(toks[i].surface);
                const bool inflected = (endsWith(lw, "s") && !endsWith(lw, "ss")) || endsWith(lw, "ed");
                const Tag prev = toks[i - 1].tag;
                if (!toks[i].known && toks[i].tag == Tag::Noun && inflected && lw.size() > 3 &&
                    (prev == Tag::Noun || prev == Tag::Pron)) {
                    toks[i].tag = Tag::Verb;
                    break;
                }
            }
        }
        begin = end + 1;
    }
}

// A verb form between a determiner or modifier and a noun modifies the noun
// ("the extract option").
inline void nominalizeVerbModifiers(std::vector<Token>& toks)
{
    for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
        const Tag prev = toks[i - 1].tag;
        if (toks[i].tag == Tag::Verb && toks[i + 1].tag == Tag::Noun &&
            (prev == Tag::Det || prev == Tag::Adj || prev == Tag::Num))
            toks[i].tag = Tag::Noun;
    }
}

inline Tag preferred(const std::vector<Tag>& set)
{
    for (Tag t : {Tag::Noun, Tag::Verb, Tag::Adj})
        if (has(set, t))
            return t;
    return *std::min_element(set.begin(), set.end());
}

} // namespace detail

// Assigns one tag per token. readingCount is the product of surviving
// candidate counts (saturating).
inline TaggedSentence tagAndFilter(std::vector<Token> tokens, const Lexicon& lexicon)
{
    detail::Candidates cand;
    cand.reserve(tokens.size());
    for (auto& tok : tokens) {
        auto look = lexicon.lookup(tok.surface);
        tok.known = look.known;
        cand.push_back(std::move(look.tags));
    }
    while (detail::prunePass(tokens, cand)) { }

    TaggedSentence out;
    std::uint64_t readings = 1;
    constexpr std::uint64_t cap = std::numeric_limits<std::uint32_t>::max();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        tokens[i].tag = detail::preferred(cand[i]);
        readings = std::min<std::uint64_t>(cap, readings * cand[i].size());
    }
    detail::nominalizeVerbModifiers(tokens);
    detail::recoverUnknownVerbs(tokens);
    out.tokens = std::move(tokens);
    out.readingCount = readings;
    return out;
}

inline std::string lemmatize(std::string_view surface, Tag tag, const Lexicon& lexicon)
{
    return lexicon.lemmatize(surface, tag);
}

// Unknown words keep their lowercased surface as lemma, except recovered verbs.
inline void lemmatizeSentence(TaggedSentence& sentence, const Lexicon& lexicon)
{
    for (auto& tok : sentence.tokens)
        tok.lemma = tok.known || tok.tag == Tag::Verb ? lexicon.lemmatize(tok.surface, tok.tag)
                                                      : text::lower(tok.surface);
}

// ---------------------------------------------------------------------------
// Chunking and clause structure

namespace detail {

enum class ChunkKind { NounPhrase, VerbGroup, Prep, Conj, Boundary, WhAdverb, Skip };

struct Chunk {
    ChunkKind kind = ChunkKind::Skip;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::vector<std::size_t> heads; // NP heads, more than one under coordination
    bool whPronoun = false;         // bare what/which/who/that
    // verb group
    std::vector<std::size_t> tokens;
    std::optional<std::size_t> mainVerb;
    bool negated = false;
    bool passive = false;
    bool infinitive = false;
    bool hasBe = false;
    bool hasModal = false;
};

inline bool isWhAdverb(std::string_view lw)
{
    return lw == "how" || lw == "where" || lw == "when" || lw == "why";
}

inline bool isCoordinator(const Token& t)
{
    const std::string lw = text::lower(t.surface);
    return t.tag == Tag::Conj && (lw == "and" || lw == "or" || lw == "but" || lw == "nor");
}

inline bool isAdverbToken(const Token& t)
{
    return t.tag == Tag::Other && !t.isPunct();
}

inline std::optional<Chunk> nounPhraseAt(const std::vector<Token>& toks, std::size_t i)
{
    const std::size_t n = toks.size();
    std::size_t j = i;
    std::optional<std::size_t> head;
    while (j < n) {
        const Tag t = toks[j].tag;
        if (t == Tag::Noun) {
            head = j++;
            continue;
        }
        if (head)
            break;
        if (t == Tag::Det || t == Tag::Num || t == Tag::Adj) {
            ++j;
            continue;
        }
        // "one or more": conjunction between quantifiers inside the NP
        if (t == Tag::Conj && j > i && j + 1 < n) {
            const Tag prev = toks[j - 1].tag;
            const Tag next = toks[j + 1].tag;
            auto quant = [](Tag q) { return q == Tag::Num || q == Tag::Adj || q == Tag::Det; };
            if (quant(prev) && quant(next)) {
                ++j;
                continue;
            }
        }
        break;
    }
    Chunk c;
    c.begin = i;
    c.end = j;
    if (!head) {
        c.kind = ChunkKind::Skip;
        c.end = std::max(j, i + 1);
        return c;
    }
    c.kind = ChunkKind::NounPhrase;
    c.heads = {*head};
    return c;
}

inline Chunk verbGroupAt(const std::vector<Token>& toks, std::size_t i, bool infinitive)
{
    Chunk c;
    c.kind = ChunkKind::VerbGroup;
    c.begin = i;
    c.infinitive = infinitive;
    std::size_t j = infinitive ? i + 1 : i;
    if (infinitive)
        c.tokens.push_back(i);
    std::size_t lastCore = j;
    std::vector<std::size_t> pendingAdverbs;
    while (j < toks.size()) {
        const Token& t = toks[j];
        if (t.tag == Tag::Aux || t.tag == Tag::Verb) {
            c.tokens.insert(c.tokens.end(), pendingAdverbs.begin(), pendingAdverbs.end());
            pendingAdverbs.clear();
            c.tokens.push_back(j);
            lastCore = j;
            if (t.tag == Tag::Aux) {
                if (beWords().count(t.lemma) || t.lemma == "be")
                    c.hasBe = true;
                if (modalWords().count(text::lower(t.surface)))
                    c.hasModal = true;
            }
            if (t.tag == Tag::Verb) {
                c.mainVerb = j;
                ++j;
                break;
            }
            ++j;
            continue;
        }
        if (isAdverbToken(t)) {
            pendingAdverbs.push_back(j);
            ++j;
            continue;
        }
        break;
    }
    // "has" with no verb after it is the main verb itself
    if (!c.mainVerb && !c.tokens.empty() && toks[c.tokens.back()].lemma == "have")
        c.mainVerb = c.tokens.back();
    c.end = c.mainVerb ? *c.mainVerb + 1 : lastCore + 1;
    for (std::size_t k : c.tokens)
        if (negationWords().count(text::lower(toks[k].surface)))
            c.negated = true;
    if (c.mainVerb && c.hasBe && !detail::endsWith(text::lower(toks[*c.mainVerb].surface), "ing"))
        c.passive = true;
    return c;
}

inline std::vector<Chunk> chunk(const std::vector<Token>& toks)
{
    std::vector<Chunk> out;
    std::size_t i = 0;
    const std::size_t n = toks.size();
    while (i < n) {
        const Token& t = toks[i];
        const std::string lw = text::lower(t.surface);
        Chunk c;
        c.begin = i;
        c.end = i + 1;
        if (t.isPunct()) {
            c.kind = (lw == "," || lw == ";" || lw == ":" || lw == "." || lw == "?" || lw == "!")
                ? ChunkKind::Boundary
                : ChunkKind::Skip;
        } else if (t.tag == Tag::Wh) {
            if (isWhAdverb(lw)) {
                c.kind = ChunkKind::WhAdverb;
            } else {
                auto np = (i + 1 < n) ? nounPhraseAt(toks, i + 1) : std::nullopt;
                if (np && np->kind == ChunkKind::NounPhrase && np->begin == i + 1) {
                    c = *np;
                    c.begin = i;
                } else {
                    c.kind = ChunkKind::NounPhrase;
                    c.heads = {i};
                    c.whPronoun = true;
                }
            }
        } else if (t.tag == Tag::Noun || t.tag == Tag::Det || t.tag == Tag::Num || t.tag == Tag::Adj) {
            c = *nounPhraseAt(toks, i);
        } else if (t.tag == Tag::Pron) {
            c.kind = ChunkKind::NounPhrase;
            c.heads = {i};
        } else if (t.tag == Tag::Aux || t.tag == Tag::Verb) {
            c = verbGroupAt(toks, i, false);
        } else if (t.tag == Tag::Prep) {
            if (lw == "to" && i + 1 < n && toks[i + 1].tag == Tag::Verb)
                c = verbGroupAt(toks, i, true);
            else
                c.kind = ChunkKind::Prep;
        } else if (t.tag == Tag::Conj) {
            c.kind = ChunkKind::Conj;
        } else {
            c.kind = ChunkKind::Skip;
        }
        i = std::max(c.end, i + 1);
        out.push_back(std::move(c));
    }

    // NP coordination: "files and directories", unless the second conjunct
    // starts a new clause
    std::vector<Chunk> merged;
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (out[k].kind == ChunkKind::Conj && isCoordinator(toks[out[k].begin]) && !merged.empty() &&
            merged.back().kind == ChunkKind::NounPhrase && !merged.back().whPronoun &&
            k + 1 < out.size() && out[k + 1].kind == ChunkKind::NounPhrase && !out[k + 1].whPronoun &&
            toks[merged.back().heads.back()].tag == Tag::Noun &&
            toks[out[k + 1].heads.front()].tag == Tag::Noun &&
            !(k + 2 < out.size() && out[k + 2].kind == ChunkKind::VerbGroup && !out[k + 2].infinitive)) {
            merged.back().heads.push_back(out[k + 1].heads.front());
            merged.back().end = out[k + 1].end;
            ++k;
            continue;
        }
        merged.push_back(std::move(out[k]));
    }
    return merged;
}

enum class Role { Subject, Object, Other };

struct ClauseAnalysis {
    std::vector<PredArgStructure> structures;
    std::map<std::size_t, Role> roles; // NP head -> grammatical role
};

struct Draft {
    std::string verbLemma;
    Voice voice = Voice::Active;
    std::vector<std::size_t> subjects;
    std::vector<std::size_t> objects;
    bool negated = false;
    std::size_t verb = 0;
    std::vector<std::size_t> verbGroup;
};

inline ClauseAnalysis analyzeClauses(const TaggedSentence& sentence)
{
    const auto& toks = sentence.tokens;
    const std::vector<Chunk> chunks = chunk(toks);
    std::vector<Draft> drafts;
    ClauseAnalysis result;

    std::optional<std::size_t> subject;   // NP chunk index
    std::optional<std::size_t> fronted;   // wh NP displaced by inversion
    std::optional<std::size_t> pendingAux; // aux-only VG chunk awaiting its verb
    std::optional<std::size_t> current;   // draft index accepting arguments
    std::optional<std::size_t> lastNp;
    bool expectObject = false;
    bool copulaNeedsSubject = false;
    std::string prep;

    auto laterMainVerbInClause = [&](std::size_t from) {
        for (std::size_t k = from; k < chunks.size(); ++k) {
            if (chunks[k].kind == ChunkKind::Boundary || chunks[k].kind == ChunkKind::Conj)
                return false;
            if (chunks[k].kind == ChunkKind::VerbGroup && chunks[k].mainVerb)
                return true;
        }
        return false;
    };
    auto noteRole = [&](const std::vector<std::size_t>& heads, Role role) {
        for (std::size_t h : heads) {
            auto it = result.roles.find(h);
            if (it == result.roles.end() || role < it->second)
                result.roles[h] = role;
        }
    };

    for (std::size_t ci = 0; ci < chunks.size(); ++ci) {
        const Chunk& c = chunks[ci];
        switch (c.kind) {
        case ChunkKind::NounPhrase: {
            const bool relative = c.whPronoun && lastNp && ci + 1 < chunks.size() &&
                chunks[ci + 1].kind == ChunkKind::VerbGroup;
            if (!prep.empty()) {
                if (prep == "by" && current && drafts[*current].voice == Voice::Passive &&
                    drafts[*current].subjects.empty()) {
                    drafts[*current].subjects = c.heads;
                    noteRole(c.heads, Role::Subject);
                } else {
                    noteRole(c.heads, Role::Other);
                }
                prep.clear();
            } else if (current && expectObject && !copulaNeedsSubject) {
                auto& d = drafts[*current];
                d.objects.insert(d.objects.end(), c.heads.begin(), c.heads.end());
                noteRole(c.heads, Role::Object);
                expectObject = false;
            } else if (current && copulaNeedsSubject) {
                drafts[*current].subjects = c.heads;
                noteRole(c.heads, Role::Subject);
                copulaNeedsSubject = false;
            } else if (relative) {
                subject = lastNp;
                current.reset();
            } else if (pendingAux && subject && !fronted) {
                fronted = subject;
                subject = ci;
                current.reset();
            } else {
                subject = ci;
                current.reset();
            }
            if (!c.whPronoun)
                lastNp = ci;
            break;
        }
        case ChunkKind::VerbGroup: {
            prep.clear();
            if (!c.mainVerb) {
                if (ci + 1 < chunks.size() && chunks[ci + 1].kind == ChunkKind::NounPhrase &&
                    laterMainVerbInClause(ci + 1)) {
                    pendingAux = ci;
                    break;
                }
                if (!c.hasBe)
                    break;
                Draft d;
                d.verbLemma = "be";
                d.negated = c.negated;
                d.verbGroup = c.tokens;
                for (std::size_t k : c.tokens)
                    if (toks[k].tag == Tag::Aux && toks[k].lemma == "be")
                        d.verb = k;
                if (subject) {
                    d.subjects = chunks[*subject].heads;
                    copulaNeedsSubject = false;
                } else {
                    copulaNeedsSubject = true;
                }
                drafts.push_back(std::move(d));
                current = drafts.size() - 1;
                expectObject = true;
                break;
            }
            Draft d;
            d.verbLemma = toks[*c.mainVerb].lemma;
            d.verb = *c.mainVerb;
            d.verbGroup = c.tokens;
            d.negated = c.negated;
            d.voice = c.passive ? Voice::Passive : Voice::Active;
            if (pendingAux && !c.infinitive) {
                const Chunk& aux = chunks[*pendingAux];
                d.verbGroup.insert(d.verbGroup.begin(), aux.tokens.begin(), aux.tokens.end());
                d.negated = d.negated || aux.negated;
                pendingAux.reset();
            }
            copulaNeedsSubject = false;
            if (c.infinitive) {
                expectObject = true;
            } else if (d.voice == Voice::Passive) {
                if (subject) {
                    d.objects = chunks[*subject].heads;
                    noteRole(d.objects, Role::Subject);
                }
                expectObject = false;
            } else {
                if (subject)
                    d.subjects = chunks[*subject].heads;
                expectObject = true;
                if (fronted) {
                    d.objects = chunks[*fronted].heads;
                    expectObject = false;
                    fronted.reset();
                }
            }
            noteRole(d.subjects, Role::Subject);
            noteRole(d.objects, Role::Object);
            drafts.push_back(std::move(d));
            current = drafts.size() - 1;
            break;
        }
        case ChunkKind::Prep:
            prep = text::lower(toks[c.begin].surface);
            break;
        case ChunkKind::Conj:
        case ChunkKind::Boundary:
            if (c.kind == ChunkKind::Conj && !isCoordinator(toks[c.begin])) {
                subject.reset();
                current.reset();
                fronted.reset();
            }
            prep.clear();
            expectObject = false;
            copulaNeedsSubject = false;
            pendingAux.reset();
            break;
        case ChunkKind::WhAdverb:
        case ChunkKind::Skip:
            break;
        }
    }

    // coordinated arguments distribute over separate structures
    for (const Draft& d : drafts) {
        std::vector<std::optional<std::size_t>> subjects;
        if (d.subjects.empty())
            subjects.push_back(std::nullopt);
        for (std::size_t s : d.subjects)
            subjects.emplace_back(s);
        std::vector<std::optional<std::size_t>> objects;
        if (d.objects.empty())
            objects.push_back(std::nullopt);
        for (std::size_t o : d.objects)
            objects.emplace_back(o);
        for (const auto& s : subjects) {
            for (const auto& o : objects) {
                PredArgStructure pa;
                pa.verbLemma = d.verbLemma;
                pa.voice = d.voice;
                pa.subject = s;
                if (o)
                    pa.objects.push_back(*o);
                pa.negated = d.negated;
                pa.verb = d.verb;
                pa.verbGroup = d.verbGroup;
                pa.sourceTokens.insert(d.verbGroup.begin(), d.verbGroup.end());
                pa.sourceTokens.insert(pa.verb);
                if (s)
                    pa.sourceTokens.insert(*s);
                if (o)
                    pa.sourceTokens.insert(*o);
                result.structures.push_back(std::move(pa));
            }
        }
    }
    for (const Chunk& c : chunks)
        if (c.kind == ChunkKind::NounPhrase)
            for (std::size_t h : c.heads)
                result.roles.emplace(h, Role::Other);
    return result;
}

} // namespace detail

// Binds each third-person pronoun to the most salient preceding noun head:
// subject > direct object > other, recency breaking ties. An object pronoun
// skips its own clause subject whenever a direct-object candidate exists.
inline TaggedSentence resolvePronouns(TaggedSentence sentence)
{
    using detail::Role;
    auto& toks = sentence.tokens;
    const auto analysis = detail::analyzeClauses(sentence);
    auto salience = [](Role r) { return r == Role::Subject ? 3 : r == Role::Object ? 2 : 1; };

    for (std::size_t p = 0; p < toks.size(); ++p) {
        if (toks[p].tag != Tag::Pron)
            continue;
        toks[p].antecedent.reset();
        if (!detail::thirdPersonPronouns().count(text::lower(toks[p].surface)))
            continue;

        std::vector<std::pair<std::size_t, Role>> candidates;
        for (const auto& [head, role] : analysis.roles)
            if (head < p && toks[head].tag == Tag::Noun)
                candidates.emplace_back(head, role);
        if (candidates.empty())
            continue;

        std::optional<std::size_t> excluded;
        for (const auto& pa : analysis.structures) {
            if (std::find(pa.objects.begin(), pa.objects.end(), p) != pa.objects.end() && pa.subject) {
                const bool objectCandidate = std::any_of(candidates.begin(), candidates.end(),
                    [](const auto& c) { return c.second == Role::Object; });
                if (objectCandidate)
                    excluded = pa.subject;
            }
        }

        std::optional<std::pair<int, std::size_t>> best;
        for (const auto& [head, role] : candidates) {
            if (excluded && head == *excluded)
                continue;
            std::pair<int, std::size_t> key{salience(role), head};
            if (!best || key > *best)
                best = key;
        }
        if (best)
            toks[p].antecedent = best->second;
    }
    return sentence;
}

// One structure per verb group; an empty result is a parse failure.
inline std::vector<PredArgStructure> parseSentence(const TaggedSentence& sentence)
{
    return detail::analyzeClauses(sentence).structures;
}

struct AnalyzedSentence {
    TaggedSentence sentence;
    std::vector<PredArgStructure> structures;

    bool parseFailed() const { return structures.empty(); }
};

inline AnalyzedSentence analyze(std::string_view docId, int sentId, std::string_view rawText,
    const Lexicon& lexicon)
{
    TaggedSentence s = tagAndFilter(tokenize(rawText), lexicon);
    s.docId = std::string(docId);
    s.sentId = sentId;
    s.rawText = std::string(rawText);
    lemmatizeSentence(s, lexicon);
    s = resolvePronouns(std::move(s));
    auto structures = parseSentence(s);
    return {std::move(s), std::move(structures)};
}

} // namespace extrans::lingua
