#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "extrans/prover.hpp"
#include "extrans/store.hpp"
#include "extrans/text.hpp"

namespace extrans::rank {

using store::CharSpan;

struct Answer {
    std::string docId;
    int sentId = 0;
    std::string sentenceText;
    std::vector<CharSpan> spans;
    double score = 1.0;
    std::uint64_t readingCount = 1;
    std::map<std::string, std::string> bindingsSummary;

    std::size_t coverage() const
    {
        std::size_t n = 0;
        for (const auto& s : spans)
            n += s.end - s.start;
        return n;
    }
};

// Relevance as the inverse of residual tagging ambiguity.
inline double scoreAnswer(std::uint64_t readingCount)
{
    return 1.0 / static_cast<double>(std::max<std::uint64_t>(readingCount, 1));
}

// Character spans of the tokens behind the matched facts, sorted, with
// neighbours separated only by whitespace merged into one span.
inline std::vector<CharSpan> highlightSpans(const prover::Proof& proof, const store::DocClauseStore& doc)
{
    std::vector<CharSpan> out;
    if (proof.matchedFacts.empty())
        return out;
    const int sentId = proof.matchedFacts.front().sentId;
    auto rec = doc.sentences.find(sentId);
    if (rec == doc.sentences.end())
        return out;

    std::set<std::size_t> tokens;
    for (const auto& ref : proof.matchedFacts)
        if (const auto* f = doc.fact(ref))
            tokens.insert(f->sourceTokens.begin(), f->sourceTokens.end());

    const auto& text = rec->second.rawText;
    for (std::size_t t : tokens) {
        if (t >= rec->second.tokenSpans.size())
            continue;
        const CharSpan sp = rec->second.tokenSpans[t];
        if (!out.empty()) {
            CharSpan& last = out.back();
            const bool onlySpace = std::all_of(text.begin() + static_cast<std::ptrdiff_t>(last.end),
                text.begin() + static_cast<std::ptrdiff_t>(sp.start), [](char c) { return text::isSpace(c); });
            if (sp.start >= last.end && onlySpace) {
                last.end = sp.end;
                continue;
            }
        }
        out.push_back(sp);
    }
    return out;
}

namespace detail {

inline std::string describe(const logform::Term& t, const store::DocClauseStore& doc, int sentId)
{
    const auto& rec = doc.sentences.at(sentId);
    auto surfaceOf = [&](const logform::HornFact& f) {
        std::string s;
        for (std::size_t tok : f.sourceTokens) {
            if (tok >= rec.tokenSpans.size())
                continue;
            if (!s.empty())
                s += ' ';
            s += rec.rawText.substr(rec.tokenSpans[tok].start, rec.tokenSpans[tok].end - rec.tokenSpans[tok].start);
        }
        return s;
    };
    for (const auto& f : doc.facts) {
        if (f.sentId != sentId)
            continue;
        const auto& args = f.literal.args;
        const bool entityMatch = f.literal.predicate == logform::Predicate::Object && (args[2] == t || args[1] == t);
        const bool eventMatch = f.literal.predicate == logform::Predicate::Evt && args[1] == t;
        if (entityMatch || eventMatch) {
            std::string s = surfaceOf(f);
            if (!s.empty())
                return s;
        }
    }
    return logform::to_string(t);
}

} // namespace detail

inline Answer makeAnswer(const store::DocProof& match)
{
    const auto& doc = *match.store;
    const auto& rec = doc.sentences.at(match.sentId);
    Answer a;
    a.docId = match.docId;
    a.sentId = match.sentId;
    a.sentenceText = rec.rawText;
    a.readingCount = rec.readingCount;
    a.score = scoreAnswer(rec.readingCount);
    a.spans = highlightSpans(match.proof, doc);
    for (const auto& [var, term] : match.proof.substitution.bindings)
        a.bindingsSummary[var] = detail::describe(term, doc, match.sentId);
    return a;
}

// One answer per (docId, sentId), keeping the largest highlight coverage
// (first seen wins a tie); then score descending, docId, sentId.
inline std::vector<Answer> rankAnswers(std::vector<Answer> answers)
{
    std::map<std::pair<std::string, int>, Answer> best;
    for (auto& a : answers) {
        auto key = std::make_pair(a.docId, a.sentId);
        auto it = best.find(key);
        if (it == best.end())
            best.emplace(std::move(key), std::move(a));
        else if (a.coverage() > it->second.coverage() ||
            (a.coverage() == it->second.coverage() && a.spans < it->second.spans))
            it->second = std::move(a);
    }
    std::vector<Answer> out;
    out.reserve(best.size());
    for (auto& [_, a] : best)
        out.push_back(std::move(a));
    std::stable_sort(out.begin(), out.end(), [](const Answer& x, const Answer& y) {
        if (x.readingCount != y.readingCount)
            return x.readingCount < y.readingCount;
        if (x.docId != y.docId)
            return x.docId < y.docId;
        return x.sentId < y.sentId;
    });
    return out;
}

inline std::vector<Answer> answersFrom(const std::vector<store::DocProof>& matches)
{
    std::vector<Answer> out;
    out.reserve(matches.size());
    for (const auto& m : matches)
        out.push_back(makeAnswer(m));
    return rankAnswers(std::move(out));
}

inline std::string renderHighlighted(const std::string& sentence, const std::vector<CharSpan>& spans)
{
    std::string out;
    std::size_t pos = 0;
    for (const auto& sp : spans) {
        if (sp.start < pos || sp.end > sentence.size())
            continue;
        out.append(sentence, pos, sp.start - pos);
        out += "<<";
        out.append(sentence, sp.start, sp.end - sp.start);
        out += ">>";
        pos = sp.end;
    }
    out.append(sentence, pos, std::string::npos);
    return out;
}

} // namespace extrans::rank
