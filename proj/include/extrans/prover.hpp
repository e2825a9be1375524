#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extrans/logform.hpp"

namespace extrans::prover {

using logform::HornFact;
using logform::Literal;
using logform::Term;

struct Substitution {
    std::map<std::string, Term> bindings;

    const Term* find(const std::string& var) const
    {
        auto it = bindings.find(var);
        return it == bindings.end() ? nullptr : &it->second;
    }
    bool operator==(const Substitution&) const = default;
};

// Bound variables are replaced recursively; the occurs check keeps this finite.
inline Term applySubst(const Term& term, const Substitution& s)
{
    if (term.isVar()) {
        if (const Term* bound = s.find(term.name))
            return applySubst(*bound, s);
        return term;
    }
    if (term.isList()) {
        Term out = term;
        for (auto& item : out.items)
            item = applySubst(item, s);
        return out;
    }
    return term;
}

inline Literal applySubst(const Literal& lit, const Substitution& s)
{
    Literal out = lit;
    for (auto& a : out.args)
        a = applySubst(a, s);
    return out;
}

inline bool occurs(const std::string& var, const Term& term, const Substitution& s)
{
    const Term t = applySubst(term, s);
    if (t.isVar())
        return t.name == var;
    for (const auto& item : t.items)
        if (occurs(var, item, s))
            return true;
    return false;
}

namespace detail {

inline Term walk(const Term& t, const Substitution& s)
{
    const Term* cur = &t;
    while (cur->isVar()) {
        const Term* next = s.find(cur->name);
        if (!next)
            break;
        cur = next;
    }
    return *cur;
}

// Binds var to value and keeps the substitution idempotent by pushing the
// new binding through every existing range term.
inline void bind(const std::string& var, const Term& value, Substitution& s)
{
    Substitution single;
    single.bindings.emplace(var, value);
    for (auto& [_, t] : s.bindings)
        t = applySubst(t, single);
    s.bindings.emplace(var, value);
}

} // namespace detail

inline bool unifyTerms(const Term& a, const Term& b, Substitution& s)
{
    const Term x = detail::walk(a, s);
    const Term y = detail::walk(b, s);
    if (x.isVar() && y.isVar() && x.name == y.name)
        return true;
    if (x.isVar() || y.isVar()) {
        const Term& v = x.isVar() ? x : y;
        const Term& t = x.isVar() ? y : x;
        if (occurs(v.name, t, s))
            return false;
        detail::bind(v.name, applySubst(t, s), s);
        return true;
    }
    if (x.kind != y.kind)
        return false;
    if (x.isConst())
        return x.name == y.name && x.scope == y.scope;
    if (x.items.size() != y.items.size())
        return false;
    for (std::size_t i = 0; i < x.items.size(); ++i)
        if (!unifyTerms(x.items[i], y.items[i], s))
            return false;
    return true;
}

// Predicate or arity mismatch, or a constant clash, is a failure value.
inline std::optional<Substitution> unify(const Literal& a, const Literal& b, Substitution s)
{
    if (a.predicate != b.predicate || a.args.size() != b.args.size())
        return std::nullopt;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!unifyTerms(a.args[i], b.args[i], s))
            return std::nullopt;
    return s;
}

struct FactRef {
    std::string docId;
    int sentId = 0;
    int ordinal = 0;

    auto operator<=>(const FactRef&) const = default;
};

inline FactRef refOf(const HornFact& f)
{
    return {f.docId, f.sentId, f.ordinal};
}

struct Proof {
    Substitution substitution;
    std::vector<FactRef> matchedFacts;
    std::vector<std::size_t> factIndices; // positions in the fact sequence given to solve
};

// Depth-first conjunctive matching over ground facts: goals in order,
// facts in store order, every proof returned.
inline std::vector<Proof> solve(std::span<const Literal> goals, std::span<const HornFact> facts)
{
    std::vector<Proof> proofs;
    if (goals.empty())
        return proofs;

    std::vector<std::vector<std::size_t>> candidates(goals.size());
    for (std::size_t g = 0; g < goals.size(); ++g) {
        const Literal& goal = goals[g];
        for (std::size_t f = 0; f < facts.size(); ++f) {
            const Literal& fact = facts[f].literal;
            if (fact.predicate != goal.predicate || fact.args.size() != goal.args.size())
                continue;
            if (!goal.args.empty() && goal.args[0].isConst() && fact.args[0].isConst() &&
                goal.args[0].name != fact.args[0].name)
                continue;
            candidates[g].push_back(f);
        }
        if (candidates[g].empty())
            return proofs;
    }

    std::vector<std::size_t> chosen;
    auto search = [&](auto& self, std::size_t g, const Substitution& s) -> void {
        if (g == goals.size()) {
            Proof p;
            p.substitution = s;
            p.factIndices = chosen;
            for (std::size_t idx : chosen)
                p.matchedFacts.push_back(refOf(facts[idx]));
            proofs.push_back(std::move(p));
            return;
        }
        for (std::size_t f : candidates[g]) {
            auto next = unify(goals[g], facts[f].literal, s);
            if (!next)
                continue;
            chosen.push_back(f);
            self(self, g + 1, *next);
            chosen.pop_back();
        }
    };
    search(search, 0, Substitution{});
    return proofs;
}

} // namespace extrans::prover
