#include <gtest/gtest.h>

#include "support.hpp"

using namespace extrans;
using namespace extrans::prover;
using logform::parseLiteral;
using testsupport::parseAll;

namespace {

Term C(const std::string& n)
{
    return Term::constant(n, 0);
}

Term V(const std::string& n)
{
    return Term::var(n);
}

std::vector<HornFact> rmSentenceFacts()
{
    std::vector<HornFact> out;
    int ordinal = 0;
    for (const auto& lit : parseAll({"holds(v_e2)", "object(rm,v_o_a1,v_x1)", "object(s_command,v_o_a2,v_x1)",
             "evt(s_remove,v_e2,[v_x1,v_x6])", "object(s_file,v_o_a3,v_x6)"}))
        out.push_back({lit, "rm", 0, ordinal++, {}});
    return out;
}

} // namespace

TEST(Subst, AppliesBindings)
{
    Substitution s;
    s.bindings["B"] = C("v_x1");
    EXPECT_EQ(applySubst(V("B"), s), C("v_x1"));
    EXPECT_EQ(applySubst(C("v_e2"), Substitution{}), C("v_e2"));
    s.bindings["D"] = C("v_x6");
    EXPECT_EQ(applySubst(Term::list({V("B"), V("D")}), s), Term::list({C("v_x1"), C("v_x6")}));
}

TEST(Unify, EventLiteral)
{
    const auto goal = *parseLiteral("evt(s_remove,C,[B,D])");
    const auto fact = *parseLiteral("evt(s_remove,v_e2,[v_x1,v_x6])", 0);
    const auto s = unify(goal, fact, {});
    ASSERT_TRUE(s);
    EXPECT_EQ(s->bindings.size(), 3u);
    EXPECT_EQ(*s->find("C"), C("v_e2"));
    EXPECT_EQ(*s->find("B"), C("v_x1"));
    EXPECT_EQ(*s->find("D"), C("v_x6"));
}

TEST(Unify, PredicateMismatchFails)
{
    EXPECT_FALSE(unify(*parseLiteral("object(s_file,E,D)"), *parseLiteral("evt(s_remove,v_e2,[v_x1,v_x6])", 0), {}));
}

TEST(Unify, PreboundVariableConflicts)
{
    Substitution s;
    s.bindings["B"] = C("v_x9");
    EXPECT_FALSE(unify(*parseLiteral("object(s_command,A,B)"), *parseLiteral("object(s_command,v_o_a2,v_x1)", 0), s));
}

TEST(Unify, ListLengthMismatchFails)
{
    EXPECT_FALSE(unify(*parseLiteral("evt(s_remove,C,[B])"), *parseLiteral("evt(s_remove,v_e2,[v_x1,v_x6])", 0), {}));
}

TEST(Unify, OccursCheck)
{
    Substitution s;
    EXPECT_FALSE(unifyTerms(V("X"), Term::list({V("X")}), s));
    Substitution t;
    EXPECT_TRUE(unifyTerms(V("X"), V("X"), t));
    EXPECT_TRUE(t.bindings.empty());
}

TEST(Unify, BindingsStayIdempotent)
{
    Substitution s;
    ASSERT_TRUE(unifyTerms(V("X"), V("Y"), s));
    ASSERT_TRUE(unifyTerms(V("Y"), C("k"), s));
    for (const auto& [v, t] : s.bindings)
        EXPECT_EQ(applySubst(t, s), t) << v;
    EXPECT_EQ(applySubst(V("X"), s), C("k"));
}

TEST(Solve, ErasesQueryHasOneProof)
{
    const auto goals = parseAll({"object(s_command,A,B)", "evt(s_remove,C,[B,D])", "object(s_file,E,D)"});
    const auto facts = rmSentenceFacts();
    const auto proofs = solve(goals, facts);
    ASSERT_EQ(proofs.size(), 1u);
    const auto& b = proofs[0].substitution;
    EXPECT_EQ(*b.find("A"), C("v_o_a2"));
    EXPECT_EQ(*b.find("B"), C("v_x1"));
    EXPECT_EQ(*b.find("C"), C("v_e2"));
    EXPECT_EQ(*b.find("D"), C("v_x6"));
    EXPECT_EQ(*b.find("E"), C("v_o_a3"));
    EXPECT_EQ(proofs[0].factIndices, (std::vector<std::size_t>{2, 3, 4}));
}

TEST(Solve, EmptyStoreHasNoProofs)
{
    const auto goals = parseAll({"object(s_file,E,D)"});
    EXPECT_TRUE(solve(goals, std::vector<HornFact>{}).empty());
}

TEST(Solve, EveryMatchingFactGivesAProof)
{
    std::vector<HornFact> facts;
    int ordinal = 0;
    for (const auto& lit : parseAll({"object(s_file,v_o_a1,v_x1)", "object(s_dir,v_o_a2,v_x2)", "object(s_file,v_o_a3,v_x3)"}))
        facts.push_back({lit, "d", 0, ordinal++, {}});
    const auto goals = parseAll({"object(s_file,E,D)"});
    EXPECT_EQ(solve(goals, facts).size(), 2u);
    EXPECT_EQ(testsupport::proverProofs(goals, facts), testsupport::oracleProofs(goals, facts));
}

TEST(Solve, AgreesWithBruteForceOracle)
{
    testsupport::Gen gen(42);
    for (int trial = 0; trial < 3000; ++trial) {
        std::vector<HornFact> facts;
        for (int i = 0, n = gen.below(9); i < n; ++i)
            facts.push_back({gen.fact(gen.below(2)), "d", 0, i, {}});
        const auto goals = gen.goals(4, facts);
        ASSERT_EQ(testsupport::proverProofs(goals, facts), testsupport::oracleProofs(goals, facts)) << "trial " << trial;
    }
}

TEST(Solve, ProofsAreSoundDeterministicAndOrderFree)
{
    testsupport::Gen gen(9);
    for (int trial = 0; trial < 1500; ++trial) {
        std::vector<HornFact> facts;
        for (int i = 0, n = gen.below(9); i < n; ++i)
            facts.push_back({gen.fact(0), "d", 0, i, {}});
        auto goals = gen.goals(4, facts);
        const auto proofs = solve(goals, facts);
        for (const auto& p : proofs) {
            ASSERT_EQ(p.factIndices.size(), goals.size());
            for (std::size_t g = 0; g < goals.size(); ++g)
                ASSERT_EQ(applySubst(goals[g], p.substitution), facts[p.factIndices[g]].literal);
            for (const auto& [v, t] : p.substitution.bindings)
                ASSERT_EQ(applySubst(t, p.substitution), t);
        }
        const auto again = solve(goals, facts);
        ASSERT_EQ(again.size(), proofs.size());
        for (std::size_t i = 0; i < proofs.size(); ++i) {
            ASSERT_EQ(again[i].factIndices, proofs[i].factIndices);
            ASSERT_EQ(again[i].substitution, proofs[i].substitution);
        }

        // Reversing the goals permutes each proof's fact choice but keeps the set.
        std::vector<Literal> reversed(goals.rbegin(), goals.rend());
        std::set<testsupport::OracleProof> a, b;
        for (const auto& p : proofs)
            a.emplace(p.factIndices, testsupport::envKey(p.substitution.bindings));
        for (const auto& p : solve(reversed, facts)) {
            std::vector<std::size_t> idx(p.factIndices.rbegin(), p.factIndices.rend());
            b.emplace(idx, testsupport::envKey(p.substitution.bindings));
        }
        ASSERT_EQ(a, b);
    }
}
