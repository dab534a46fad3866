#include <gtest/gtest.h>

#include "support/generators.hpp"

#include <ipuc/lewis.hpp>
#include <ipuc/normalize.hpp>

using namespace ipuc;

namespace {
const formula p = formula::atom("p");
const formula q = formula::atom("q");

std::set<std::string> open_ids(const derivation& d) {
    std::set<std::string> out;
    for (const auto& h : open_hypotheses(d)) out.insert(h.id);
    return out;
}

void expect_normal(const derivation& before, const derivation& after, system_mode mode) {
    const auto r = check(after, mode);
    ASSERT_TRUE(r.ok()) << r.errors.front().path << ": " << r.errors.front().message << "\n"
                        << write_derivation(after);
    EXPECT_EQ(after.concl, before.concl);
    EXPECT_TRUE(find_redexes(after).empty());
    const auto a = open_ids(after), b = open_ids(before);
    EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
}

derivation and_detour() {
    return infer(rule_id::and_e_l, p, {}, {infer(rule_id::and_i, parse("p & q"), {}, {hyp("1", p), hyp("2", q)})});
}
} // namespace

TEST(Redexes, Conjunction) {
    const derivation d = and_detour();
    const auto rs = find_redexes(d);
    ASSERT_EQ(rs.size(), 1U);
    EXPECT_EQ(format(rs[0]), "IntroElim(&) at root");
    const derivation n = reduce_step(d, rs[0]);
    EXPECT_EQ(n.rule, rule_id::hyp);
    EXPECT_EQ(n.id, "1");
    // the q branch is dropped, so an open hypothesis disappears
    EXPECT_EQ(open_ids(n), std::set<std::string>{"1"});
}

TEST(Redexes, Implication) {
    const derivation i = infer(rule_id::imp_i, parse("p -> p & p"), {}, {infer(rule_id::and_i, parse("p & p"), {},
                                                                                 {hyp("1", p), hyp("1", p)})},
                               {"1"});
    const derivation d = infer(rule_id::imp_e, parse("p & p"), {}, {i, hyp("2", p)});
    ASSERT_TRUE(check(d, system_mode::ipuc).ok());
    normalize_stats st;
    const derivation n = normalize(d, 100, &st);
    EXPECT_EQ(st.steps, 1U);
    EXPECT_EQ(st.by_kind[redex_kind::intro_elim], 1U);
    ASSERT_EQ(n.premises.size(), 2U);
    EXPECT_EQ(n.premises[0].id, "2");
    EXPECT_EQ(n.premises[1].id, "2");
    expect_normal(d, n, system_mode::ipuc);
}

TEST(Redexes, Disjunction) {
    const derivation left = hyp("3", p);
    const derivation right = infer(rule_id::imp_e, p, {}, {hyp("5", parse("q -> p")), hyp("4", q)});
    const derivation d = infer(rule_id::or_e, p, {}, {infer(rule_id::or_i_l, parse("p | q"), {}, {hyp("2", p)}), left,
                                                      right},
                               {"3", "4"});
    ASSERT_TRUE(check(d, system_mode::ipuc).ok());
    EXPECT_EQ(format(find_redexes(d).at(0)), "IntroElim(|) at root");
    const derivation n = normalize(d);
    EXPECT_EQ(n.rule, rule_id::hyp);
    EXPECT_EQ(n.id, "2");
    expect_normal(d, n, system_mode::ipuc);
}

TEST(Redexes, PermutationOverDisjunction) {
    const auto branch = [](const char* h, const char* a, const char* f) {
        return infer(rule_id::and_i, parse("p & q"), {},
                     {infer(rule_id::imp_e, p, {}, {hyp(f, parse(std::string(a) + " -> p")), hyp(h, parse(a))}),
                      hyp("9", q)});
    };
    const derivation cases = infer(rule_id::or_e, parse("p & q"), {},
                                   {hyp("1", parse("r | s")), branch("2", "r", "3"), branch("5", "s", "6")}, {"2", "5"});
    const derivation d = infer(rule_id::and_e_l, p, {}, {cases});
    ASSERT_TRUE(check(d, system_mode::ipuc).ok());
    const auto rs = find_redexes(d);
    ASSERT_EQ(rs.size(), 1U);
    EXPECT_EQ(format(rs[0]), "Permutation(ANDEL/ORE) at root");
    normalize_stats st;
    const derivation n = normalize(d, 100, &st);
    EXPECT_EQ(n.rule, rule_id::or_e);
    EXPECT_EQ(st.by_kind[redex_kind::permutation], 1U);
    EXPECT_EQ(st.by_kind[redex_kind::intro_elim], 2U);
    expect_normal(d, n, system_mode::ipuc);
}

TEST(Redexes, TestimonialDetours) {
    const derivation d = build_t_detour(parse("p^{+}"), q, 3);
    const auto rs = find_redexes(d);
    ASSERT_EQ(rs.size(), 3U);
    EXPECT_EQ(format(rs[0]), "T_33_34 at root.0");
    normalize_stats st;
    const derivation n = normalize(d, 100, &st);
    EXPECT_EQ(st.steps, 3U);
    EXPECT_EQ(st.by_kind[redex_kind::t_33_34], 3U);
    EXPECT_EQ(node_count(n), 2U);
    expect_normal(d, n, system_mode::ipucv);
}

TEST(Redexes, BelieverDetours) {
    const derivation d = build_b_detour(parse("p^{*}"), q, 2);
    normalize_stats st;
    const derivation n = normalize(d, 100, &st);
    EXPECT_EQ(st.by_kind[redex_kind::b_37_38], 2U);
    expect_normal(d, n, system_mode::ipucv);
}

TEST(Redexes, NormalBuildersHaveNone) {
    EXPECT_TRUE(find_redexes(build_cpr(p, q)).empty());
    EXPECT_TRUE(find_redexes(hyp("1", p)).empty());
}

TEST(Reduce, StaleRedex) {
    const derivation d = and_detour();
    EXPECT_THROW((void)reduce_step(d, redex{redex_kind::intro_elim, "&", {0}}), stale_redex);
    EXPECT_THROW((void)reduce_step(d, redex{redex_kind::intro_elim, "->", {}}), stale_redex);
    EXPECT_THROW((void)reduce_step(d, redex{redex_kind::intro_elim, "&", {3, 1}}), stale_redex);
}

TEST(Reduce, Budget) {
    const derivation d = build_t_detour(parse("p^{+}"), q, 3);
    EXPECT_THROW((void)normalize(d, 2), step_budget_exceeded);
    EXPECT_NO_THROW((void)normalize(d, 3));
}

TEST(Normalize, Generated) {
    gen::derivation_gen g(77);
    std::size_t steps = 0;
    for (int i = 0; i < 60; ++i) {
        const derivation d = g.make();
        ASSERT_TRUE(check(d, system_mode::ipuc).ok());
        normalize_stats st;
        const derivation n = normalize(d, 100000, &st);
        steps += st.steps;
        expect_normal(d, n, system_mode::ipuc);
    }
    EXPECT_GT(steps, 60U);
}
