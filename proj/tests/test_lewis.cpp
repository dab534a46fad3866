#include <gtest/gtest.h>

#include <ipuc/decide.hpp>
#include <ipuc/lewis.hpp>
#include <ipuc/parser.hpp>

using namespace ipuc;

TEST(Lewis, ComparativePossibility) {
    EXPECT_EQ(format(encode(parse_v("q =< p"))), "(p^{+} -> q^{+})^{@}");
    EXPECT_EQ(encode(parse_v("q =< p")), parse("(p^{+} -> q^{+})^{@}"));
    EXPECT_EQ(parse_v("q =< p"), vformula::comp_poss(vformula::atom("p"), vformula::atom("q")));
}

TEST(Lewis, WouldAndMight) {
    EXPECT_EQ(format(encode(parse_v("p []-> q"))), "(~p^{+})^{@} | (p^{+} & (p -> q)^{*})^{#}");
    EXPECT_EQ(encode(parse_v("p <>-> q")), formula::neg(encode(parse_v("p []-> ~q"))));
}

TEST(Lewis, Precedence) {
    EXPECT_EQ(parse_v("p | q =< r & s"),
              vformula::comp_poss(parse_v("r & s"), parse_v("p | q")));
    EXPECT_EQ(parse_v("p []-> q -> r"), vformula::imp(parse_v("p []-> q"), vformula::atom("r")));
    EXPECT_THROW((void)parse_v("p =< q =< r"), parse_error);
    EXPECT_THROW((void)parse_v("p []->"), parse_error);
    EXPECT_THROW((void)parse_v("(p"), parse_error);
}

TEST(Lewis, FormatRoundTrip) {
    for (const char* s : {"q =< p", "p []-> q", "~(p <>-> q) & r", "p =< q -> q =< p", "p | q []-> ~r", "(p -> q) =< r"}) {
        const vformula v = parse_v(s);
        EXPECT_EQ(format(v), s);
        EXPECT_EQ(parse_v(format(v)), v);
    }
}

TEST(Lewis, EncodingsAreSentences) {
    for (const char* s : {"q =< p", "p []-> q", "p <>-> ~q", "(p []-> q) =< r"})
        EXPECT_TRUE(is_sentence(encode(parse_v(s)))) << s;
}

TEST(Lewis, SemanticSanity) {
    EXPECT_TRUE(oracle_entails({}, encode(parse_v("p =< p"))));
    EXPECT_TRUE(oracle_entails({}, encode(parse_v("(p =< q) | (q =< p)"))));
    EXPECT_TRUE(oracle_entails({}, encode(parse_v("p =< p & q"))));
    EXPECT_FALSE(oracle_entails({}, encode(parse_v("q =< p"))));
}
