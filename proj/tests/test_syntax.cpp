#include <gtest/gtest.h>

#include <ipuc/parser.hpp>
#include <ipuc/syntax.hpp>

using namespace ipuc;

TEST(Characteristic, BaseFormulas) {
    EXPECT_EQ(characteristic_of(formula::atom("p")), characteristic::fn);
    EXPECT_EQ(characteristic_of(formula::bot_n()), characteristic::fn);
    EXPECT_EQ(characteristic_of(formula::bot_w()), characteristic::fw);
    EXPECT_EQ(characteristic_of(formula::leq("N")), characteristic::fw);
    EXPECT_EQ(characteristic_of(formula::geq("N")), characteristic::fw);
}

TEST(Characteristic, LabelsAlternate) {
    const formula p = formula::atom("p");
    const formula pw = p.with_label(label::some_world());
    EXPECT_EQ(characteristic_of(pw), characteristic::fw);
    EXPECT_EQ(characteristic_of(pw.with_label(label::all_nbhd())), characteristic::fn);
    EXPECT_FALSE(try_characteristic(p.with_label(label::all_nbhd())).has_value());
    EXPECT_FALSE(try_characteristic(pw.with_label(label::world_var("U"))).has_value());
    EXPECT_THROW((void)characteristic_of(p.with_label(label::all_nbhd())), ill_formed);
}

TEST(Characteristic, ConnectivesNeedMatchingSides) {
    const formula p = formula::atom("p");
    const formula pw = p.with_label(label::all_worlds());
    EXPECT_FALSE(try_characteristic(formula::conj(p, pw)).has_value());
    EXPECT_EQ(characteristic_of(formula::imp(pw, formula::bot_w())), characteristic::fw);
}

TEST(Characteristic, TestimonialPayloadMustBeFn) {
    const formula pw = formula::atom("p").with_label(label::some_world());
    EXPECT_TRUE(try_characteristic(pw.with_label(label::testimonial(formula::atom("q")))).has_value());
    EXPECT_FALSE(try_characteristic(pw.with_label(label::testimonial(pw))).has_value());
}

TEST(Context, FitsAndFlatten) {
    const formula p = formula::atom("p");
    const context c = parse_context("n(N),w(U)");
    EXPECT_TRUE(fits(p, c));
    EXPECT_EQ(format(flatten(p, c)), "p^{w(U),n(N)}");
    EXPECT_FALSE(fits(p, parse_context("n(N)")));
    EXPECT_THROW((void)flatten(p, parse_context("n(N)")), fit_error);
    EXPECT_EQ(flatten(p, context{}), p);
}

TEST(Context, WellFormedness) {
    context bad{{label::world_var("U")}};
    EXPECT_FALSE(well_formed(bad));
    context ok{{label::all_nbhd(), label::some_world()}};
    EXPECT_TRUE(well_formed(ok));
    EXPECT_EQ(ok.without_last().size(), 1U);
}

TEST(Variables, CollectAndRename) {
    const formula f = parse("(p^{w(U)} -> leq(n(K)))^{n(N)}");
    const auto v = variables_of(f);
    EXPECT_EQ(v.worlds, std::set<std::string>{"U"});
    EXPECT_EQ(v.nbhds, (std::set<std::string>{"K", "N"}));
    EXPECT_FALSE(is_sentence(f));
    EXPECT_EQ(format(rename_variable(f, label_kind::nbhd_var, "K", "M")), "(p^{w(U)} -> leq(n(M)))^{n(N)}");
    EXPECT_EQ(format(rename_variable(f, label_kind::world_var, "U", "V")), "(p^{w(V)} -> leq(n(K)))^{n(N)}");
    EXPECT_TRUE(is_sentence(parse("(p^{+})^{T(q)}")));
}

TEST(Format, PrecedenceAndIndices) {
    EXPECT_EQ(format(formula::imp(formula::atom("p"), formula::imp(formula::atom("q"), formula::atom("p")))),
              "p -> q -> p");
    EXPECT_EQ(format(formula::imp(formula::imp(formula::atom("p"), formula::atom("q")), formula::atom("p"))),
              "(p -> q) -> p");
    EXPECT_EQ(format(formula::neg(formula::conj(formula::atom("p"), formula::atom("q")))), "~(p & q)");
    const formula pw = formula::atom("p").with_label(label::some_world());
    EXPECT_EQ(format(formula::imp(pw, pw).with_label(label::all_nbhd())), "(p^{+} -> p^{+})^{@}");
    EXPECT_EQ(format(pw.with_label(label::believer(formula::atom("q")))), "p^{+,B(q)}");
    EXPECT_EQ(format(formula::bot_w()), "botW");
}

TEST(Formula, StructuralEquality) {
    EXPECT_EQ(parse("p & q"), formula::conj(formula::atom("p"), formula::atom("q")));
    EXPECT_NE(parse("p & q"), parse("q & p"));
    EXPECT_LT(parse("p"), parse("q"));
    const formula f = parse("p^{+,@}");
    EXPECT_EQ(f.body(), formula::atom("p"));
    EXPECT_EQ(f.without_last(), parse("p^{+}"));
}

TEST(Atoms, Collect) {
    std::set<std::string> atoms;
    collect_atoms(parse("(p -> r)^{+,T(q)}"), atoms);
    EXPECT_EQ(atoms, (std::set<std::string>{"p", "q", "r"}));
}
