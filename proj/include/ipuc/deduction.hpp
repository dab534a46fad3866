#pragma once

#include "syntax.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ipuc {

struct judgement {
    formula f;
    context ctx;

    friend bool operator==(const judgement&, const judgement&) = default;
    friend std::strong_ordering operator<=>(const judgement& a, const judgement& b) {
        if (auto c = a.f <=> b.f; c != 0) return c;
        return a.ctx <=> b.ctx;
    }
};

[[nodiscard]] inline std::string format(const judgement& j) { return format(j.f) + " @ [" + format(j.ctx) + "]"; }

enum class rule_id : std::uint8_t {
    hyp,
    premise,
    and_i,
    and_e_l,
    and_e_r,
    or_i_l,
    or_i_r,
    or_e,
    imp_i,
    imp_e,
    bot_n_e,
    bot_w_e,
    bot_transfer,
    l2c,
    c2l,
    all_w_i,
    all_w_e,
    some_w_i,
    some_w_e,
    all_n_i,
    all_n_e,
    some_n_i,
    some_n_e,
    rule31,
    t_axiom,
    t_i,
    t_e,
    t_split,
    b_axiom,
    b_i,
    b_e,
    b_split,
    class_abs
};

inline constexpr std::array<std::pair<rule_id, std::string_view>, 33> rule_tokens{{
    {rule_id::hyp, "HYP"},           {rule_id::premise, "PREMISE"},   {rule_id::and_i, "ANDI"},
    {rule_id::and_e_l, "ANDEL"},     {rule_id::and_e_r, "ANDER"},     {rule_id::or_i_l, "ORIL"},
    {rule_id::or_i_r, "ORIR"},       {rule_id::or_e, "ORE"},          {rule_id::imp_i, "IMPI"},
    {rule_id::imp_e, "IMPE"},        {rule_id::bot_n_e, "BOTNE"},     {rule_id::bot_w_e, "BOTWE"},
    {rule_id::bot_transfer, "BOTTRANSFER"},                           {rule_id::l2c, "L2C"},
    {rule_id::c2l, "C2L"},           {rule_id::all_w_i, "ALLWI"},     {rule_id::all_w_e, "ALLWE"},
    {rule_id::some_w_i, "SOMEWI"},   {rule_id::some_w_e, "SOMEWE"},   {rule_id::all_n_i, "ALLNI"},
    {rule_id::all_n_e, "ALLNE"},     {rule_id::some_n_i, "SOMENI"},   {rule_id::some_n_e, "SOMENE"},
    {rule_id::rule31, "RULE31"},     {rule_id::t_axiom, "TAXIOM"},    {rule_id::t_i, "TI"},
    {rule_id::t_e, "TE"},            {rule_id::t_split, "TSPLIT"},    {rule_id::b_axiom, "BAXIOM"},
    {rule_id::b_i, "BI"},            {rule_id::b_e, "BE"},            {rule_id::b_split, "BSPLIT"},
    {rule_id::class_abs, "CLASSABS"},
}};

[[nodiscard]] inline std::string_view rule_token(rule_id r) {
    for (const auto& [id, tok] : rule_tokens)
        if (id == r) return tok;
    return "?";
}

[[nodiscard]] inline std::optional<rule_id> rule_from_token(std::string_view tok) {
    for (const auto& [id, t] : rule_tokens)
        if (t == tok) return id;
    return std::nullopt;
}

enum class system_mode : std::uint8_t { ipuc, ipucv, ipucv31, puc };

[[nodiscard]] inline std::string_view mode_name(system_mode m) {
    switch (m) {
    case system_mode::ipuc: return "ipuc";
    case system_mode::ipucv: return "ipucv";
    case system_mode::ipucv31: return "ipucv31";
    case system_mode::puc: return "puc";
    }
    return "?";
}

[[nodiscard]] inline std::optional<system_mode> parse_mode(std::string_view s) {
    for (auto m : {system_mode::ipuc, system_mode::ipucv, system_mode::ipucv31, system_mode::puc})
        if (mode_name(m) == s) return m;
    return std::nullopt;
}

[[nodiscard]] inline bool is_t_or_b_rule(rule_id r) {
    return r == rule_id::t_axiom || r == rule_id::t_i || r == rule_id::t_e || r == rule_id::t_split ||
           r == rule_id::b_axiom || r == rule_id::b_i || r == rule_id::b_e || r == rule_id::b_split;
}

[[nodiscard]] inline bool rule_in_mode(rule_id r, system_mode m) {
    if (r == rule_id::class_abs) return m == system_mode::puc;
    if (r == rule_id::rule31) return m == system_mode::ipucv31;
    if (is_t_or_b_rule(r)) return m == system_mode::ipucv || m == system_mode::ipucv31;
    return true;
}

/// Rules binding a variable at the node.
[[nodiscard]] inline bool is_binder(rule_id r) {
    return r == rule_id::bot_transfer || r == rule_id::all_w_i || r == rule_id::all_n_i || r == rule_id::some_w_e ||
           r == rule_id::some_n_e;
}

struct derivation {
    judgement concl;
    rule_id rule = rule_id::hyp;
    std::vector<derivation> premises;
    std::vector<std::string> discharges;
    std::optional<label> binds;
    std::string id; // hypothesis class for HYP/PREMISE, optional node name otherwise

    friend bool operator==(const derivation&, const derivation&) = default;
};

[[nodiscard]] inline derivation hyp(std::string id, formula f, context ctx = {}) {
    return derivation{{std::move(f), std::move(ctx)}, rule_id::hyp, {}, {}, std::nullopt, std::move(id)};
}

[[nodiscard]] inline derivation premise(std::string id, formula f, context ctx = {}) {
    return derivation{{std::move(f), std::move(ctx)}, rule_id::premise, {}, {}, std::nullopt, std::move(id)};
}

[[nodiscard]] inline derivation infer(rule_id r, formula f, context ctx, std::vector<derivation> premises,
                                      std::vector<std::string> discharges = {},
                                      std::optional<label> binds = std::nullopt) {
    return derivation{{std::move(f), std::move(ctx)}, r, std::move(premises), std::move(discharges), std::move(binds),
                      {}};
}

[[nodiscard]] inline std::size_t node_count(const derivation& d) {
    std::size_t n = 1;
    for (const auto& p : d.premises) n += node_count(p);
    return n;
}

struct check_options {
    // Rules carrying the "no universal neighbourhood quantifier in the context" restriction
    // in the V modes. Empty by default.
    std::set<rule_id> negativeish;
};

/// One rule application, stripped of the derivations above it.
struct rule_instance {
    rule_id rule = rule_id::hyp;
    judgement concl;
    std::vector<judgement> premises;
    std::vector<std::vector<judgement>> discharged; // per premise, judgements of hypotheses closed here
    std::optional<label> binds;
};

// ---------------------------------------------------------------------------
// Context predicates

[[nodiscard]] inline bool no_existential(const context& c) {
    for (const auto& l : c.labels)
        if (is_existential(l.kind)) return false;
    return true;
}

[[nodiscard]] inline bool no_universal(const context& c) {
    for (const auto& l : c.labels)
        if (is_universal(l.kind)) return false;
    return true;
}

[[nodiscard]] inline bool variables_only(const context& c) {
    for (const auto& l : c.labels)
        if (!is_variable(l.kind)) return false;
    return true;
}

[[nodiscard]] inline bool no_universal_nbhd(const context& c) {
    for (const auto& l : c.labels)
        if (l.kind == label_kind::all_nbhd || l.kind == label_kind::testimonial || l.kind == label_kind::believer)
            return false;
    return true;
}

namespace detail {

inline bool last_is(const context& c, label_kind k) { return !c.empty() && c.back().kind == k; }

inline std::optional<std::string> shape(bool ok, const char* what) {
    if (ok) return std::nullopt;
    return std::string(what);
}

// For rules whose hypotheses are fixed by the conclusion: every discharged
// judgement must equal the slot judgement of its premise.
inline std::optional<std::string> slots_match(const rule_instance& in,
                                              const std::vector<std::optional<judgement>>& slots) {
    for (std::size_t i = 0; i < in.discharged.size(); ++i) {
        for (const auto& j : in.discharged[i]) {
            if (i >= slots.size() || !slots[i]) return "premise " + std::to_string(i + 1) + " admits no discharge";
            if (!(j == *slots[i]))
                return "discharged hypothesis " + format(j) + " does not match " + format(*slots[i]);
        }
    }
    return std::nullopt;
}

inline std::optional<judgement> only_discharged(const rule_instance& in, std::size_t i, std::string& err) {
    if (i >= in.discharged.size() || in.discharged[i].empty()) return std::nullopt;
    const auto& first = in.discharged[i].front();
    for (const auto& j : in.discharged[i])
        if (!(j == first)) err = "premise " + std::to_string(i + 1) + " discharges two different hypotheses";
    return first;
}

inline formula last_label(const formula& f, label l) { return f.with_label(std::move(l)); }

// Checks α^{Σ,w}→β^{Ω,w} shape at Δ,@; returns (α^Σ, β^Ω, Δ).
struct split_parts {
    formula a, b;
    context delta;
};

inline std::optional<split_parts> rule31_parts(const judgement& j) {
    if (!last_is(j.ctx, label_kind::all_nbhd)) return std::nullopt;
    if (j.f.kind() != op::imp || !j.f.index().empty()) return std::nullopt;
    const formula l = j.f.lhs(), r = j.f.rhs();
    if (l.index().empty() || r.index().empty()) return std::nullopt;
    if (l.index().back().kind != label_kind::some_world || r.index().back().kind != label_kind::some_world)
        return std::nullopt;
    return split_parts{l.without_last(), r.without_last(), j.ctx.without_last()};
}

// Checks α^{Σ,w}@Δ,T(β) (or B); returns (α^Σ, β^Ω, Δ).
inline std::optional<split_parts> tb_parts(const judgement& j, label_kind lk, label_kind wk) {
    if (!last_is(j.ctx, lk)) return std::nullopt;
    if (j.f.index().empty() || j.f.index().back().kind != wk) return std::nullopt;
    return split_parts{j.f.without_last(), *j.ctx.back().payload, j.ctx.without_last()};
}

inline std::optional<std::string> case_split_common(const rule_instance& in) {
    if (in.premises.size() != 2) return "expected two premises";
    if (!(in.premises[0] == in.concl) || !(in.premises[1] == in.concl))
        return "both premises must conclude the node's judgement";
    return std::nullopt;
}

} // namespace detail

/// Schema check for one rule application (shapes, fitting, context restrictions,
/// mode membership). Freshness is checked by `check`, which sees whole subtrees.
inline std::optional<std::string> schema_error(const rule_instance& in, system_mode mode,
                                               const check_options& opts = {}) {
    using detail::shape;
    if (!rule_in_mode(in.rule, mode)) return "rule not in system";
    if (!fits(in.concl.f, in.concl.ctx)) return "conclusion does not fit its context";
    for (const auto& p : in.premises)
        if (!fits(p.f, p.ctx)) return "premise does not fit its context";
    for (const auto& ds : in.discharged)
        for (const auto& j : ds)
            if (!fits(j.f, j.ctx)) return "discharged hypothesis does not fit its context";
    const bool wants_bind = is_binder(in.rule);
    if (wants_bind != in.binds.has_value()) return wants_bind ? "missing bound variable" : "unexpected bind";
    if ((mode == system_mode::ipucv || mode == system_mode::ipucv31) && opts.negativeish.count(in.rule) &&
        !no_universal_nbhd(in.concl.ctx))
        return "context has a universal neighbourhood quantifier";

    auto npremises = [&](std::size_t n) -> std::optional<std::string> {
        if (in.premises.size() != n) return "expected " + std::to_string(n) + " premise(s)";
        if (in.discharged.size() > n) return std::string("malformed discharge table");
        return std::nullopt;
    };
    auto no_discharge = [&]() -> std::optional<std::string> {
        for (const auto& ds : in.discharged)
            if (!ds.empty()) return std::string("rule discharges nothing");
        return std::nullopt;
    };
#define IPUC_TRY(x)                                                                                                    \
    if (auto e_ = (x)) return e_
    const auto& c = in.concl;
    const auto& f = c.f;
    const auto& ctx = c.ctx;

    switch (in.rule) {
    case rule_id::hyp: IPUC_TRY(npremises(0)); return std::nullopt;
    case rule_id::premise:
        IPUC_TRY(npremises(0));
        IPUC_TRY(shape(try_characteristic(f) == characteristic::fn, "premise formula must be Fn"));
        return shape(no_existential(ctx), "premise context must be existential-free");
    case rule_id::and_i: {
        IPUC_TRY(npremises(2));
        IPUC_TRY(no_discharge());
        IPUC_TRY(shape(f.kind() == op::conj && f.index().empty(), "conclusion must be a conjunction"));
        IPUC_TRY(shape(in.premises[0] == judgement{f.lhs(), ctx} && in.premises[1] == judgement{f.rhs(), ctx},
                       "premises must be the conjuncts at the same context"));
        return shape(no_existential(ctx), "context must be existential-free");
    }
    case rule_id::and_e_l:
    case rule_id::and_e_r: {
        IPUC_TRY(npremises(1));
        IPUC_TRY(no_discharge());
        const auto& p = in.premises[0];
        IPUC_TRY(shape(p.f.kind() == op::conj && p.f.index().empty() && p.ctx == ctx, "premise must be a conjunction"));
        return shape(f == (in.rule == rule_id::and_e_l ? p.f.lhs() : p.f.rhs()), "conclusion is not the conjunct");
    }
    case rule_id::or_i_l:
    case rule_id::or_i_r: {
        IPUC_TRY(npremises(1));
        IPUC_TRY(no_discharge());
        IPUC_TRY(shape(f.kind() == op::disj && f.index().empty(), "conclusion must be a disjunction"));
        const formula kept = in.rule == rule_id::or_i_l ? f.lhs() : f.rhs();
        return shape(in.premises[0] == judgement{kept, ctx}, "premise is not the disjunct");
    }
    case rule_id::or_e: {
        IPUC_TRY(npremises(3));
        const auto& maj = in.premises[0];
        IPUC_TRY(shape(maj.f.kind() == op::disj && maj.f.index().empty(), "major premise must be a disjunction"));
        IPUC_TRY(shape(in.premises[1] == c && in.premises[2] == c, "minor premises must conclude the node's judgement"));
        IPUC_TRY(shape(no_universal(maj.ctx), "major context must have no universal quantifier"));
        return detail::slots_match(
            in, {std::nullopt, judgement{maj.f.lhs(), maj.ctx}, judgement{maj.f.rhs(), maj.ctx}});
    }
    case rule_id::imp_i: {
        IPUC_TRY(npremises(1));
        IPUC_TRY(shape(f.kind() == op::imp && f.index().empty(), "conclusion must be an implication"));
        IPUC_TRY(shape(in.premises[0] == judgement{f.rhs(), ctx}, "premise must be the consequent"));
        IPUC_TRY(shape(no_existential(ctx), "context must be existential-free"));
        return detail::slots_match(in, {judgement{f.lhs(), ctx}});
    }
    case rule_id::imp_e: {
        IPUC_TRY(npremises(2));
        IPUC_TRY(no_discharge());
        const auto& maj = in.premises[0];
        IPUC_TRY(shape(maj.f.kind() == op::imp && maj.f.index().empty() && maj.ctx == ctx,
                       "major premise must be an implication at the same context"));
        IPUC_TRY(shape(maj.f.rhs() == f, "conclusion is not the consequent"));
        IPUC_TRY(shape(in.premises[1] == judgement{maj.f.lhs(), ctx}, "minor premise is not the antecedent"));
        return shape(no_existential(ctx), "context must be existential-free");
    }
    case rule_id::bot_n_e:
    case rule_id::bot_w_e: {
        IPUC_TRY(npremises(1));
        IPUC_TRY(no_discharge());
        const formula bot = in.rule == rule_id::bot_n_e ? formula::bot_n() : formula::bot_w();
        return shape(in.premises[0] == judgement{bot, ctx}, "premise must be falsum at the same context");
    }
    case rule_id::bot_transfer: {
        IPUC_TRY(npremises(1));
        IPUC_TRY(no_discharge());
        IPUC_TRY(shape(in.binds->kind == label_kind::nbhd_var, "must bind a neighbourhood variable"));
        IPUC_TRY(shape(f == formula::bot_n(), "conclusion must be botN"));
        return shape(in.premises[0] == judgement{formula::bot_w(), ctx.with(*in.binds)},
                     "premise must be botW at the context extended by the bound variable");
    }
    case rule_id::l2c:
    case rule_id::c2l: {
        IPUC_TRY(npremises(1));
        IPUC_TRY(no_discharge());
        const judgement& p = in.premises[0];
        const judgement& labelled = in.rule == rule_id::l2c ? p : c;
        const judgement& moved = in.rule == rule_id::l2c ? c : p;
        IPUC_TRY(shape(!labelled.f.index().empty() && !moved.ctx.empty(), "nothing to move"));
        return shape(moved.f == labelled.f.without_last() && moved.ctx == labelled.ctx.with(labelled.f.index().back()),
                     "label move does not match");
    }
    case rule_id::all_w_i:
    case rule_id::all_n_i: {
        IPUC_TRY(npremises(1));
        IPUC_TRY(no_discharge());
        const bool w = in.rule == rule_id::all_w_i;
        IPUC_TRY(shape(in.binds->kind == (w ? label_kind::world_var : label_kind::nbhd_var),
                       "bound variable has the wrong kind"));
        IPUC_TRY(shape(detail::last_is(ctx, w ? label_kind::all_worlds : label_kind::all_nbhd),
                       "conclusion context must end with the universal label"));
        IPUC_TRY(shape(in.premises[0] == judgement{f, ctx.without_last().with(*in.binds)},
                       "premise must be the formula at the bound variable"));
        return shape(variables_only(ctx.without_last()), "outer context must consist of variables");
    }
    case rule_id::all_w_e:
    case rule_id::all_n_e: {
        IPUC_TRY(npremises(1));
        IPUC_TRY(no_discharge());
        const bool w = in.rule == rule_id::all_w_e;
        IPUC_TRY(shape(detail::last_is(ctx, w ? label_kind::world_var : label_kind::nbhd_var),
                       "conclusion context must end with a variable"));
        return shape(in.premises[0] == judgement{f, ctx.without_last().with(w ? label::all_worlds() : label::all_nbhd())},
                     "premise must be the formula under the universal label");
    }
    case rule_id::some_w_i:
    case rule_id::some_n_i: {
        IPUC_TRY(npremises(1));
        IPUC_TRY(no_discharge());
        const bool w = in.rule == rule_id::some_w_i;
        IPUC_TRY(shape(detail::last_is(ctx, w ? label_kind::some_world : label_kind::some_nbhd),
                       "conclusion context must end with the existential label"));
        const auto& p = in.premises[0];
        return shape(p.f == f && detail::last_is(p.ctx, w ? label_kind::world_var : label_kind::nbhd_var) &&
                         p.ctx.without_last() == ctx.without_last(),
                     "premise must be the formula at a variable");
    }
    case rule_id::some_w_e:
    case rule_id::some_n_e: {
        IPUC_TRY(npremises(2));
        const bool w = in.rule == rule_id::some_w_e;
        const auto& maj = in.premises[0];
        IPUC_TRY(shape(in.binds->kind == (w ? label_kind::world_var : label_kind::nbhd_var),
                       "bound variable has the wrong kind"));
        IPUC_TRY(shape(detail::last_is(maj.ctx, w ? label_kind::some_world : label_kind::some_nbhd),
                       "major premise context must end with the existential label"));
        IPUC_TRY(shape(in.premises[1] == c, "minor premise must conclude the node's judgement"));
        IPUC_TRY(shape(variables_only(maj.ctx.without_last()), "outer context must consist of variables"));
        return detail::slots_match(in, {std::nullopt, judgement{maj.f, maj.ctx.without_last().with(*in.binds)}});
    }
    case rule_id::rule31: {
        IPUC_TRY(detail::case_split_common(in));
        std::string err;
        auto j1 = detail::only_discharged(in, 0, err);
        auto j2 = detail::only_discharged(in, 1, err);
        if (!err.empty()) return err;
        std::optional<detail::split_parts> p1, p2;
        if (j1 && !(p1 = detail::rule31_parts(*j1))) return std::string("first hypothesis is not a@+ -> b@+ at D,@");
        if (j2 && !(p2 = detail::rule31_parts(*j2))) return std::string("second hypothesis is not b@+ -> a@+ at D,@");
        if (p1 && p2 && !(p1->a == p2->b && p1->b == p2->a && p1->delta == p2->delta))
            return std::string("hypotheses are not mirror images");
        for (const auto* p : {&p1, &p2})
            if (*p && !variables_only((*p)->delta)) return std::string("outer context must consist of variables");
        return std::nullopt;
    }
    case rule_id::t_axiom:
    case rule_id::b_axiom: {
        IPUC_TRY(npremises(0));
        const bool t = in.rule == rule_id::t_axiom;
        IPUC_TRY(shape(detail::last_is(ctx, t ? label_kind::testimonial : label_kind::believer),
                       "context must end with the testimonial/believer label"));
        IPUC_TRY(shape(f == ctx.back().payload->with_label(t ? label::some_world() : label::all_worlds()),
                       "formula must be the label's argument under the world quantifier"));
        return shape(variables_only(ctx.without_last()), "outer context must consist of variables");
    }
    case rule_id::t_i:
    case rule_id::b_i:
    case rule_id::t_e:
    case rule_id::b_e: {
        IPUC_TRY(npremises(1));
        IPUC_TRY(no_discharge());
        const bool t = in.rule == rule_id::t_i || in.rule == rule_id::t_e;
        const bool intro = in.rule == rule_id::t_i || in.rule == rule_id::b_i;
        const judgement& inside = intro ? in.premises[0] : c; // α at Δ,T(β)
        const judgement& outside = intro ? c : in.premises[0]; // β^w -> α at Δ,@
        IPUC_TRY(shape(detail::last_is(inside.ctx, t ? label_kind::testimonial : label_kind::believer),
                       "context must end with the testimonial/believer label"));
        const formula& beta = *inside.ctx.back().payload;
        const formula expect =
            formula::imp(beta.with_label(t ? label::some_world() : label::all_worlds()), inside.f);
        return shape(outside == judgement{expect, inside.ctx.without_last().with(label::all_nbhd())},
                     "implication under @ does not match");
    }
    case rule_id::t_split:
    case rule_id::b_split: {
        IPUC_TRY(detail::case_split_common(in));
        const bool t = in.rule == rule_id::t_split;
        const auto lk = t ? label_kind::testimonial : label_kind::believer;
        const auto wk = t ? label_kind::some_world : label_kind::all_worlds;
        std::string err;
        auto j1 = detail::only_discharged(in, 0, err);
        auto j2 = detail::only_discharged(in, 1, err);
        if (!err.empty()) return err;
        std::optional<detail::split_parts> p1, p2;
        if (j1 && !(p1 = detail::tb_parts(*j1, lk, wk))) return std::string("first hypothesis has the wrong shape");
        if (j2 && !(p2 = detail::tb_parts(*j2, lk, wk))) return std::string("second hypothesis has the wrong shape");
        if (p1 && p2 && !(p1->a == p2->b && p1->b == p2->a && p1->delta == p2->delta))
            return std::string("hypotheses are not mirror images");
        for (const auto* p : {&p1, &p2})
            if (*p && !variables_only((*p)->delta)) return std::string("outer context must consist of variables");
        return std::nullopt;
    }
    case rule_id::class_abs: {
        IPUC_TRY(npremises(1));
        const auto ch = try_characteristic(f);
        const formula bot = ch == characteristic::fn ? formula::bot_n() : formula::bot_w();
        IPUC_TRY(shape(in.premises[0] == judgement{bot, ctx}, "premise must be falsum at the same context"));
        IPUC_TRY(shape(no_existential(ctx), "context must be existential-free"));
        return detail::slots_match(in, {judgement{formula::neg(f), ctx}});
    }
    }
#undef IPUC_TRY
    return "unknown rule";
}

// ---------------------------------------------------------------------------
// Whole-derivation checking

struct open_hypothesis {
    std::string id;
    judgement j;
    bool is_premise = false; // stands for a rule-of-proof premise, read globally

    friend bool operator==(const open_hypothesis&, const open_hypothesis&) = default;
};

struct check_error {
    std::string path; // node id when present, otherwise a dotted premise path from the root
    std::string message;
};

struct check_report {
    std::vector<check_error> errors;
    std::vector<open_hypothesis> open; // sorted by id
    judgement conclusion;

    [[nodiscard]] bool ok() const noexcept { return errors.empty(); }
};

namespace detail {

inline bool mentions(const judgement& j, const label& v) {
    variable_set s = variables_of(j.f);
    s.merge(variables_of(j.ctx));
    return s.contains(v);
}

inline bool subtree_mentions(const derivation& d, const label& v) {
    if (mentions(d.concl, v)) return true;
    for (const auto& p : d.premises)
        if (subtree_mentions(p, v)) return true;
    return false;
}

using open_map = std::map<std::string, open_hypothesis>;

class checker {
public:
    checker(system_mode mode, const check_options& opts) : mode_(mode), opts_(opts) {}

    open_map visit(const derivation& d, const std::string& path) {
        const std::string where = d.id.empty() ? path : d.id;
        if (d.rule == rule_id::hyp || d.rule == rule_id::premise) {
            open_map m;
            if (d.id.empty()) error(where, "hypothesis without an id");
            register_hyp(d, where);
            if (auto e = schema_error(rule_instance{d.rule, d.concl, {}, {}, d.binds}, mode_, opts_)) error(where, *e);
            const bool prem = d.rule == rule_id::premise;
            m[d.id] = open_hypothesis{d.id, prem ? judgement{d.concl.f, {}} : d.concl, prem};
            return m;
        }
        std::vector<open_map> sub;
        sub.reserve(d.premises.size());
        for (std::size_t i = 0; i < d.premises.size(); ++i)
            sub.push_back(visit(d.premises[i], path + "." + std::to_string(i)));

        rule_instance in{d.rule, d.concl, {}, {}, d.binds};
        for (const auto& p : d.premises) in.premises.push_back(p.concl);
        in.discharged.assign(d.premises.size(), {});
        std::set<std::string> dset(d.discharges.begin(), d.discharges.end());
        for (const auto& id : dset) {
            bool found = false;
            for (std::size_t i = 0; i < sub.size(); ++i) {
                auto it = sub[i].find(id);
                if (it == sub[i].end()) continue;
                found = true;
                if (it->second.is_premise) {
                    error(where, "cannot discharge premise " + id);
                    continue;
                }
                auto& ds = in.discharged[i];
                if (std::find(ds.begin(), ds.end(), it->second.j) == ds.end()) ds.push_back(it->second.j);
            }
            if (!found) error(where, "discharged id " + id + " is not open above this node");
        }
        if (auto e = schema_error(in, mode_, opts_)) error(where, *e);
        if (d.binds) freshness(d, sub, dset, where);

        open_map out;
        for (const auto& m : sub)
            for (const auto& [id, h] : m)
                if (!dset.count(id)) out.emplace(id, h);
        return out;
    }

    std::vector<check_error> errors;

private:
    void error(const std::string& where, const std::string& msg) { errors.push_back({where, msg}); }

    void register_hyp(const derivation& d, const std::string& where) {
        const judgement j = d.rule == rule_id::premise ? judgement{d.concl.f, {}} : d.concl;
        auto [it, inserted] = seen_.emplace(d.id, std::make_pair(j, d.rule));
        if (!inserted && (!(it->second.first == j) || it->second.second != d.rule))
            error(where, "hypothesis id " + d.id + " is used for different judgements");
    }

    void freshness(const derivation& d, const std::vector<open_map>& sub, const std::set<std::string>& dset,
                   const std::string& where) {
        const label& v = *d.binds;
        if (mentions(d.concl, v)) error(where, "bound variable occurs in the conclusion");
        const bool elim = d.rule == rule_id::some_w_e || d.rule == rule_id::some_n_e;
        const std::size_t designated = elim ? 1 : 0;
        if (designated >= d.premises.size()) return;
        if (elim && mentions(judgement{formula::atom("x"), d.premises[0].concl.ctx}, v))
            error(where, "bound variable occurs in the context");
        for (std::size_t i = 0; i < d.premises.size(); ++i) {
            if (i == designated) continue;
            if (subtree_mentions(d.premises[i], v)) error(where, "bound variable occurs outside its subderivation");
        }
        for (const auto& [id, h] : sub[designated]) {
            if (h.is_premise || (elim && dset.count(id))) continue;
            if (mentions(h.j, v)) error(where, "bound variable occurs in open hypothesis " + id);
        }
    }

    system_mode mode_;
    const check_options& opts_;
    std::map<std::string, std::pair<judgement, rule_id>> seen_;
};

} // namespace detail

inline check_report check(const derivation& d, system_mode mode, const check_options& opts = {}) {
    detail::checker c(mode, opts);
    auto open = c.visit(d, "root");
    check_report r;
    r.errors = std::move(c.errors);
    for (auto& [id, h] : open) r.open.push_back(h);
    r.conclusion = d.concl;
    return r;
}

inline std::vector<open_hypothesis> open_hypotheses(const derivation& d) {
    return check(d, system_mode::puc).open;
}

} // namespace ipuc
