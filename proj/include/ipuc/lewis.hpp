#pragma once

#include "deduction.hpp"
#include "parser.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ipuc {

enum class vop : std::uint8_t { atom, neg, conj, disj, imp, comp_poss, would, might };

/// Surface formula of Lewis' V-logic. comp_poss(a, b) reads "b is at least as
/// possible as a" and prints as `b =< a`.
struct vformula {
    vop kind = vop::atom;
    std::string name;
    std::vector<vformula> args;

    static vformula atom(std::string n) { return {vop::atom, std::move(n), {}}; }
    static vformula neg(vformula a) { return {vop::neg, {}, {std::move(a)}}; }
    static vformula conj(vformula a, vformula b) { return {vop::conj, {}, {std::move(a), std::move(b)}}; }
    static vformula disj(vformula a, vformula b) { return {vop::disj, {}, {std::move(a), std::move(b)}}; }
    static vformula imp(vformula a, vformula b) { return {vop::imp, {}, {std::move(a), std::move(b)}}; }
    static vformula comp_poss(vformula a, vformula b) { return {vop::comp_poss, {}, {std::move(a), std::move(b)}}; }
    static vformula would(vformula a, vformula b) { return {vop::would, {}, {std::move(a), std::move(b)}}; }
    static vformula might(vformula a, vformula b) { return {vop::might, {}, {std::move(a), std::move(b)}}; }

    friend bool operator==(const vformula&, const vformula&) = default;
};

namespace detail {
inline formula some_w(const formula& f) { return f.with_label(label::some_world()); }
inline formula all_w(const formula& f) { return f.with_label(label::all_worlds()); }
inline formula all_n(const formula& f) { return f.with_label(label::all_nbhd()); }
inline formula some_n(const formula& f) { return f.with_label(label::some_nbhd()); }
} // namespace detail

/// (a^+ -> b^+)^@ : b is at least as possible as a.
inline formula comp_poss_formula(const formula& a, const formula& b) {
    return detail::all_n(formula::imp(detail::some_w(a), detail::some_w(b)));
}

inline formula encode(const vformula& v) {
    using detail::all_n, detail::all_w, detail::some_n, detail::some_w;
    switch (v.kind) {
    case vop::atom: return formula::atom(v.name);
    case vop::neg: return formula::neg(encode(v.args[0]));
    case vop::conj: return formula::conj(encode(v.args[0]), encode(v.args[1]));
    case vop::disj: return formula::disj(encode(v.args[0]), encode(v.args[1]));
    case vop::imp: return formula::imp(encode(v.args[0]), encode(v.args[1]));
    case vop::comp_poss: return comp_poss_formula(encode(v.args[0]), encode(v.args[1]));
    case vop::would: {
        const formula a = encode(v.args[0]);
        const formula b = encode(v.args[1]);
        return formula::disj(all_n(formula::neg(some_w(a))),
                             some_n(formula::conj(some_w(a), all_w(formula::imp(a, b)))));
    }
    case vop::might: return formula::neg(encode(vformula::would(v.args[0], vformula::neg(v.args[1]))));
    }
    return formula::bot_n();
}

// ---------------------------------------------------------------------------
// Surface syntax: the core connectives plus `=<`, `[]->`, `<>->` (non-associative,
// binding looser than `|` and tighter than `->`).

namespace detail {

class vparser {
public:
    explicit vparser(std::string_view s) : s_(s) {}

    vformula run() {
        vformula f = imp();
        skip();
        if (i_ != s_.size()) throw parse_error("unexpected input", i_);
        return f;
    }

private:
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool accept(std::string_view t) {
        skip();
        if (s_.substr(i_, t.size()) == t) {
            i_ += t.size();
            return true;
        }
        return false;
    }
    vformula imp() {
        vformula l = cond();
        if (accept("->")) return vformula::imp(std::move(l), imp());
        return l;
    }
    vformula cond() {
        vformula l = disj();
        if (accept("=<")) return vformula::comp_poss(disj(), std::move(l));
        if (accept("[]->")) return vformula::would(std::move(l), disj());
        if (accept("<>->")) return vformula::might(std::move(l), disj());
        return l;
    }
    vformula disj() {
        vformula f = conj();
        while (accept("|")) f = vformula::disj(std::move(f), conj());
        return f;
    }
    vformula conj() {
        vformula f = unary();
        while (accept("&")) f = vformula::conj(std::move(f), unary());
        return f;
    }
    vformula unary() {
        if (accept("~")) return vformula::neg(unary());
        skip();
        if (accept("(")) {
            vformula f = imp();
            if (!accept(")")) throw parse_error("expected ')'", i_);
            return f;
        }
        if (i_ < s_.size() && s_[i_] >= 'a' && s_[i_] <= 'z') {
            std::size_t st = i_++;
            while (i_ < s_.size() && (std::islower(static_cast<unsigned char>(s_[i_])) ||
                                      std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                ++i_;
            return vformula::atom(std::string(s_.substr(st, i_ - st)));
        }
        throw parse_error(i_ < s_.size() ? "unexpected character" : "unexpected end of input", i_);
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

inline int vprec(const vformula& v) {
    switch (v.kind) {
    case vop::imp: return 1;
    case vop::comp_poss:
    case vop::would:
    case vop::might: return 2;
    case vop::disj: return 3;
    case vop::conj: return 4;
    case vop::neg: return 5;
    default: return 6;
    }
}

inline std::string vformat(const vformula& v);

inline std::string vwrap(const vformula& v, int min) {
    return vprec(v) < min ? "(" + vformat(v) + ")" : vformat(v);
}

inline std::string vformat(const vformula& v) {
    switch (v.kind) {
    case vop::atom: return v.name;
    case vop::neg: return "~" + vwrap(v.args[0], 5);
    case vop::conj: return vwrap(v.args[0], 4) + " & " + vwrap(v.args[1], 5);
    case vop::disj: return vwrap(v.args[0], 3) + " | " + vwrap(v.args[1], 4);
    case vop::imp: return vwrap(v.args[0], 2) + " -> " + vwrap(v.args[1], 1);
    case vop::comp_poss: return vwrap(v.args[1], 3) + " =< " + vwrap(v.args[0], 3);
    case vop::would: return vwrap(v.args[0], 3) + " []-> " + vwrap(v.args[1], 3);
    case vop::might: return vwrap(v.args[0], 3) + " <>-> " + vwrap(v.args[1], 3);
    }
    return {};
}

} // namespace detail

inline vformula parse_v(std::string_view text) { return detail::vparser(text).run(); }
inline std::string format(const vformula& v) { return detail::vformat(v); }

// ---------------------------------------------------------------------------
// Proof builders. Arguments are Fn formulas (typically encode(v)).

namespace detail {
inline context ctx(std::initializer_list<label> ls) { return context{std::vector<label>(ls)}; }
inline label nv(const char* n) { return label::nbhd_var(n); }
inline label wv(const char* n) { return label::world_var(n); }
} // namespace detail

/// From the rule premise a -> b derive (a^+ -> b^+)^@. The proof of a -> b at the
/// inner context is a PREMISE node, read as a globally valid formula.
inline derivation build_cpr(const formula& a, const formula& b) {
    using namespace detail;
    const label N = nv("N"), U = wv("U");
    const context cN = ctx({N}), cNu = ctx({N, U}), cNs = ctx({N, label::some_world()});
    derivation h1 = hyp("1", some_w(a), cN);
    derivation major = infer(rule_id::l2c, a, cNs, {h1});
    derivation h2 = hyp("2", a, cNu);
    derivation pi = premise("P", formula::imp(a, b), cNu);
    derivation mp = infer(rule_id::imp_e, b, cNu, {pi, h2});
    derivation ex = infer(rule_id::some_w_i, b, cNs, {mp});
    derivation back = infer(rule_id::c2l, some_w(b), cN, {ex});
    derivation elim = infer(rule_id::some_w_e, some_w(b), cN, {major, back}, {"2"}, U);
    const formula impl = formula::imp(some_w(a), some_w(b));
    derivation ii = infer(rule_id::imp_i, impl, cN, {elim}, {"1"});
    derivation gen = infer(rule_id::all_n_i, impl, ctx({label::all_nbhd()}), {ii}, {}, N);
    return infer(rule_id::c2l, all_n(impl), {}, {gen});
}

/// (a^+ -> b^+)^@ | (b^+ -> a^+)^@
inline formula connex_formula(const formula& a, const formula& b) {
    return formula::disj(comp_poss_formula(a, b), comp_poss_formula(b, a));
}

/// CONNEX through the testimonial rules (split, introduction).
inline derivation build_connex(const formula& a, const formula& b) {
    using namespace detail;
    const formula goal = connex_formula(a, b);
    const context at = ctx({label::all_nbhd()});
    auto side = [&](const char* id, const formula& x, const formula& y, rule_id intro) {
        // [x^+] at T(y)  =>  (y^+ -> x^+) at @  =>  (y^+ -> x^+)^@
        derivation h = hyp(id, some_w(x), ctx({label::testimonial(y)}));
        const formula impl = formula::imp(some_w(y), some_w(x));
        derivation ti = infer(rule_id::t_i, impl, at, {h});
        derivation c = infer(rule_id::c2l, all_n(impl), {}, {ti});
        return infer(intro, goal, {}, {c});
    };
    return infer(rule_id::t_split, goal, {}, {side("1a", a, b, rule_id::or_i_r), side("1b", b, a, rule_id::or_i_l)},
                 {"1a", "1b"});
}

/// CONNEX through rule 31.
inline derivation build_connex_via31(const formula& a, const formula& b) {
    using namespace detail;
    const formula goal = connex_formula(a, b);
    const context at = ctx({label::all_nbhd()});
    const formula ab = formula::imp(some_w(a), some_w(b));
    const formula ba = formula::imp(some_w(b), some_w(a));
    derivation l = infer(rule_id::or_i_l, goal, {}, {infer(rule_id::c2l, all_n(ab), {}, {hyp("1", ab, at)})});
    derivation r = infer(rule_id::or_i_r, goal, {}, {infer(rule_id::c2l, all_n(ba), {}, {hyp("2", ba, at)})});
    return infer(rule_id::rule31, goal, {}, {l, r}, {"1", "2"});
}

/// The derivation from CONNEX drawn for the axiom (a =< a|b) | (b =< a|b), taken
/// literally. Its conclusion is ((a|b) =< a) | ((a|b) =< b).
inline derivation build_lewis_axiom_figure(const formula& a, const formula& b) {
    using namespace detail;
    const formula ab = formula::disj(a, b);
    const context at = ctx({label::all_nbhd()});
    const context ats = ctx({label::all_nbhd(), label::some_world()});
    const formula goal = formula::disj(comp_poss_formula(a, ab), comp_poss_formula(b, ab));
    auto side = [&](const char* h3, const char* h1, const formula& x, const formula& y, rule_id join_ab,
                    rule_id intro) {
        // [(x^+ -> y^+)^@], [x^+] at @ ... (x^+ -> (a|b)^+)^@
        const formula xy = formula::imp(some_w(x), some_w(y));
        derivation major = infer(rule_id::l2c, xy, at, {hyp(h3, all_n(xy))});
        derivation mp = infer(rule_id::imp_e, some_w(y), at, {major, hyp(h1, some_w(x), at)});
        derivation down = infer(rule_id::l2c, y, ats, {mp});
        derivation join = infer(join_ab, ab, ats, {down});
        derivation up = infer(rule_id::c2l, some_w(ab), at, {join});
        const formula res = formula::imp(some_w(x), some_w(ab));
        derivation ii = infer(rule_id::imp_i, res, at, {up}, {h1});
        derivation cl = infer(rule_id::c2l, all_n(res), {}, {ii});
        return infer(intro, goal, {}, {cl});
    };
    derivation connex = build_connex(a, b);
    return infer(rule_id::or_e, goal, {},
                 {connex, side("3a", "1", a, b, rule_id::or_i_r, rule_id::or_i_l),
                  side("3b", "2", b, a, rule_id::or_i_l, rule_id::or_i_r)},
                 {"3a", "3b"});
}

/// (a =< a|b) | (b =< a|b) from CONNEX, keeping the figure's three discharges.
inline derivation build_lewis_axiom(const formula& a, const formula& b) {
    using namespace detail;
    const formula ab = formula::disj(a, b);
    const label N = nv("N"), U = wv("U");
    const context cN = ctx({N}), cNu = ctx({N, U}), cNs = ctx({N, label::some_world()});
    const formula goal = formula::disj(comp_poss_formula(ab, a), comp_poss_formula(ab, b));

    // Case [(x^+ -> y^+)^@]: every sphere meeting a|b meets y.
    auto side = [&](const std::string& s, const formula& x, const formula& y, bool x_is_a, rule_id intro) {
        const formula xy = formula::imp(some_w(x), some_w(y));
        derivation h3 = hyp("3" + s, all_n(xy));
        // y^+ at N from x at N,U
        auto via_x = [&](const std::string& hid) {
            derivation xs = infer(rule_id::some_w_i, x, cNs, {hyp(hid, x, cNu)});
            derivation xu = infer(rule_id::c2l, some_w(x), cN, {xs});
            derivation maj = infer(rule_id::all_n_e, xy, cN, {infer(rule_id::l2c, xy, ctx({label::all_nbhd()}), {h3})});
            return infer(rule_id::imp_e, some_w(y), cN, {maj, xu});
        };
        auto via_y = [&](const std::string& hid) {
            derivation ys = infer(rule_id::some_w_i, y, cNs, {hyp(hid, y, cNu)});
            return infer(rule_id::c2l, some_w(y), cN, {ys});
        };
        const std::string ha = "5" + s, hb = "6" + s;
        derivation left = x_is_a ? via_x(ha) : via_y(ha);
        derivation right = x_is_a ? via_y(hb) : via_x(hb);
        derivation cases = infer(rule_id::or_e, some_w(y), cN, {hyp("4" + s, ab, cNu), left, right}, {ha, hb});
        derivation h1 = hyp("2" + s, some_w(ab), cN);
        derivation major = infer(rule_id::l2c, ab, cNs, {h1});
        derivation elim = infer(rule_id::some_w_e, some_w(y), cN, {major, cases}, {"4" + s}, U);
        const formula res = formula::imp(some_w(ab), some_w(y));
        derivation ii = infer(rule_id::imp_i, res, cN, {elim}, {"2" + s});
        derivation gen = infer(rule_id::all_n_i, res, ctx({label::all_nbhd()}), {ii}, {}, N);
        derivation cl = infer(rule_id::c2l, all_n(res), {}, {gen});
        return infer(intro, goal, {}, {cl});
    };
    derivation connex = build_connex(a, b);
    return infer(rule_id::or_e, goal, {}, {connex, side("a", a, b, true, rule_id::or_i_r), side("b", b, a, false, rule_id::or_i_l)},
                 {"3a", "3b"});
}

/// `depth` stacked T-introduction/T-elimination detours over the hypothesis
/// a at T(b), closed by moving the label into the index.
inline derivation build_t_detour(const formula& a, const formula& b, int depth = 1) {
    using namespace detail;
    const context tb = ctx({label::testimonial(b)});
    const formula impl = formula::imp(some_w(b), a);
    derivation d = hyp("h", a, tb);
    for (int i = 0; i < depth; ++i) {
        d = infer(rule_id::t_i, impl, ctx({label::all_nbhd()}), {d});
        d = infer(rule_id::t_e, a, tb, {d});
    }
    return infer(rule_id::c2l, a.with_label(label::testimonial(b)), {}, {d});
}

/// The B-rule analogue of build_t_detour.
inline derivation build_b_detour(const formula& a, const formula& b, int depth = 1) {
    using namespace detail;
    const context bb = ctx({label::believer(b)});
    const formula impl = formula::imp(all_w(b), a);
    derivation d = hyp("h", a, bb);
    for (int i = 0; i < depth; ++i) {
        d = infer(rule_id::b_i, impl, ctx({label::all_nbhd()}), {d});
        d = infer(rule_id::b_e, a, bb, {d});
    }
    return infer(rule_id::c2l, a.with_label(label::believer(b)), {}, {d});
}

} // namespace ipuc
