#pragma once

#include "decide.hpp"
#include "deduction.hpp"
#include "model_io.hpp"
#include "parser.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace ipuc {

struct audit_options {
    std::size_t max_instances = 24; // per rule
    bool canary = false;            // also audit a deliberately unsound ImpE variant
    unsigned workers = 0;           // 0: hardware concurrency
    std::set<rule_id> only;         // restrict to these rules; empty: every rule of the mode
};

struct audit_counterexample {
    std::string instance;
    std::string assignment;
    std::string model; // model file text, actual world = refuting world
};

struct rule_audit {
    std::string name; // rule token, or CANARY
    rule_id rule = rule_id::hyp;
    std::size_t instances = 0;
    std::size_t checks = 0;
    std::size_t counterexamples = 0;
    std::optional<audit_counterexample> first;
};

struct audit_report {
    std::vector<rule_audit> rules;

    [[nodiscard]] std::size_t counterexamples() const {
        std::size_t n = 0;
        for (const auto& r : rules) n += r.counterexamples;
        return n;
    }
    [[nodiscard]] const rule_audit* find(std::string_view name) const {
        for (const auto& r : rules)
            if (r.name == name) return &r;
        return nullptr;
    }
};

namespace detail {

// ---------------------------------------------------------------------------
// Instance generation

struct audit_instance {
    rule_instance in;
    std::optional<label> bound; // eigenvariable / generalised variable
};

inline const std::vector<formula>& audit_formulas() {
    static const std::vector<formula> pool = [] {
        std::vector<formula> v;
        for (const char* s : {"p", "q", "~p", "p -> q", "p | q", "p & q", "botN", "q^{+,@}", "p^{+}", "p^{*}",
                              "(p -> q)^{+}", "botW", "q^{+} | p^{*}", "leq(n(N))", "~p^{+}"})
            v.push_back(parse(s));
        return v;
    }();
    return pool;
}

inline const std::vector<context>& audit_contexts() {
    static const std::vector<context> pool = [] {
        const std::vector<label> nb{label::nbhd_var("N"), label::all_nbhd(), label::some_nbhd(),
                                    label::testimonial(formula::atom("p"))};
        const std::vector<label> wl{label::world_var("U"), label::all_worlds(), label::some_world()};
        std::vector<context> v{context{}};
        for (const auto& a : nb) {
            v.push_back(context{{a}});
            for (const auto& b : wl) {
                v.push_back(context{{a, b}});
                for (const auto& c : nb) v.push_back(context{{a, b, c}});
            }
        }
        return v;
    }();
    return pool;
}

inline std::vector<audit_instance> candidates(rule_id r, bool canary) {
    const label K = label::nbhd_var("K"), V = label::world_var("V");
    std::vector<audit_instance> out;
    auto J = [](formula f, context c) { return judgement{std::move(f), std::move(c)}; };
    // case splits and eigenvariable eliminations conclude falsum, so a refutation is
    // exactly a point where the major premise holds and no case/witness does
    const judgement goal{formula::bot_n(), context{}};
    for (const auto& d : audit_contexts()) {
        for (const auto& a : audit_formulas()) {
            for (const auto& b : audit_formulas()) {
                rule_instance in{r, {}, {}, {}, std::nullopt};
                std::optional<label> bound;
                const formula sa = a.with_label(label::some_world());
                const formula sb = b.with_label(label::some_world());
                const formula wa = a.with_label(label::all_worlds());
                const formula wb = b.with_label(label::all_worlds());
                if (canary) {
                    in.rule = rule_id::imp_e;
                    in.concl = J(a, d);
                    in.premises = {J(formula::imp(a, b), d), J(b, d)};
                    out.push_back({in, bound});
                    continue;
                }
                switch (r) {
                case rule_id::premise: in.concl = J(a, d); break;
                case rule_id::and_i:
                    in.concl = J(formula::conj(a, b), d);
                    in.premises = {J(a, d), J(b, d)};
                    break;
                case rule_id::and_e_l:
                case rule_id::and_e_r:
                    in.premises = {J(formula::conj(a, b), d)};
                    in.concl = J(r == rule_id::and_e_l ? a : b, d);
                    break;
                case rule_id::or_i_l:
                case rule_id::or_i_r:
                    in.concl = J(formula::disj(a, b), d);
                    in.premises = {J(r == rule_id::or_i_l ? a : b, d)};
                    break;
                case rule_id::or_e:
                    in.concl = goal;
                    in.premises = {J(formula::disj(a, b), d), goal, goal};
                    in.discharged = {{}, {J(a, d)}, {J(b, d)}};
                    break;
                case rule_id::imp_i:
                    in.concl = J(formula::imp(a, b), d);
                    in.premises = {J(b, d)};
                    in.discharged = {{J(a, d)}};
                    break;
                case rule_id::imp_e:
                    in.concl = J(b, d);
                    in.premises = {J(formula::imp(a, b), d), J(a, d)};
                    break;
                case rule_id::bot_n_e:
                case rule_id::bot_w_e:
                    in.concl = J(a, d);
                    in.premises = {J(r == rule_id::bot_n_e ? formula::bot_n() : formula::bot_w(), d)};
                    break;
                case rule_id::bot_transfer:
                    if (!(a == formula::bot_n()) || !(b == formula::bot_n())) continue;
                    in.concl = J(formula::bot_n(), d);
                    in.premises = {J(formula::bot_w(), d.with(K))};
                    in.binds = bound = K;
                    break;
                case rule_id::l2c:
                    if (a.index().empty() || !(b == formula::bot_n())) continue;
                    in.premises = {J(a, d)};
                    in.concl = J(a.without_last(), d.with(a.index().back()));
                    break;
                case rule_id::c2l:
                    if (d.empty() || !(b == formula::bot_n())) continue;
                    in.premises = {J(a, d)};
                    in.concl = J(a.with_label(d.back()), d.without_last());
                    break;
                case rule_id::all_w_i:
                case rule_id::all_n_i: {
                    if (!(b == formula::bot_n())) continue;
                    const bool w = r == rule_id::all_w_i;
                    bound = w ? V : K;
                    in.binds = bound;
                    in.premises = {J(a, d.with(*bound))};
                    in.concl = J(a, d.with(w ? label::all_worlds() : label::all_nbhd()));
                    break;
                }
                case rule_id::all_w_e:
                case rule_id::all_n_e: {
                    if (!(b == formula::bot_n())) continue;
                    const bool w = r == rule_id::all_w_e;
                    in.premises = {J(a, d.with(w ? label::all_worlds() : label::all_nbhd()))};
                    in.concl = J(a, d.with(w ? label::world_var("U") : label::nbhd_var("N")));
                    break;
                }
                case rule_id::some_w_i:
                case rule_id::some_n_i: {
                    if (!(b == formula::bot_n())) continue;
                    const bool w = r == rule_id::some_w_i;
                    in.premises = {J(a, d.with(w ? label::world_var("U") : label::nbhd_var("N")))};
                    in.concl = J(a, d.with(w ? label::some_world() : label::some_nbhd()));
                    break;
                }
                case rule_id::some_w_e:
                case rule_id::some_n_e: {
                    const bool w = r == rule_id::some_w_e;
                    bound = w ? V : K;
                    in.binds = bound;
                    const context outer = d.without_last();
                    if (d.empty() || d.back().kind != (w ? label_kind::some_world : label_kind::some_nbhd)) continue;
                    if (!(b == formula::bot_n())) continue;
                    in.premises = {J(a, d), goal};
                    in.concl = goal;
                    in.discharged = {{}, {J(a, outer.with(*bound))}};
                    break;
                }
                case rule_id::rule31: {
                    const context inner = d.with(label::all_nbhd());
                    in.concl = goal;
                    in.premises = {goal, goal};
                    in.discharged = {{J(formula::imp(sa, sb), inner)}, {J(formula::imp(sb, sa), inner)}};
                    break;
                }
                case rule_id::t_axiom:
                case rule_id::b_axiom: {
                    if (!(b == formula::bot_n())) continue;
                    const bool t = r == rule_id::t_axiom;
                    in.concl = J(t ? sa : wa, d.with(t ? label::testimonial(a) : label::believer(a)));
                    break;
                }
                case rule_id::t_i:
                case rule_id::t_e:
                case rule_id::b_i:
                case rule_id::b_e: {
                    const bool t = r == rule_id::t_i || r == rule_id::t_e;
                    const judgement inside = J(a, d.with(t ? label::testimonial(b) : label::believer(b)));
                    const judgement outside = J(formula::imp(t ? sb : wb, a), d.with(label::all_nbhd()));
                    const bool intro = r == rule_id::t_i || r == rule_id::b_i;
                    in.premises = {intro ? inside : outside};
                    in.concl = intro ? outside : inside;
                    break;
                }
                case rule_id::t_split:
                case rule_id::b_split: {
                    const bool t = r == rule_id::t_split;
                    in.concl = goal;
                    in.premises = {goal, goal};
                    in.discharged = {
                        {J(t ? sa : wa, d.with(t ? label::testimonial(b) : label::believer(b)))},
                        {J(t ? sb : wb, d.with(t ? label::testimonial(a) : label::believer(a)))}};
                    break;
                }
                case rule_id::class_abs: {
                    if (!(b == formula::bot_n())) continue;
                    const auto ch = try_characteristic(a);
                    in.concl = J(a, d);
                    in.premises = {J(ch == characteristic::fn ? formula::bot_n() : formula::bot_w(), d)};
                    in.discharged = {{J(formula::neg(a), d)}};
                    break;
                }
                default: continue;
                }
                if (in.discharged.empty()) in.discharged.assign(in.premises.size(), {});
                out.push_back({in, bound});
            }
        }
    }
    return out;
}

inline system_mode widest_mode(rule_id r) {
    if (r == rule_id::class_abs) return system_mode::puc;
    return system_mode::ipucv31;
}

// Round-robin over contexts so that every context shape is represented.
inline std::vector<audit_instance> select_instances(rule_id r, bool canary, std::size_t cap) {
    std::map<context, std::vector<audit_instance>> by_ctx;
    for (auto& c : candidates(r, canary)) {
        bool ok = true;
        for (const auto& p : c.in.premises) ok = ok && fits(p.f, p.ctx);
        ok = ok && fits(c.in.concl.f, c.in.concl.ctx);
        if (!canary) ok = ok && !schema_error(c.in, widest_mode(r)).has_value();
        else ok = ok && no_existential(c.in.concl.ctx);
        if (!ok) continue;
        const context key = c.in.premises.empty() ? c.in.concl.ctx : c.in.premises.front().ctx;
        by_ctx[key].push_back(std::move(c));
    }
    // fixed seed: the selection is part of the report and must be reproducible
    std::mt19937 rng(0x1b5u + static_cast<unsigned>(r));
    std::vector<std::vector<audit_instance>*> buckets;
    for (auto& [k, v] : by_ctx) {
        std::shuffle(v.begin(), v.end(), rng);
        buckets.push_back(&v);
    }
    std::shuffle(buckets.begin(), buckets.end(), rng);
    std::vector<audit_instance> out;
    for (std::size_t round = 0; out.size() < cap; ++round) {
        bool any = false;
        for (auto* bp : buckets) {
            auto& v = *bp;
            if (round >= v.size()) continue;
            any = true;
            out.push_back(v[round]);
            if (out.size() == cap) break;
        }
        if (!any) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Semantic readings

enum class reading { pointwise, binder, eigen, split, local, global, axiom };

inline reading reading_of(rule_id r) {
    switch (r) {
    case rule_id::all_w_i:
    case rule_id::all_n_i: return reading::binder;
    case rule_id::some_w_e:
    case rule_id::some_n_e: return reading::eigen;
    case rule_id::or_e:
    case rule_id::rule31:
    case rule_id::t_split:
    case rule_id::b_split: return reading::split;
    case rule_id::imp_i:
    case rule_id::class_abs: return reading::local;
    case rule_id::premise: return reading::global;
    case rule_id::t_axiom:
    case rule_id::b_axiom: return reading::axiom;
    default: return reading::pointwise;
    }
}

struct point {
    int w;
    world_set n;
    bool templ;
};

// Every variable label met while walking ctx from z denotes something in range.
inline bool admissible(const finite_model& m, const assignment& s, const context& ctx, std::size_t i, int w,
                       world_set n, bool templ) {
    if (i == ctx.size()) return true;
    const label& l = ctx.labels[i];
    const auto& sph = m.spheres[static_cast<std::size_t>(w)];
    switch (l.kind) {
    case label_kind::nbhd_var: {
        auto it = s.nbhds.find(l.name);
        if (it == s.nbhds.end() || !contains_nbhd(sph, it->second)) return false;
        return admissible(m, s, ctx, i + 1, w, it->second, true);
    }
    case label_kind::all_nbhd:
    case label_kind::some_nbhd:
        for (world_set x : sph)
            if (!admissible(m, s, ctx, i + 1, w, x, true)) return false;
        return true;
    case label_kind::testimonial:
    case label_kind::believer:
        for (int lam = 0; lam < m.size(); ++lam) {
            if (!member(m.access[static_cast<std::size_t>(w)], lam)) continue;
            for (world_set x : m.spheres[static_cast<std::size_t>(lam)])
                if (!admissible(m, s, ctx, i + 1, lam, x, true)) return false;
        }
        return true;
    case label_kind::world_var: {
        auto it = s.worlds.find(l.name);
        if (it == s.worlds.end() || !member(n, it->second)) return false;
        return admissible(m, s, ctx, i + 1, it->second, 0, false);
    }
    case label_kind::all_worlds:
    case label_kind::some_world:
        for (int v = 0; v < m.size(); ++v)
            if (member(n, v) && !admissible(m, s, ctx, i + 1, v, 0, false)) return false;
        return true;
    }
    (void)templ;
    return false;
}

// Points reached by walking ctx from z, closing under access at every model point.
inline void reach(const finite_model& m, const assignment& s, const context& ctx, std::size_t i, int w, world_set n,
                  bool templ, std::vector<point>& out) {
    if (!templ) {
        // close under access
        for (int lam = 0; lam < m.size(); ++lam) {
            if (!member(m.access[static_cast<std::size_t>(w)], lam)) continue;
            if (i == ctx.size()) {
                out.push_back({lam, 0, false});
                continue;
            }
            const label& l = ctx.labels[i];
            const auto& sph = m.spheres[static_cast<std::size_t>(lam)];
            if (l.kind == label_kind::nbhd_var) {
                auto it = s.nbhds.find(l.name);
                if (it != s.nbhds.end() && contains_nbhd(sph, it->second))
                    reach(m, s, ctx, i + 1, lam, it->second, true, out);
            } else {
                for (world_set x : sph) reach(m, s, ctx, i + 1, lam, x, true, out);
            }
        }
        return;
    }
    if (i == ctx.size()) {
        out.push_back({w, n, true});
        return;
    }
    const label& l = ctx.labels[i];
    if (l.kind == label_kind::world_var) {
        auto it = s.worlds.find(l.name);
        if (it != s.worlds.end() && member(n, it->second)) reach(m, s, ctx, i + 1, it->second, 0, false, out);
        return;
    }
    for (int v = 0; v < m.size(); ++v)
        if (member(n, v)) reach(m, s, ctx, i + 1, v, 0, false, out);
}

inline bool res(const finite_model& m, const assignment& s, const judgement& j, int z) {
    return holds_full(m, s, append_reversed(j.f, j.ctx), z, 0, false);
}

inline bool admissible_all(const finite_model& m, const assignment& s, const std::vector<const context*>& cs, int z) {
    for (const auto* c : cs)
        if (!admissible(m, s, *c, 0, z, 0, false)) return false;
    return true;
}

inline std::string describe(const assignment& s, const finite_model& m) {
    std::string out;
    for (const auto& [k, v] : s.worlds) out += (out.empty() ? "" : ", ") + ("w(" + k + ")=" + m.worlds[v]);
    for (const auto& [k, v] : s.nbhds) out += (out.empty() ? "" : ", ") + ("n(" + k + ")=" + format_set(m, v));
    return out.empty() ? "-" : out;
}

inline std::string describe(const rule_instance& in) {
    std::string out;
    for (std::size_t i = 0; i < in.premises.size(); ++i) {
        out += (i ? "; " : "") + format(in.premises[i]);
        if (i < in.discharged.size())
            for (const auto& h : in.discharged[i]) out += " [" + format(h) + "]";
    }
    out += " => " + format(in.concl);
    if (in.binds) out += " bind " + format(*in.binds);
    return out;
}

// All assignments of the given variables over worlds / neighbourhoods of m.
inline void for_each_assignment(const finite_model& m, const variable_set& vars,
                                const std::function<bool(const assignment&)>& f) {
    std::vector<world_set> nbhds;
    for (const auto& sph : m.spheres)
        for (world_set x : sph)
            if (std::find(nbhds.begin(), nbhds.end(), x) == nbhds.end()) nbhds.push_back(x);
    std::vector<std::string> wv(vars.worlds.begin(), vars.worlds.end());
    std::vector<std::string> nv(vars.nbhds.begin(), vars.nbhds.end());
    if (!nv.empty() && nbhds.empty()) {
        // variables cannot be bound; no assignment is admissible
        return;
    }
    std::vector<std::size_t> wi(wv.size(), 0), ni(nv.size(), 0);
    while (true) {
        assignment s;
        for (std::size_t i = 0; i < wv.size(); ++i) s.worlds[wv[i]] = static_cast<int>(wi[i]);
        for (std::size_t i = 0; i < nv.size(); ++i) s.nbhds[nv[i]] = nbhds[ni[i]];
        if (!f(s)) return;
        std::size_t k = 0;
        while (k < wi.size() && ++wi[k] == static_cast<std::size_t>(m.size())) wi[k++] = 0;
        if (k < wi.size()) continue;
        k = 0;
        while (k < ni.size() && ++ni[k] == nbhds.size()) ni[k++] = 0;
        if (k == ni.size()) return;
        std::fill(wi.begin(), wi.end(), 0);
    }
}

/// Checks one instance on one model; returns the refuting world and assignment, if any.
inline std::optional<std::pair<int, assignment>> refute(const audit_instance& ai, const finite_model& m,
                                                        reading rd, std::size_t& checks) {
    const rule_instance& in = ai.in;
    variable_set outer;
    auto add = [&](const judgement& j) {
        collect_variables(j.f, outer);
        outer.merge(variables_of(j.ctx));
    };
    add(in.concl);
    for (const auto& p : in.premises) add(p);
    for (const auto& ds : in.discharged)
        for (const auto& h : ds) add(h);
    if (ai.bound) {
        if (ai.bound->kind == label_kind::world_var) outer.worlds.erase(ai.bound->name);
        else outer.nbhds.erase(ai.bound->name);
    }

    std::optional<std::pair<int, assignment>> found;
    for_each_assignment(m, outer, [&](const assignment& s) {
        for (int z = 0; z < m.size(); ++z) {
            ++checks;
            bool bad = false;
            switch (rd) {
            case reading::pointwise: {
                std::vector<const context*> cs{&in.concl.ctx};
                for (const auto& p : in.premises) cs.push_back(&p.ctx);
                if (!admissible_all(m, s, cs, z)) continue;
                bool prem = true;
                for (const auto& p : in.premises) prem = prem && res(m, s, p, z);
                bad = prem && !res(m, s, in.concl, z);
                break;
            }
            case reading::binder: {
                if (!admissible_all(m, s, {&in.concl.ctx}, z)) continue;
                bool all = true;
                variable_set only;
                if (ai.bound->kind == label_kind::world_var) only.worlds.insert(ai.bound->name);
                else only.nbhds.insert(ai.bound->name);
                for_each_assignment(m, only, [&](const assignment& x) {
                    assignment t = s;
                    t.worlds.insert(x.worlds.begin(), x.worlds.end());
                    t.nbhds.insert(x.nbhds.begin(), x.nbhds.end());
                    if (!admissible(m, t, in.premises[0].ctx, 0, z, 0, false)) return true;
                    if (!res(m, t, in.premises[0], z)) all = false;
                    return all;
                });
                bad = all && !res(m, s, in.concl, z);
                break;
            }
            case reading::eigen: {
                if (!admissible_all(m, s, {&in.concl.ctx, &in.premises[0].ctx}, z)) continue;
                if (!res(m, s, in.premises[0], z) || res(m, s, in.concl, z)) continue;
                // major holds, conclusion fails: refuted unless some admissible witness
                // makes the slot true while the conclusion stays false.
                const judgement& slot = in.discharged[1].empty() ? in.premises[1] : in.discharged[1][0];
                bool minor_ok = true; // forall X: slot(X) => gamma
                variable_set only;
                if (ai.bound->kind == label_kind::world_var) only.worlds.insert(ai.bound->name);
                else only.nbhds.insert(ai.bound->name);
                for_each_assignment(m, only, [&](const assignment& x) {
                    assignment t = s;
                    t.worlds.insert(x.worlds.begin(), x.worlds.end());
                    t.nbhds.insert(x.nbhds.begin(), x.nbhds.end());
                    if (!admissible(m, t, slot.ctx, 0, z, 0, false)) return true;
                    if (res(m, t, slot, z)) minor_ok = false; // gamma is false here
                    return minor_ok;
                });
                bad = minor_ok;
                break;
            }
            case reading::split: {
                std::vector<const context*> cs{&in.concl.ctx};
                for (const auto& p : in.premises) cs.push_back(&p.ctx);
                for (const auto& ds : in.discharged)
                    for (const auto& h : ds) cs.push_back(&h.ctx);
                if (!admissible_all(m, s, cs, z)) continue;
                const bool has_major = in.rule == rule_id::or_e;
                if (has_major && !res(m, s, in.premises[0], z)) continue;
                if (res(m, s, in.concl, z)) continue;
                bool some_case = false;
                for (const auto& ds : in.discharged)
                    for (const auto& h : ds) some_case = some_case || res(m, s, h, z);
                bad = !some_case;
                break;
            }
            case reading::local: {
                if (!admissible_all(m, s, {&in.concl.ctx}, z)) continue;
                const judgement& h = in.discharged[0][0];
                const judgement& c = in.premises[0];
                std::vector<point> pts;
                reach(m, s, h.ctx, 0, z, 0, false, pts);
                bool local = true;
                for (const auto& pt : pts) {
                    if (holds_full(m, s, h.f, pt.w, pt.n, pt.templ) && !holds_full(m, s, c.f, pt.w, pt.n, pt.templ)) {
                        local = false;
                        break;
                    }
                }
                bad = local && !res(m, s, in.concl, z);
                break;
            }
            case reading::global: {
                if (!admissible_all(m, s, {&in.concl.ctx}, z)) continue;
                bool everywhere = true;
                for (int w = 0; w < m.size() && everywhere; ++w) everywhere = holds_full(m, s, in.concl.f, w, 0, false);
                bad = everywhere && !res(m, s, in.concl, z);
                break;
            }
            case reading::axiom: {
                if (!admissible_all(m, s, {&in.concl.ctx}, z)) continue;
                bad = !res(m, s, in.concl, z);
                break;
            }
            }
            if (bad) {
                found = std::make_pair(z, s);
                return false;
            }
        }
        return true;
    });
    return found;
}

inline std::vector<rule_id> audited_rules(system_mode mode) {
    std::vector<rule_id> out;
    for (const auto& [r, tok] : rule_tokens)
        if (r != rule_id::hyp && rule_in_mode(r, mode)) out.push_back(r);
    return out;
}

inline rule_audit audit_one(rule_id r, bool canary, const std::vector<finite_model>& models,
                            const audit_options& opts) {
    rule_audit ra;
    ra.rule = canary ? rule_id::imp_e : r;
    ra.name = canary ? "CANARY" : std::string(rule_token(r));
    const auto insts = select_instances(r, canary, opts.max_instances);
    ra.instances = insts.size();
    const reading rd = canary ? reading::pointwise : reading_of(r);
    for (const auto& ai : insts) {
        for (const auto& m : models) {
            auto hit = refute(ai, m, rd, ra.checks);
            if (!hit) continue;
            ++ra.counterexamples;
            if (!ra.first) {
                finite_model shown = m;
                shown.actual = hit->first;
                ra.first = audit_counterexample{describe(ai.in), describe(hit->second, m), write_model(shown)};
            }
            break; // one counterexample per instance is enough
        }
    }
    return ra;
}

} // namespace detail

/// Semantic audit of every rule admitted by `mode`: each rule is instantiated from
/// small formula/context pools and every instance is checked on every model within
/// the bounds under the rule's reading.
inline audit_report audit_rules(system_mode mode, const model_bounds& bounds, const audit_options& opts = {}) {
    const auto models = enumerate_models(bounds);
    std::vector<std::pair<rule_id, bool>> jobs;
    for (rule_id r : detail::audited_rules(mode))
        if (opts.only.empty() || opts.only.count(r)) jobs.emplace_back(r, false);
    if (opts.canary) jobs.emplace_back(rule_id::imp_e, true);

    audit_report rep;
    rep.rules.resize(jobs.size());
    unsigned n = opts.workers ? opts.workers : std::max(1U, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(jobs.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();)
            rep.rules[i] = detail::audit_one(jobs[i].first, jobs[i].second, models, opts);
    };
    if (n <= 1) {
        work();
    } else {
        std::vector<std::thread> ts;
        for (unsigned i = 0; i < n; ++i) ts.emplace_back(work);
        for (auto& t : ts) t.join();
    }
    return rep;
}

} // namespace ipuc
