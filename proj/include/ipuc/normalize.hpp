#pragma once

#include "deduction.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ipuc {

enum class redex_kind { intro_elim, t_33_34, b_37_38, permutation };

struct redex {
    redex_kind kind = redex_kind::intro_elim;
    // intro_elim: connective (& -> | + # * @ shift); permutation: "ELIM/CASE" rule tokens
    std::string detail;
    std::vector<std::size_t> path; // premise indices from the root

    friend bool operator==(const redex&, const redex&) = default;
};

[[nodiscard]] inline std::string format_path(const std::vector<std::size_t>& path) {
    std::string out = "root";
    for (auto i : path) out += "." + std::to_string(i);
    return out;
}

[[nodiscard]] inline std::string format(const redex& r) {
    std::string k;
    switch (r.kind) {
    case redex_kind::intro_elim: k = "IntroElim(" + r.detail + ")"; break;
    case redex_kind::t_33_34: k = "T_33_34"; break;
    case redex_kind::b_37_38: k = "B_37_38"; break;
    case redex_kind::permutation: k = "Permutation(" + r.detail + ")"; break;
    }
    return k + " at " + format_path(r.path);
}

namespace detail {

inline bool is_case_rule(rule_id r) {
    switch (r) {
    case rule_id::or_e:
    case rule_id::some_w_e:
    case rule_id::some_n_e:
    case rule_id::rule31:
    case rule_id::t_split:
    case rule_id::b_split: return true;
    default: return false;
    }
}

// Eliminations whose major premise is premise 0.
inline bool is_elimination(rule_id r) {
    switch (r) {
    case rule_id::and_e_l:
    case rule_id::and_e_r:
    case rule_id::imp_e:
    case rule_id::or_e:
    case rule_id::some_w_e:
    case rule_id::some_n_e:
    case rule_id::all_w_e:
    case rule_id::all_n_e:
    case rule_id::t_e:
    case rule_id::b_e: return true;
    default: return false;
    }
}

// Premises of a case rule that carry the conclusion.
inline std::vector<std::size_t> case_branches(rule_id r) {
    switch (r) {
    case rule_id::or_e: return {1, 2};
    case rule_id::some_w_e:
    case rule_id::some_n_e: return {1};
    default: return {0, 1};
    }
}

inline std::optional<redex> match_redex(const derivation& n) {
    if (n.premises.empty()) return std::nullopt;
    const rule_id e = n.rule, i = n.premises[0].rule;
    auto ie = [](const char* c) { return redex{redex_kind::intro_elim, c, {}}; };
    switch (e) {
    case rule_id::and_e_l:
    case rule_id::and_e_r:
        if (i == rule_id::and_i) return ie("&");
        break;
    case rule_id::imp_e:
        if (i == rule_id::imp_i) return ie("->");
        break;
    case rule_id::or_e:
        if (i == rule_id::or_i_l || i == rule_id::or_i_r) return ie("|");
        break;
    case rule_id::some_w_e:
        if (i == rule_id::some_w_i) return ie("+");
        break;
    case rule_id::some_n_e:
        if (i == rule_id::some_n_i) return ie("#");
        break;
    case rule_id::all_w_e:
        if (i == rule_id::all_w_i) return ie("*");
        break;
    case rule_id::all_n_e:
        if (i == rule_id::all_n_i) return ie("@");
        break;
    case rule_id::l2c:
        if (i == rule_id::c2l) return ie("shift");
        break;
    case rule_id::c2l:
        if (i == rule_id::l2c) return ie("shift");
        break;
    case rule_id::t_e:
        if (i == rule_id::t_i) return redex{redex_kind::t_33_34, "", {}};
        break;
    case rule_id::b_e:
        if (i == rule_id::b_i) return redex{redex_kind::b_37_38, "", {}};
        break;
    default: break;
    }
    if (is_elimination(e) && is_case_rule(i))
        return redex{redex_kind::permutation, std::string(rule_token(e)) + "/" + std::string(rule_token(i)), {}};
    return std::nullopt;
}

inline void find_redexes(const derivation& d, std::vector<std::size_t>& path, std::vector<redex>& out) {
    if (auto r = match_redex(d)) {
        r->path = path;
        out.push_back(*r);
    }
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        path.push_back(i);
        find_redexes(d.premises[i], path, out);
        path.pop_back();
    }
}

// ---------------------------------------------------------------------------
// Names

inline void collect_names(const derivation& d, std::set<std::string>& ids, variable_set& vars) {
    if (d.rule == rule_id::hyp || d.rule == rule_id::premise) ids.insert(d.id);
    ids.insert(d.discharges.begin(), d.discharges.end());
    collect_variables(d.concl.f, vars);
    vars.merge(variables_of(d.concl.ctx));
    if (d.binds) collect_variables(*d.binds, vars);
    for (const auto& p : d.premises) collect_names(p, ids, vars);
}

inline variable_set variables_in(const derivation& d) {
    std::set<std::string> ids;
    variable_set v;
    collect_names(d, ids, v);
    return v;
}

// Hypothesis ids open in d (premises included).
inline std::set<std::string> free_ids(const derivation& d) {
    if (d.rule == rule_id::hyp || d.rule == rule_id::premise) return {d.id};
    std::set<std::string> out;
    for (const auto& p : d.premises) {
        auto f = free_ids(p);
        out.insert(f.begin(), f.end());
    }
    for (const auto& x : d.discharges) out.erase(x);
    return out;
}

class namer {
public:
    explicit namer(const derivation& root) { collect_names(root, ids_, vars_); }

    void reserve(const derivation& d) { collect_names(d, ids_, vars_); }

    std::string fresh_id() {
        std::string n;
        do n = "r" + std::to_string(++ic_);
        while (ids_.count(n));
        ids_.insert(n);
        return n;
    }

    std::string fresh_var(label_kind k) {
        auto& used = k == label_kind::world_var ? vars_.worlds : vars_.nbhds;
        const std::string base = k == label_kind::world_var ? "V" : "K";
        std::string n;
        do n = base + std::to_string(++vc_);
        while (used.count(n));
        used.insert(n);
        return n;
    }

private:
    std::set<std::string> ids_;
    variable_set vars_;
    int ic_ = 0, vc_ = 0;
};

inline void rename_hyp_id(derivation& d, const std::string& from, const std::string& to) {
    if (d.rule == rule_id::hyp && d.id == from) d.id = to;
    for (auto& x : d.discharges)
        if (x == from) x = to;
    for (auto& p : d.premises) rename_hyp_id(p, from, to);
}

// Renames variable `from` to `to` in every judgement of d. Hypotheses whose judgement
// changes get fresh ids so that ids stay consistent with the rest of the tree.
inline void rename_var_in(derivation& d, label_kind k, const std::string& from, const std::string& to, namer& nm,
                          std::map<std::string, std::string>& ids) {
    const judgement before = d.concl;
    d.concl.f = rename_variable(d.concl.f, k, from, to);
    d.concl.ctx = rename_variable(d.concl.ctx, k, from, to);
    if (d.binds) d.binds = rename_variable(*d.binds, k, from, to);
    if (d.rule == rule_id::hyp && !(before == d.concl)) {
        auto it = ids.find(d.id);
        if (it == ids.end()) it = ids.emplace(d.id, nm.fresh_id()).first;
        d.id = it->second;
    }
    for (auto& p : d.premises) rename_var_in(p, k, from, to, nm, ids);
    for (auto& x : d.discharges) {
        auto it = ids.find(x);
        if (it != ids.end()) x = it->second;
    }
}

inline void rename_var(derivation& d, label_kind k, const std::string& from, const std::string& to, namer& nm) {
    std::map<std::string, std::string> ids;
    rename_var_in(d, k, from, to, nm, ids);
}

// Alpha-renames every binder (discharged id or bound variable) inside d that would
// capture one of `ids` / `vars`.
inline void freshen(derivation& d, const std::set<std::string>& ids, const variable_set& vars, namer& nm) {
    for (auto x : std::vector<std::string>(d.discharges)) {
        if (!ids.count(x)) continue;
        const std::string y = nm.fresh_id();
        for (auto& p : d.premises) rename_hyp_id(p, x, y);
        for (auto& z : d.discharges)
            if (z == x) z = y;
    }
    if (d.binds && vars.contains(*d.binds)) {
        const label_kind k = d.binds->kind;
        const std::string from = d.binds->name, to = nm.fresh_var(k);
        for (auto& p : d.premises) rename_var(p, k, from, to, nm);
        d.binds->name = to;
    }
    for (auto& p : d.premises) freshen(p, ids, vars, nm);
}

// Replaces open hypotheses with an id in `ids` and judgement `j` by `r`.
inline void subst_hyp(derivation& d, std::set<std::string> ids, const judgement& j, const derivation& r) {
    if (d.rule == rule_id::hyp) {
        if (ids.count(d.id) && d.concl == j) d = r;
        return;
    }
    for (const auto& x : d.discharges) ids.erase(x);
    if (ids.empty()) return;
    for (auto& p : d.premises) subst_hyp(p, ids, j, r);
}

inline void plug(derivation& target, const std::set<std::string>& ids, const judgement& j, const derivation& r,
                 namer& nm) {
    freshen(target, free_ids(r), variables_in(r), nm);
    subst_hyp(target, ids, j, r);
}

inline derivation contract(const derivation& n, const redex& rx, namer& nm) {
    const derivation& m = n.premises[0];
    if (rx.kind == redex_kind::t_33_34 || rx.kind == redex_kind::b_37_38) return m.premises[0];
    if (rx.kind == redex_kind::intro_elim) {
        const std::string& c = rx.detail;
        if (c == "&") return m.premises[n.rule == rule_id::and_e_l ? 0 : 1];
        if (c == "shift") return m.premises[0];
        if (c == "->") {
            derivation body = m.premises[0];
            const judgement slot{m.concl.f.lhs(), m.concl.ctx};
            plug(body, {m.discharges.begin(), m.discharges.end()}, slot, n.premises[1], nm);
            return body;
        }
        if (c == "|") {
            const bool left = m.rule == rule_id::or_i_l;
            derivation branch = n.premises[left ? 1 : 2];
            const judgement slot{left ? m.concl.f.lhs() : m.concl.f.rhs(), m.concl.ctx};
            plug(branch, {n.discharges.begin(), n.discharges.end()}, slot, m.premises[0], nm);
            return branch;
        }
        if (c == "+" || c == "#") {
            // witness label u/N from the introduction, eigenvariable from the elimination
            const label& witness = m.premises[0].concl.ctx.back();
            derivation minor = n.premises[1];
            const judgement slot{m.concl.f, m.concl.ctx.without_last().with(*n.binds)};
            plug(minor, {n.discharges.begin(), n.discharges.end()}, slot, m.premises[0], nm);
            variable_set v;
            collect_variables(witness, v);
            freshen(minor, {}, v, nm);
            rename_var(minor, n.binds->kind, n.binds->name, witness.name, nm);
            return minor;
        }
        if (c == "*" || c == "@") {
            const label& target = n.concl.ctx.back();
            derivation p = m.premises[0];
            variable_set v;
            collect_variables(target, v);
            freshen(p, {}, v, nm);
            rename_var(p, m.binds->kind, m.binds->name, target.name, nm);
            return p;
        }
        throw stale_redex("unknown detour " + c);
    }
    // permutation: push the elimination n into the branches of the case rule m
    derivation c = m;
    std::set<std::string> rest_ids;
    variable_set rest_vars;
    for (std::size_t i = 1; i < n.premises.size(); ++i) {
        auto f = free_ids(n.premises[i]);
        rest_ids.insert(f.begin(), f.end());
        rest_vars.merge(variables_in(n.premises[i]));
    }
    collect_variables(n.concl.f, rest_vars);
    rest_vars.merge(variables_of(n.concl.ctx));
    if (n.binds) collect_variables(*n.binds, rest_vars);
    for (auto x : std::vector<std::string>(c.discharges)) {
        if (!rest_ids.count(x)) continue;
        const std::string y = nm.fresh_id();
        for (auto& p : c.premises) rename_hyp_id(p, x, y);
        for (auto& z : c.discharges)
            if (z == x) z = y;
    }
    if (c.binds && rest_vars.contains(*c.binds)) {
        const label_kind k = c.binds->kind;
        const std::string from = c.binds->name, to = nm.fresh_var(k);
        for (auto& p : c.premises) rename_var(p, k, from, to, nm);
        c.binds->name = to;
    }
    for (auto b : case_branches(c.rule)) {
        derivation e = n;
        e.id.clear();
        e.premises[0] = c.premises[b];
        c.premises[b] = std::move(e);
    }
    c.concl = n.concl;
    c.id.clear();
    return c;
}

// Drops discharge entries that no longer close anything (a contraction may delete the
// only occurrence of a hypothesis).
inline void prune_discharges(derivation& d) {
    for (auto& p : d.premises) prune_discharges(p);
    if (d.discharges.empty()) return;
    std::set<std::string> open;
    for (const auto& p : d.premises) {
        auto f = free_ids(p);
        open.insert(f.begin(), f.end());
    }
    std::erase_if(d.discharges, [&](const std::string& x) { return !open.count(x); });
}

inline const derivation* node_at(const derivation& d, const std::vector<std::size_t>& path) {
    const derivation* cur = &d;
    for (auto i : path) {
        if (i >= cur->premises.size()) return nullptr;
        cur = &cur->premises[i];
    }
    return cur;
}

inline derivation* node_at(derivation& d, const std::vector<std::size_t>& path) {
    return const_cast<derivation*>(node_at(static_cast<const derivation&>(d), path));
}

} // namespace detail

/// All redexes of d, outermost first with leftmost tie-break (pre-order).
[[nodiscard]] inline std::vector<redex> find_redexes(const derivation& d) {
    std::vector<redex> out;
    std::vector<std::size_t> path;
    detail::find_redexes(d, path, out);
    return out;
}

/// Contracts one redex; throws stale_redex if `r` does not match at its path.
[[nodiscard]] inline derivation reduce_step(const derivation& d, const redex& r) {
    const derivation* n = detail::node_at(d, r.path);
    if (!n) throw stale_redex("no node at " + format_path(r.path));
    auto m = detail::match_redex(*n);
    if (!m || m->kind != r.kind || m->detail != r.detail) throw stale_redex("no such redex at " + format_path(r.path));
    detail::namer nm(d);
    derivation out = d;
    *detail::node_at(out, r.path) = detail::contract(*n, *m, nm);
    detail::prune_discharges(out);
    return out;
}

struct normalize_stats {
    std::size_t steps = 0;
    std::map<redex_kind, std::size_t> by_kind;
};

/// Reduces the first redex (outermost, leftmost) until none is left.
[[nodiscard]] inline derivation normalize(const derivation& d, std::size_t budget = 100000,
                                          normalize_stats* stats = nullptr) {
    derivation cur = d;
    normalize_stats st;
    for (;;) {
        const auto rs = find_redexes(cur);
        if (rs.empty()) break;
        if (st.steps == budget)
            throw step_budget_exceeded("normalization exceeded " + std::to_string(budget) + " steps");
        cur = reduce_step(cur, rs.front());
        ++st.steps;
        ++st.by_kind[rs.front().kind];
    }
    if (stats) *stats = st;
    return cur;
}

} // namespace ipuc
