#pragma once

// Seeded random generators shared by the unit and acceptance tests.

#include <ipuc/ipuc.hpp>

#include <map>
#include <random>
#include <string>
#include <vector>

namespace ipuc::gen {

struct formula_gen {
    explicit formula_gen(unsigned seed, bool sentences = false) : rng(seed), sentences_only(sentences) {}

    std::mt19937 rng;
    bool sentences_only;
    std::vector<std::string> atoms{"p", "q"};

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    formula fn(int depth) {
        if (depth <= 0) return pick(8) == 0 ? formula::bot_n() : formula::atom(atoms[static_cast<std::size_t>(pick(2))]);
        switch (pick(7)) {
        case 0: return formula::neg(fn(depth - 1));
        case 1: return formula::conj(fn(depth - 1), fn(depth - 1));
        case 2: return formula::disj(fn(depth - 1), fn(depth - 1));
        case 3: return formula::imp(fn(depth - 1), fn(depth - 1));
        case 4:
        case 5: return fw(depth - 1).with_label(nbhd_label(depth - 1));
        default: return fn(0);
        }
    }

    formula fw(int depth) {
        if (depth <= 0 || pick(6) == 0) {
            if (!sentences_only && pick(4) == 0) return pick(2) ? formula::leq("N") : formula::geq("N");
            if (pick(6) == 0) return formula::bot_w();
            return fn(depth > 0 ? depth - 1 : 0).with_label(world_label());
        }
        switch (pick(5)) {
        case 0: return formula::neg(fw(depth - 1));
        case 1: return formula::conj(fw(depth - 1), fw(depth - 1));
        case 2: return formula::disj(fw(depth - 1), fw(depth - 1));
        case 3: return formula::imp(fw(depth - 1), fw(depth - 1));
        default: return fn(depth - 1).with_label(world_label());
        }
    }

    label world_label() {
        switch (pick(sentences_only ? 2 : 3)) {
        case 0: return label::all_worlds();
        case 1: return label::some_world();
        default: return label::world_var("U");
        }
    }

    label nbhd_label(int depth) {
        switch (pick(sentences_only ? 4 : 5)) {
        case 0: return label::all_nbhd();
        case 1: return label::some_nbhd();
        case 2: return label::testimonial(fn(std::min(depth, 1)));
        case 3: return label::believer(fn(std::min(depth, 1)));
        default: return label::nbhd_var("N");
        }
    }

    // Alternating context of the given length starting with a neighbourhood label.
    context ctx(std::size_t n, bool existential_free) {
        context c;
        for (std::size_t i = 0; i < n; ++i) {
            label l = i % 2 == 0 ? nbhd_label(0) : world_label();
            while (existential_free && is_existential(l.kind)) l = i % 2 == 0 ? nbhd_label(0) : world_label();
            c.labels.push_back(l);
        }
        return c;
    }
};

/// Random checked ipuc derivations, built goal-first with deliberate detours so that
/// the normalizer has work to do.
struct derivation_gen {
    explicit derivation_gen(unsigned seed) : fg(seed, true), rng(seed * 7919U + 1U) {}

    formula_gen fg;
    std::mt19937 rng;
    std::size_t max_nodes = 40;

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    derivation make() {
        ids_.clear();
        delta_ = pick(2) ? context{} : parse_context("n(N),w(U)");
        formula goal = small();
        budget_ = static_cast<int>(max_nodes);
        derivation d = prove(goal, 4);
        return d;
    }

private:
    std::map<std::string, std::string> ids_;
    context delta_;
    int budget_ = 0;

    formula small() {
        formula f = fg.fn(1);
        while (!variables_of(f).empty()) f = fg.fn(1);
        return f;
    }

    judgement J(const formula& f) const { return judgement{f, delta_}; }

    derivation leaf(const formula& f) {
        --budget_;
        const std::string key = format(J(f));
        auto it = ids_.find(key);
        if (it == ids_.end()) it = ids_.emplace(key, "h" + std::to_string(ids_.size() + 1)).first;
        return hyp(it->second, f, delta_);
    }

    std::vector<std::string> discharge_if_open(const derivation& body, const formula& f) {
        auto it = ids_.find(format(J(f)));
        if (it == ids_.end()) return {};
        auto open = ipuc::detail::free_ids(body);
        if (open.count(it->second)) return {it->second};
        return {};
    }

    derivation prove(const formula& f, int depth) {
        if (depth <= 0 || budget_ <= 3) return leaf(f);
        --budget_;
        switch (pick(9)) {
        case 0: // AndE detour
        {
            const formula g = small();
            const bool left = pick(2);
            const formula c = left ? formula::conj(f, g) : formula::conj(g, f);
            derivation a = prove(left ? f : g, depth - 1), b = prove(left ? g : f, depth - 1);
            derivation i = infer(rule_id::and_i, c, delta_, {a, b});
            return infer(left ? rule_id::and_e_l : rule_id::and_e_r, f, delta_, {i});
        }
        case 1: // ImpE detour
        {
            const formula g = small();
            derivation body = prove(f, depth - 1);
            auto ds = discharge_if_open(body, g);
            derivation lam = infer(rule_id::imp_i, formula::imp(g, f), delta_, {body}, ds);
            return infer(rule_id::imp_e, f, delta_, {lam, prove(g, depth - 1)});
        }
        case 2: // OrE detour
        {
            const formula g = small(), h = small();
            derivation in = infer(rule_id::or_i_l, formula::disj(g, h), delta_, {prove(g, depth - 1)});
            return or_e(formula::disj(g, h), in, f, depth);
        }
        case 3: // permutation: AndE over OrE
        {
            const formula g = small(), k = small();
            const formula c = formula::conj(f, k);
            derivation maj = leaf(formula::disj(g, small()));
            derivation o = or_e(maj.concl.f, maj, c, depth);
            return infer(rule_id::and_e_l, f, delta_, {o});
        }
        case 4: // permutation: ImpE over OrE
        {
            const formula g = small();
            const formula im = formula::imp(g, f);
            derivation maj = leaf(formula::disj(small(), small()));
            derivation o = or_e(maj.concl.f, maj, im, depth);
            return infer(rule_id::imp_e, f, delta_, {o, prove(g, depth - 1)});
        }
        default: break;
        }
        switch (f.kind()) {
        case op::conj:
            return infer(rule_id::and_i, f, delta_, {prove(f.lhs(), depth - 1), prove(f.rhs(), depth - 1)});
        case op::disj:
            if (pick(2)) return infer(rule_id::or_i_l, f, delta_, {prove(f.lhs(), depth - 1)});
            return infer(rule_id::or_i_r, f, delta_, {prove(f.rhs(), depth - 1)});
        case op::imp: {
            derivation body = prove(f.rhs(), depth - 1);
            return infer(rule_id::imp_i, f, delta_, {body}, discharge_if_open(body, f.lhs()));
        }
        default: ++budget_; return leaf(f);
        }
    }

    derivation or_e(const formula& d, derivation major, const formula& goal, int depth) {
        derivation c1 = prove(goal, depth - 1), c2 = prove(goal, depth - 1);
        // an id may only be closed here if it is open in no other premise
        const auto o1 = ipuc::detail::free_ids(c1), o2 = ipuc::detail::free_ids(c2);
        const auto om = ipuc::detail::free_ids(major);
        std::vector<std::string> ds;
        for (const auto& x : discharge_if_open(c1, d.lhs()))
            if (!o2.count(x) && !om.count(x)) ds.push_back(x);
        for (const auto& x : discharge_if_open(c2, d.rhs()))
            if (!o1.count(x) && !om.count(x) && std::find(ds.begin(), ds.end(), x) == ds.end()) ds.push_back(x);
        return infer(rule_id::or_e, goal, delta_, {std::move(major), std::move(c1), std::move(c2)}, ds);
    }
};

/// Straightforward satisfaction by unfolding the definitions, used as an independent
/// check of the evaluator on sentences.
inline bool naive_holds(const finite_model& m, const formula& f, int w, std::optional<world_set> n) {
    if (!f.index().empty()) {
        const label l = f.index().back();
        const formula g = f.without_last();
        const auto& sph = m.spheres[static_cast<std::size_t>(w)];
        switch (l.kind) {
        case label_kind::all_worlds:
        case label_kind::some_world: {
            const bool all = l.kind == label_kind::all_worlds;
            for (int v = 0; v < m.size(); ++v)
                if (member(*n, v) && naive_holds(m, g, v, std::nullopt) != all) return !all;
            return all;
        }
        case label_kind::all_nbhd:
        case label_kind::some_nbhd: {
            const bool all = l.kind == label_kind::all_nbhd;
            for (world_set x : sph)
                if (naive_holds(m, g, w, x) != all) return !all;
            return all;
        }
        case label_kind::testimonial:
        case label_kind::believer:
            for (int lam = 0; lam < m.size(); ++lam) {
                if (!member(m.access[static_cast<std::size_t>(w)], lam)) continue;
                for (world_set x : m.spheres[static_cast<std::size_t>(lam)]) {
                    const formula probe =
                        l.payload->with_label(l.kind == label_kind::testimonial ? label::some_world() : label::all_worlds());
                    if (naive_holds(m, probe, lam, x) && !naive_holds(m, g, lam, x)) return false;
                }
            }
            return true;
        default: throw error("naive_holds: variables are not supported");
        }
    }
    switch (f.kind()) {
    case op::atom: return member(m.atom(f.name()), w);
    case op::bot_n:
    case op::bot_w: return false;
    case op::conj: return naive_holds(m, f.lhs(), w, n) && naive_holds(m, f.rhs(), w, n);
    case op::disj: return naive_holds(m, f.lhs(), w, n) || naive_holds(m, f.rhs(), w, n);
    case op::neg: return naive_holds(m, formula::imp(f.lhs(), n ? formula::bot_w() : formula::bot_n()), w, n);
    case op::imp:
        for (int v = 0; v < m.size(); ++v)
            if (member(m.access[static_cast<std::size_t>(w)], v) && naive_holds(m, f.lhs(), v, n) &&
                !naive_holds(m, f.rhs(), v, n))
                return false;
        return true;
    default: throw error("naive_holds: variables are not supported");
    }
}

} // namespace ipuc::gen
