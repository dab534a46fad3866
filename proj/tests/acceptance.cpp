// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero if any fails.

#include "support/generators.hpp"

#include <ipuc/ipuc.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace ipuc;

namespace {

struct outcome {
    bool pass = true;
    std::string note;

    void fail(const std::string& why) {
        if (pass) note = why;
        pass = false;
    }
};

struct proc_result {
    int status = -1;
    std::string out;
};

proc_result run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + IPUC_CLI + "\" " + args + " 2>/dev/null";
    proc_result r;
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(f);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

// (a^l -> b^l)^@
formula comp(const formula& a, const formula& b, const label& l) {
    return formula::imp(a.with_label(l), b.with_label(l)).with_label(label::all_nbhd());
}

std::string fixture(const std::string& name) { return std::string(IPUC_FIXTURES) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string declared_mode(const std::string& text) {
    const std::string tag = "% mode: ";
    auto at = text.find(tag);
    if (at == std::string::npos) return "ipucv";
    auto end = text.find('\n', at);
    return text.substr(at + tag.size(), end - at - tag.size());
}

std::set<std::string> open_set(const derivation& d) {
    std::set<std::string> out;
    for (const auto& h : open_hypotheses(d)) out.insert(h.id + " " + format(h.j) + (h.is_premise ? " P" : ""));
    return out;
}

// All assignments of the named variables over worlds / distinct neighbourhoods of m.
void for_assignments(const finite_model& m, const variable_set& vars, const std::function<void(const assignment&)>& f) {
    std::vector<world_set> nb;
    for (const auto& sph : m.spheres)
        for (auto x : sph)
            if (std::find(nb.begin(), nb.end(), x) == nb.end()) nb.push_back(x);
    std::vector<std::string> wv(vars.worlds.begin(), vars.worlds.end()), nv(vars.nbhds.begin(), vars.nbhds.end());
    if (!nv.empty() && nb.empty()) return;
    std::vector<std::size_t> idx(wv.size() + nv.size(), 0);
    for (;;) {
        assignment s;
        for (std::size_t i = 0; i < wv.size(); ++i) s.worlds[wv[i]] = static_cast<int>(idx[i]);
        for (std::size_t i = 0; i < nv.size(); ++i) s.nbhds[nv[i]] = nb[idx[wv.size() + i]];
        f(s);
        std::size_t k = 0;
        for (; k < idx.size(); ++k) {
            const std::size_t lim = k < wv.size() ? static_cast<std::size_t>(m.size()) : nb.size();
            if (++idx[k] < lim) break;
            idx[k] = 0;
        }
        if (k == idx.size()) return;
    }
}

// 1. rule audit
outcome soundness_audit() {
    outcome o;
    audit_options opts;
    opts.canary = true;
    const auto rep = audit_rules(system_mode::ipucv31, model_bounds{}, opts);
    std::size_t rules = 0;
    for (const auto& r : rep.rules) {
        if (r.name == "CANARY") {
            if (r.counterexamples == 0) o.fail("canary not detected");
            continue;
        }
        ++rules;
        if (r.instances == 0) o.fail(r.name + " has no instances");
        if (r.counterexamples) o.fail(r.name + " refuted: " + r.first->instance);
    }
    if (o.pass) o.note = std::to_string(rules) + " rules, 0 counterexamples; canary caught";
    return o;
}

// 2. heredity of Fn sentences along access
outcome heredity(const std::vector<finite_model>& models) {
    outcome o;
    gen::formula_gen g(2024, true);
    std::vector<formula> fs;
    while (fs.size() < 200) fs.push_back(g.fn(3));
    std::size_t checks = 0;
    const assignment none;
    for (const auto& m : models)
        for (const auto& f : fs)
            for (int u = 0; u < m.size(); ++u) {
                if (!detail::holds_full(m, none, f, u, 0, false)) continue;
                for (int v = 0; v < m.size(); ++v) {
                    if (!member(m.access[static_cast<std::size_t>(u)], v)) continue;
                    ++checks;
                    if (!detail::holds_full(m, none, f, v, 0, false))
                        o.fail(format(f) + " lost from " + m.worlds[u] + " to " + m.worlds[v]);
                }
            }
    if (o.pass) o.note = std::to_string(models.size()) + " models, 200 sentences, " + std::to_string(checks) + " checks";
    return o;
}

// 3. (a -> b) under a context implies (a under it) -> (b under it)
outcome distribution(const std::vector<finite_model>& models) {
    outcome o;
    gen::formula_gen g(77);
    struct item {
        formula lhs, rhs;
        variable_set vars;
    };
    std::vector<item> items;
    while (items.size() < 200) {
        const context c = g.ctx(static_cast<std::size_t>(g.pick(4)), true);
        const bool fw = c.size() % 2 == 1;
        const formula a = fw ? g.fw(1) : g.fn(1), b = fw ? g.fw(1) : g.fn(1);
        const formula im = formula::imp(a, b);
        if (!fits(im, c)) continue;
        item it{flatten(im, c), formula::imp(flatten(a, c), flatten(b, c)), {}};
        it.vars = variables_of(it.lhs);
        it.vars.merge(variables_of(it.rhs));
        items.push_back(std::move(it));
    }
    std::size_t checks = 0;
    for (const auto& m : models)
        for (const auto& it : items)
            for_assignments(m, it.vars, [&](const assignment& s) {
                for (int z = 0; z < m.size(); ++z) {
                    ++checks;
                    if (detail::holds_full(m, s, it.lhs, z, 0, false) && !detail::holds_full(m, s, it.rhs, z, 0, false))
                        o.fail(format(it.lhs) + " at " + m.worlds[z]);
                }
            });
    if (o.pass) o.note = "200 implications, " + std::to_string(checks) + " checks";
    return o;
}

// 4. hereditary sets are chains; the rule-31 disjunction and its * variant are valid
outcome hereditary_sets(const std::vector<finite_model>& models) {
    outcome o;
    std::vector<formula> args;
    for (const char* s : {"p", "q", "~p", "p | q", "p & q", "p -> q", "~~p", "botN", "q^{+,@}"}) args.push_back(parse(s));
    std::vector<formula> valid;
    for (const auto& a : args)
        for (const auto& b : args) {
            valid.push_back(formula::disj(comp(a, b, label::some_world()), comp(b, a, label::some_world())));
            valid.push_back(formula::disj(comp(a, b, label::all_worlds()), comp(b, a, label::all_worlds())));
        }
    const assignment none;
    auto chain = [](const std::vector<world_set>& xs) {
        for (auto x : xs)
            for (auto y : xs)
                if (!subset(x, y) && !subset(y, x)) return false;
        return true;
    };
    for (const auto& m : models)
        for (int chi = 0; chi < m.size(); ++chi) {
            const auto& sph = m.spheres[static_cast<std::size_t>(chi)];
            for (const auto& a : args) {
                const auto t = testimonials(m, chi, none, a), b = believers(m, chi, none, a);
                auto has = [](const std::vector<world_set>& v, world_set x) {
                    return std::find(v.begin(), v.end(), x) != v.end();
                };
                for (auto x : sph)
                    for (auto y : sph) {
                        if (!subset(x, y)) continue;
                        if (has(t, x) && !has(t, y)) o.fail("testimonials not up-closed");
                        if (has(b, y) && !has(b, x)) o.fail("believers not down-closed");
                    }
                if (!chain(t) || !chain(b)) o.fail("hereditary sets not comparable");
            }
            for (const auto& f : valid)
                if (!detail::holds_full(m, none, f, chi, 0, false)) o.fail(format(f) + " fails");
        }
    if (o.pass) o.note = "testimonials up-closed, believers down-closed, all chains; " + std::to_string(valid.size()) +
                         " connexity instances valid";
    return o;
}

// 5. golden fixtures
outcome golden() {
    outcome o;
    const formula p = formula::atom("p"), q = formula::atom("q");
    struct golden_case {
        const char* file;
        std::function<derivation()> build;
        std::set<std::string> open;
    };
    const std::vector<golden_case> cases{
        {"cpr.drv", [&] { return build_cpr(p, q); }, {"P p -> q @ [] P"}},
        {"connex_31.drv", [&] { return build_connex_via31(p, q); }, {}},
        {"connex_t.drv", [&] { return build_connex(p, q); }, {}},
        {"lewis_axiom.drv", [&] { return build_lewis_axiom(p, q); }, {}},
        {"lewis_axiom_figure.drv", [&] { return build_lewis_axiom_figure(p, q); }, {}},
    };
    for (const auto& s : cases) {
        const std::string text = slurp(fixture(s.file));
        const derivation d = read_derivation(text);
        if (text.substr(text.find('\n') + 1) != write_derivation(s.build()))
            o.fail(std::string(s.file) + " differs from its builder");
        const auto r = check(d, *parse_mode(declared_mode(text)));
        if (!r.ok()) {
            o.fail(std::string(s.file) + ": " + r.errors.front().message);
            continue;
        }
        if (open_set(d) != s.open) o.fail(std::string(s.file) + ": unexpected open hypotheses");
        std::vector<formula> local, global;
        for (const auto& h : r.open) (h.is_premise ? global : local).push_back(flatten(h.j.f, h.j.ctx));
        if (!oracle_entails(local, flatten(d.concl.f, d.concl.ctx), model_bounds{}, global))
            o.fail(std::string(s.file) + ": conclusion refuted by the oracle");
    }
    if (o.pass) o.note = std::to_string(cases.size()) + " fixtures checked and oracle-valid";
    return o;
}

// 6. anti-classicality
outcome anti_classical() {
    outcome o;
    for (const char* g : {"~~p -> p", "p | ~p", "((p -> q) -> p) -> p"}) {
        const auto r = run_cli(std::string("countermodel --max-worlds 3 --goal \"") + g + "\"");
        if (r.status != 1) {
            o.fail(std::string(g) + ": exit " + std::to_string(r.status));
            continue;
        }
        const auto nl = r.out.find('\n');
        const finite_model m = read_model(r.out.substr(nl + 1));
        if (!validate_model(m).empty()) o.fail(std::string(g) + ": emitted model is invalid");
        if (detail::holds_full(m, {}, parse(g), m.actual, 0, false)) o.fail(std::string(g) + ": not refuted");
    }
    audit_options opts;
    opts.only = {rule_id::class_abs};
    model_bounds b;
    const auto intu = audit_rules(system_mode::puc, b, opts);
    b.classical_access = true;
    const auto cls = audit_rules(system_mode::puc, b, opts);
    if (intu.counterexamples() == 0) o.fail("ClassAbs survives intuitionistic models");
    if (cls.counterexamples() != 0) o.fail("ClassAbs refuted with classical access");
    if (o.pass)
        o.note = "3 goals refuted; ClassAbs: " + std::to_string(intu.counterexamples()) +
                 " counterexamples intuitionistically, 0 classically";
    return o;
}

// 7. normalization
outcome normalization() {
    outcome o;
    std::size_t shrunk = 0;
    auto run = [&](const std::string& name, const derivation& d, system_mode mode) {
        derivation n;
        try {
            n = normalize(d);
        } catch (const error& e) {
            o.fail(name + ": " + e.what());
            return;
        }
        if (!find_redexes(n).empty()) o.fail(name + ": not normal");
        if (!check(n, mode).ok()) o.fail(name + ": normal form does not check");
        if (!(n.concl == d.concl)) o.fail(name + ": conclusion changed");
        const auto before = open_set(d), after = open_set(n);
        if (!std::includes(before.begin(), before.end(), after.begin(), after.end()))
            o.fail(name + ": new open hypotheses");
        if (after != before) ++shrunk;
    };
    for (const char* f : {"cpr.drv", "connex_31.drv", "connex_t.drv", "lewis_axiom.drv", "lewis_axiom_figure.drv",
                          "t_reduction.drv", "t_detour3.drv", "b_detour2.drv"}) {
        const std::string text = slurp(fixture(f));
        const derivation d = read_derivation(text);
        const std::size_t before = open_set(d).size();
        run(f, d, *parse_mode(declared_mode(text)));
        if (open_set(normalize(d)).size() != before) o.fail(std::string(f) + ": open hypotheses changed");
    }
    std::size_t generated = 0;
    for (unsigned seed = 1; generated < 100; ++seed) {
        gen::derivation_gen g(seed);
        const derivation d = g.make();
        if (node_count(d) > 40) continue;
        ++generated;
        if (!check(d, system_mode::ipuc).ok()) {
            o.fail("generator produced an invalid derivation");
            continue;
        }
        run("generated #" + std::to_string(seed), d, system_mode::ipuc);
    }
    // the reduction figure, node for node
    const derivation fig = read_derivation(slurp(fixture("t_reduction.drv")));
    const auto rs = find_redexes(fig);
    if (rs.size() != 1 || rs[0].kind != redex_kind::t_33_34) {
        o.fail("reduction figure: expected one T redex");
    } else {
        const derivation red = reduce_step(fig, rs[0]);
        const derivation& ti_premise = fig.premises[0].premises[0].premises[0];
        if (!(red.premises.size() == 1 && red.premises[0] == ti_premise && red.concl == fig.concl))
            o.fail("reduction figure: contractum differs");
    }
    normalize_stats st;
    (void)normalize(read_derivation(slurp(fixture("t_detour3.drv"))), 100000, &st);
    if (st.steps != 3 || st.by_kind[redex_kind::t_33_34] != 3) o.fail("depth-3 detour did not take 3 steps");
    if (o.pass)
        o.note = "8 fixtures + 100 generated; " + std::to_string(shrunk) + " dropped unused hypotheses";
    return o;
}

// 8. round trip and determinism
outcome round_trip() {
    outcome o;
    gen::formula_gen g(99);
    for (int i = 0; i < 1000; ++i) {
        const formula f = i % 2 ? g.fn(3) : g.fw(3);
        const std::string s = format(f);
        try {
            if (!(parse(s) == f)) o.fail("round trip changed " + s);
            if (format(parse(s)) != s) o.fail("format not canonical for " + s);
        } catch (const error& e) {
            o.fail(s + ": " + e.what());
        }
    }
    const std::vector<std::string> calls{
        "check \"" + fixture("lewis_axiom.drv") + "\"",
        "normalize \"" + fixture("lewis_axiom.drv") + "\"",
        "countermodel --goal \"((p -> q) -> p) -> p\"",
        "translate \"(p []-> q) | (q <>-> p)\"",
        "resolve \"p\" --context \"n(N),w(U)\" --model \"" + fixture("spheres3.model") + "\" --assign \"n(N)=1,w(U)=w1\"",
        "audit --max-worlds 2 --canary",
    };
    for (const auto& c : calls) {
        const auto a = run_cli(c), b = run_cli(c);
        if (a.status < 0 || a.status != b.status || a.out != b.out) o.fail("nondeterministic: " + c);
    }
    if (o.pass) o.note = "1000 formulas, " + std::to_string(calls.size()) + " CLI calls repeated";
    return o;
}

} // namespace

int main() {
    const auto models = enumerate_models(model_bounds{});
    const std::vector<std::pair<const char*, std::function<outcome()>>> criteria{
        {"rule soundness audit", soundness_audit},
        {"heredity", [&] { return heredity(models); }},
        {"distribution", [&] { return distribution(models); }},
        {"hereditary sets", [&] { return hereditary_sets(models); }},
        {"golden fixtures", golden},
        {"anti-classicality", anti_classical},
        {"normalization", normalization},
        {"round trip and determinism", round_trip},
    };
    int failed = 0, n = 0;
    for (const auto& [name, fn] : criteria) {
        outcome r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << ++n << " " << name << ": " << r.note << std::endl;
        failed += r.pass ? 0 : 1;
    }
    return failed ? 1 : 0;
}
