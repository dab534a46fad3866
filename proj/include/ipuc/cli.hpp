#pragma once

#include "audit.hpp"
#include "decide.hpp"
#include "derivation_io.hpp"
#include "lewis.hpp"
#include "model_io.hpp"
#include "normalize.hpp"
#include "parser.hpp"
#include "semantics.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace ipuc::cli {

enum exit_code : int { ok = 0, negative = 1, usage = 2 };

namespace detail {

struct usage_error : error {
    using error::error;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string> split_top(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(' || c == '{' || c == '[') ++depth;
        if (c == ')' || c == '}' || c == ']') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// w(U)=w1,n(N)=0 ; a neighbourhood is a sphere index at `world` or an explicit {w0,w1}
inline assignment parse_assign(const std::string& text, const finite_model& m, int world) {
    assignment s;
    for (const auto& item : split_top(text)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw usage_error("bad --assign item " + item);
        const label v = ipuc::detail::parser(item.substr(0, eq)).parse_label();
        const std::string val = item.substr(eq + 1);
        if (v.kind == label_kind::world_var) {
            const int w = m.world_index(val);
            if (w < 0) throw usage_error("unknown world " + val);
            s.worlds[v.name] = w;
        } else if (v.kind == label_kind::nbhd_var) {
            world_set n = 0;
            if (!val.empty() && val.front() == '{') {
                for (const auto& w : split_top(val.substr(1, val.size() - 2))) {
                    const int i = m.world_index(w);
                    if (i < 0) throw usage_error("unknown world " + w);
                    n |= singleton(i);
                }
            } else {
                std::size_t idx = 0;
                try {
                    idx = std::stoul(val);
                } catch (const std::exception&) {
                    throw usage_error("bad neighbourhood " + val);
                }
                const auto& sph = m.spheres[static_cast<std::size_t>(world)];
                if (idx >= sph.size()) throw usage_error("sphere index " + val + " out of range");
                n = sph[idx];
            }
            s.nbhds[v.name] = n;
        } else {
            throw usage_error("--assign expects w(NAME) or n(NAME)");
        }
    }
    return s;
}

struct bounds_flags {
    int max_worlds = 3;
    int max_spheres = 2;
    std::string atoms;
    bool nonuniform = false;
    bool classical = false;

    void add(CLI::App& c) {
        c.add_option("--max-worlds", max_worlds, "largest model size")->check(CLI::Range(1, 6));
        c.add_option("--max-spheres", max_spheres, "longest sphere chain")->check(CLI::Range(0, 6));
        c.add_option("--atoms", atoms, "comma separated atoms (default: atoms of the input)");
        c.add_flag("--nonuniform", nonuniform, "allow different sphere systems per connected component");
        c.add_flag("--classical", classical, "identity accessibility only");
    }

    model_bounds get(const std::set<std::string>& input_atoms) const {
        model_bounds b;
        b.max_worlds = max_worlds;
        b.max_spheres = max_spheres;
        b.require_uniform_spheres = !nonuniform;
        b.classical_access = classical;
        if (!atoms.empty()) {
            b.atoms.clear();
            for (const auto& a : split_top(atoms)) b.atoms.push_back(a);
        } else {
            b.atoms.assign(input_atoms.begin(), input_atoms.end());
        }
        return b;
    }
};

inline system_mode mode_of(const std::string& s) {
    auto m = parse_mode(s);
    if (!m) throw usage_error("unknown mode " + s);
    return *m;
}

inline void print_check(const check_report& r, std::ostream& out) {
    if (r.ok()) {
        out << "VALID\n";
        for (const auto& h : r.open)
            out << "open " << h.id << ": " << format(h.j) << (h.is_premise ? " (premise)" : "") << "\n";
    } else {
        out << "INVALID " << r.errors.front().path << ": " << r.errors.front().message << "\n";
    }
}

inline void print_audit(const audit_report& r, std::ostream& out) {
    out << std::left << std::setw(12) << "rule" << std::right << std::setw(10) << "instances" << std::setw(12)
        << "checks" << std::setw(16) << "counterexamples" << "\n";
    for (const auto& x : r.rules)
        out << std::left << std::setw(12) << x.name << std::right << std::setw(10) << x.instances << std::setw(12)
            << x.checks << std::setw(16) << x.counterexamples << "\n";
    for (const auto& x : r.rules) {
        if (!x.first) continue;
        out << "\n" << x.name << " refuted by " << x.first->instance << "\n  assignment: " << x.first->assignment
            << "\n" << x.first->model;
    }
}

} // namespace detail

/// Runs one invocation; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Labelled deduction kernel for intuitionistic counterfactual logic", "ipuc"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string mode_text = "ipucv";
    app.add_option("--mode", mode_text, "ipuc | ipucv | ipucv31 | puc")
        ->check(CLI::IsMember({"ipuc", "ipucv", "ipucv31", "puc"}));

    std::string text, ctx_text, model_path, world_name, assign_text, output;
    std::optional<std::size_t> nbhd;
    std::vector<std::string> hyps, premises;
    std::string goal;
    detail::bounds_flags bf;
    audit_options aopts;

    auto* c_parse = app.add_subcommand("parse", "print the canonical form of a formula");
    c_parse->add_option("formula", text)->required();
    c_parse->add_option("--context", ctx_text, "also check that the formula fits this context");

    auto model_opts = [&](CLI::App* c) {
        c->add_option("--model", model_path, "model file")->required();
        c->add_option("--world", world_name, "evaluation world (default: actual)");
        c->add_option("--assign", assign_text, "w(U)=w1,n(N)=0");
    };
    auto* c_eval = app.add_subcommand("eval", "evaluate a formula at a point");
    c_eval->add_option("formula", text)->required();
    model_opts(c_eval);
    c_eval->add_option("--nbhd", nbhd, "sphere index: evaluate at a template");

    auto* c_resolve = app.add_subcommand("resolve", "evaluate a formula under a context");
    c_resolve->add_option("formula", text)->required();
    c_resolve->add_option("--context", ctx_text, "context, outermost label first");
    model_opts(c_resolve);

    auto* c_check = app.add_subcommand("check", "check a derivation file");
    c_check->add_option("file", text)->required();

    auto* c_norm = app.add_subcommand("normalize", "normalize a derivation file");
    c_norm->add_option("file", text)->required();
    c_norm->add_option("-o,--output", output, "write the normal form here instead of stdout");

    auto* c_cm = app.add_subcommand("countermodel", "bounded countermodel search");
    c_cm->add_option("--hyp", hyps, "local hypothesis (repeatable)");
    c_cm->add_option("--premise", premises, "global premise, true at every world (repeatable)");
    c_cm->add_option("--goal", goal, "goal formula")->required();
    bf.add(*c_cm);

    auto* c_tr = app.add_subcommand("translate", "translate a counterfactual formula into the core grammar");
    c_tr->add_option("formula", text)->required();

    auto* c_audit = app.add_subcommand("audit", "semantic audit of the rules of a system");
    bf.add(*c_audit);
    c_audit->add_option("--max-instances", aopts.max_instances, "instances per rule");
    c_audit->add_option("--workers", aopts.workers, "worker threads (0: one per core)");
    c_audit->add_flag("--canary", aopts.canary, "also audit a deliberately unsound rule");
    std::vector<std::string> only;
    c_audit->add_option("--rule", only, "audit only this rule token (repeatable)");

    std::vector<std::string> argv{args.rbegin(), args.rend()};
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "usage: " << e.what() << "\n";
        return usage;
    }

    try {
        const system_mode mode = detail::mode_of(mode_text);
        if (c_parse->parsed()) {
            const formula f = parse(text);
            if (c_parse->count("--context")) {
                const context c = parse_context(ctx_text);
                out << format(judgement{f, c}) << "\n";
                return fits(f, c) ? ok : negative;
            }
            out << format(f) << "\n";
            return ok;
        }
        if (c_eval->parsed() || c_resolve->parsed()) {
            const finite_model m = read_model(detail::slurp(model_path));
            const int w = world_name.empty() ? m.actual : m.world_index(world_name);
            if (w < 0) throw detail::usage_error("unknown world " + world_name);
            const assignment s = detail::parse_assign(assign_text, m, w);
            const formula f = parse(text);
            bool v;
            if (c_eval->parsed()) {
                std::optional<world_set> sel;
                if (nbhd) {
                    const auto& sph = m.spheres[static_cast<std::size_t>(w)];
                    if (*nbhd >= sph.size()) throw detail::usage_error("sphere index out of range");
                    sel = sph[*nbhd];
                }
                v = eval(m, eval_point{w, sel}, s, f);
            } else {
                v = resolve_at(m, w, s, parse_context(ctx_text), f);
            }
            out << (v ? "TRUE" : "FALSE") << "\n";
            return v ? ok : negative;
        }
        if (c_check->parsed() || c_norm->parsed()) {
            const derivation d = read_derivation(detail::slurp(text));
            const check_report r = check(d, mode);
            if (c_check->parsed() || !r.ok()) {
                detail::print_check(r, c_check->parsed() ? out : err);
                return r.ok() ? ok : negative;
            }
            const std::string nf = write_derivation(normalize(d));
            if (output.empty()) {
                out << nf;
            } else {
                std::ofstream f(output, std::ios::binary);
                if (!(f << nf)) throw detail::usage_error("cannot write " + output);
            }
            return ok;
        }
        if (c_cm->parsed()) {
            std::vector<formula> hs, ps;
            std::set<std::string> atoms;
            for (const auto& h : hyps) hs.push_back(parse(h));
            for (const auto& p : premises) ps.push_back(parse(p));
            const formula g = parse(goal);
            for (const auto& f : hs) collect_atoms(f, atoms);
            for (const auto& f : ps) collect_atoms(f, atoms);
            collect_atoms(g, atoms);
            const auto cm = countermodel(hs, g, bf.get(atoms), ps);
            if (!cm) {
                out << "NO-COUNTERMODEL-WITHIN-BOUNDS\n";
                return ok;
            }
            out << "COUNTERMODEL at " << cm->model.worlds[static_cast<std::size_t>(cm->world)] << "\n"
                << write_model(cm->model);
            return negative;
        }
        if (c_tr->parsed()) {
            out << format(encode(parse_v(text))) << "\n";
            return ok;
        }
        if (c_audit->parsed()) {
            for (const auto& t : only) {
                auto r = rule_from_token(t);
                if (!r) throw detail::usage_error("unknown rule " + t);
                aopts.only.insert(*r);
            }
            const auto b = bf.get(bf.atoms.empty() ? std::set<std::string>{"p", "q"} : std::set<std::string>{});
            const audit_report r = audit_rules(mode, b, aopts);
            detail::print_audit(r, out);
            for (const auto& x : r.rules)
                if (x.name != "CANARY" && x.counterexamples) return negative;
            return ok;
        }
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const YAML::Exception& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    }
    return usage;
}

} // namespace ipuc::cli
