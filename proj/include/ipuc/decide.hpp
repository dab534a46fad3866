#pragma once

#include "semantics.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace ipuc {

struct model_bounds {
    int max_worlds = 3;
    int max_spheres = 2;
    std::vector<std::string> atoms{"p", "q"};
    bool require_uniform_spheres = true;
    bool classical_access = false; // access restricted to the identity relation
};

namespace detail {

inline world_set map_set(world_set s, const std::vector<int>& perm) {
    world_set r = 0;
    for (std::size_t w = 0; w < perm.size(); ++w)
        if (member(s, static_cast<int>(w))) r |= singleton(perm[w]);
    return r;
}

inline std::vector<std::uint64_t> encode(const finite_model& m, const std::vector<int>& perm) {
    const auto n = static_cast<std::size_t>(m.size());
    std::vector<world_set> acc(n);
    std::vector<std::vector<world_set>> sph(n);
    for (std::size_t u = 0; u < n; ++u) {
        const auto pu = static_cast<std::size_t>(perm[u]);
        acc[pu] = map_set(m.access[u], perm);
        for (world_set s : m.spheres[u]) sph[pu].push_back(map_set(s, perm));
    }
    std::vector<std::uint64_t> code;
    for (std::size_t u = 0; u < n; ++u) code.push_back(acc[u]);
    for (std::size_t u = 0; u < n; ++u) {
        code.push_back(sph[u].size());
        code.insert(code.end(), sph[u].begin(), sph[u].end());
    }
    for (const auto& [p, s] : m.val) code.push_back(map_set(s, perm));
    return code;
}

/// True iff no world permutation yields a lexicographically smaller encoding.
inline bool is_canonical(const finite_model& m) {
    std::vector<int> perm(static_cast<std::size_t>(m.size()));
    std::iota(perm.begin(), perm.end(), 0);
    const auto base = encode(m, perm);
    while (std::next_permutation(perm.begin(), perm.end()))
        if (encode(m, perm) < base) return false;
    return true;
}

inline std::vector<std::vector<world_set>> preorders(int n, bool classical) {
    std::vector<std::vector<world_set>> out;
    const int off = n * (n - 1);
    if (classical) {
        std::vector<world_set> id(static_cast<std::size_t>(n));
        for (int u = 0; u < n; ++u) id[static_cast<std::size_t>(u)] = singleton(u);
        out.push_back(id);
        return out;
    }
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << off); ++bits) {
        std::vector<world_set> acc(static_cast<std::size_t>(n));
        int k = 0;
        for (int u = 0; u < n; ++u) {
            acc[static_cast<std::size_t>(u)] = singleton(u);
            for (int v = 0; v < n; ++v) {
                if (u == v) continue;
                if ((bits >> k) & 1U) acc[static_cast<std::size_t>(u)] |= singleton(v);
                ++k;
            }
        }
        bool transitive = true;
        for (int u = 0; u < n && transitive; ++u)
            for (int v = 0; v < n && transitive; ++v)
                if (member(acc[static_cast<std::size_t>(u)], v) &&
                    !subset(acc[static_cast<std::size_t>(v)], acc[static_cast<std::size_t>(u)]))
                    transitive = false;
        if (transitive) out.push_back(std::move(acc));
    }
    return out;
}

// Strict chains of subsets of {0..n-1}, innermost first, of length at most max_len.
inline std::vector<std::vector<world_set>> chains(int n, int max_len) {
    std::vector<std::vector<world_set>> out;
    const world_set all = (world_set{1} << n) - 1;
    std::function<void(std::vector<world_set>&, int)> grow = [&](std::vector<world_set>& cur, int len) {
        if (static_cast<int>(cur.size()) == len) {
            out.push_back(cur);
            return;
        }
        for (world_set s = 0; s <= all; ++s) {
            if (!cur.empty() && !(subset(cur.back(), s) && cur.back() != s)) continue;
            cur.push_back(s);
            grow(cur, len);
            cur.pop_back();
        }
    };
    for (int len = 0; len <= max_len; ++len) {
        std::vector<world_set> cur;
        grow(cur, len);
    }
    return out;
}

inline std::vector<world_set> up_sets(const std::vector<world_set>& acc) {
    std::vector<world_set> out;
    const int n = static_cast<int>(acc.size());
    for (world_set s = 0; s < (world_set{1} << n); ++s) {
        bool ok = true;
        for (int u = 0; u < n && ok; ++u)
            if (member(s, u) && !subset(acc[static_cast<std::size_t>(u)], s)) ok = false;
        if (ok) out.push_back(s);
    }
    return out;
}

// Component index of each world under the symmetric closure of access.
inline std::vector<int> components(const std::vector<world_set>& acc) {
    const int n = static_cast<int>(acc.size());
    std::vector<int> comp(static_cast<std::size_t>(n));
    std::iota(comp.begin(), comp.end(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (member(acc[static_cast<std::size_t>(u)], v)) {
                    int m = std::min(comp[static_cast<std::size_t>(u)], comp[static_cast<std::size_t>(v)]);
                    if (comp[static_cast<std::size_t>(u)] != m || comp[static_cast<std::size_t>(v)] != m) {
                        comp[static_cast<std::size_t>(u)] = comp[static_cast<std::size_t>(v)] = m;
                        changed = true;
                    }
                }
    }
    return comp;
}

} // namespace detail

/// Visits every canonical valid model within the bounds in a fixed order. The
/// visitor returns false to stop early.
inline void for_each_model(const model_bounds& b, const std::function<bool(const finite_model&)>& visit) {
    auto atoms = b.atoms;
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    for (int n = 1; n <= b.max_worlds; ++n) {
        const auto all_chains = detail::chains(n, b.max_spheres);
        for (const auto& acc : detail::preorders(n, b.classical_access)) {
            finite_model m;
            for (int i = 0; i < n; ++i) m.worlds.push_back("w" + std::to_string(i));
            m.actual = 0;
            m.access = acc;
            m.spheres.assign(static_cast<std::size_t>(n), {});

            const auto comp = detail::components(acc);
            std::vector<int> roots;
            for (int u = 0; u < n; ++u)
                if (comp[static_cast<std::size_t>(u)] == u) roots.push_back(u);
            const std::size_t slots = b.require_uniform_spheres ? 1 : roots.size();
            const auto ups = detail::up_sets(acc);

            std::vector<std::size_t> choice(slots, 0);
            while (true) {
                for (int u = 0; u < n; ++u) {
                    std::size_t slot = 0;
                    if (!b.require_uniform_spheres)
                        slot = static_cast<std::size_t>(
                            std::find(roots.begin(), roots.end(), comp[static_cast<std::size_t>(u)]) - roots.begin());
                    m.spheres[static_cast<std::size_t>(u)] = all_chains[choice[slot]];
                }
                std::vector<std::size_t> vchoice(atoms.size(), 0);
                while (true) {
                    m.val.clear();
                    for (std::size_t a = 0; a < atoms.size(); ++a) m.val[atoms[a]] = ups[vchoice[a]];
                    if (detail::is_canonical(m) && !visit(m)) return;
                    std::size_t a = 0;
                    while (a < vchoice.size() && ++vchoice[a] == ups.size()) vchoice[a++] = 0;
                    if (a == vchoice.size()) break;
                }
                std::size_t s = 0;
                while (s < choice.size() && ++choice[s] == all_chains.size()) choice[s++] = 0;
                if (s == choice.size()) break;
            }
        }
    }
}

inline std::vector<finite_model> enumerate_models(const model_bounds& b) {
    std::vector<finite_model> out;
    for_each_model(b, [&](const finite_model& m) {
        out.push_back(m);
        return true;
    });
    return out;
}

struct counterexample {
    finite_model model; // actual world set to the refuting world
    int world = 0;
};

namespace detail {
inline void require_sentences(const std::vector<formula>& fs) {
    for (const auto& f : fs) {
        if (!is_sentence(f)) throw non_sentence(format(f) + " is not a sentence");
        if (characteristic_of(f) != characteristic::fn) throw non_sentence(format(f) + " is not an Fn formula");
    }
}
} // namespace detail

/// First model and world (in enumeration order) where every hypothesis holds, every
/// global premise holds at all worlds, and the goal fails.
inline std::optional<counterexample> countermodel(const std::vector<formula>& hyps, const formula& goal,
                                                  const model_bounds& b,
                                                  const std::vector<formula>& global_premises = {}) {
    detail::require_sentences(hyps);
    detail::require_sentences({goal});
    detail::require_sentences(global_premises);
    std::optional<counterexample> found;
    const assignment none;
    for_each_model(b, [&](const finite_model& m) {
        for (const auto& g : global_premises)
            for (int w = 0; w < m.size(); ++w)
                if (!detail::holds_full(m, none, g, w, 0, false)) return true;
        for (int z = 0; z < m.size(); ++z) {
            bool ok = true;
            for (const auto& h : hyps)
                if (!detail::holds_full(m, none, h, z, 0, false)) {
                    ok = false;
                    break;
                }
            if (ok && !detail::holds_full(m, none, goal, z, 0, false)) {
                found = counterexample{m, z};
                found->model.actual = z;
                return false;
            }
        }
        return true;
    });
    return found;
}

/// Bounded entailment: true iff no countermodel exists within the bounds.
inline bool oracle_entails(const std::vector<formula>& hyps, const formula& goal, const model_bounds& b = {},
                           const std::vector<formula>& global_premises = {}) {
    return !countermodel(hyps, goal, b, global_premises).has_value();
}

} // namespace ipuc
