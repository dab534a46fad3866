#pragma once

#include "syntax.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ipuc {

/// Bitset over world indices; models are limited to 64 worlds.
using world_set = std::uint64_t;

[[nodiscard]] constexpr bool member(world_set s, int w) noexcept { return (s >> w) & 1U; }
[[nodiscard]] constexpr bool subset(world_set a, world_set b) noexcept { return (a & ~b) == 0; }
[[nodiscard]] constexpr world_set singleton(int w) noexcept { return world_set{1} << w; }

struct finite_model {
    std::vector<std::string> worlds;
    int actual = 0;
    std::vector<world_set> access;               // access[u] = A(u)
    std::vector<std::vector<world_set>> spheres; // innermost first
    std::map<std::string, world_set> val;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(worlds.size()); }
    [[nodiscard]] world_set all() const noexcept {
        return worlds.size() >= 64 ? ~world_set{0} : (world_set{1} << worlds.size()) - 1;
    }
    [[nodiscard]] world_set atom(const std::string& p) const {
        auto it = val.find(p);
        return it == val.end() ? 0 : it->second;
    }
    [[nodiscard]] int world_index(const std::string& name) const {
        for (int i = 0; i < size(); ++i)
            if (worlds[static_cast<std::size_t>(i)] == name) return i;
        return -1;
    }

    friend bool operator==(const finite_model&, const finite_model&) = default;
};

struct eval_point {
    int world = 0;
    std::optional<world_set> selected; // absent: model point, present: template
};

struct assignment {
    std::map<std::string, int> worlds;
    std::map<std::string, world_set> nbhds;
};

struct violation {
    std::string kind;    // reflexivity, transitivity, sphere preservation, atom heredity, nesting, range, actual
    std::string witness;
};

[[nodiscard]] inline std::string format_set(const finite_model& m, world_set s) {
    std::string out = "{";
    bool first = true;
    for (int w = 0; w < m.size(); ++w) {
        if (!member(s, w)) continue;
        if (!first) out += ',';
        out += m.worlds[static_cast<std::size_t>(w)];
        first = false;
    }
    return out + "}";
}

inline std::vector<violation> validate_model(const finite_model& m) {
    std::vector<violation> out;
    const int n = m.size();
    auto name = [&](int w) { return m.worlds[static_cast<std::size_t>(w)]; };
    if (n == 0 || n > 64) {
        out.push_back({"range", "world count " + std::to_string(n)});
        return out;
    }
    if (m.actual < 0 || m.actual >= n) out.push_back({"actual", std::to_string(m.actual)});
    if (m.access.size() != static_cast<std::size_t>(n) || m.spheres.size() != static_cast<std::size_t>(n)) {
        out.push_back({"range", "access or sphere table size"});
        return out;
    }
    const world_set all = m.all();
    for (int u = 0; u < n; ++u) {
        const world_set a = m.access[static_cast<std::size_t>(u)];
        if (!subset(a, all)) out.push_back({"range", "access row of " + name(u)});
        if (!member(a, u)) out.push_back({"reflexivity", "(" + name(u) + "," + name(u) + ")"});
        for (int v = 0; v < n; ++v) {
            if (!member(a, v)) continue;
            for (int w = 0; w < n; ++w)
                if (member(m.access[static_cast<std::size_t>(v)], w) && !member(a, w))
                    out.push_back({"transitivity", "(" + name(u) + "," + name(v) + "," + name(w) + ")"});
            if (u != v && m.spheres[static_cast<std::size_t>(u)] != m.spheres[static_cast<std::size_t>(v)])
                out.push_back({"sphere preservation", "(" + name(u) + "," + name(v) + ")"});
            for (const auto& [p, s] : m.val)
                if (member(s, u) && !member(s, v))
                    out.push_back({"atom heredity", "(" + p + "," + name(u) + "," + name(v) + ")"});
        }
        const auto& sph = m.spheres[static_cast<std::size_t>(u)];
        for (std::size_t i = 0; i < sph.size(); ++i) {
            if (!subset(sph[i], all)) out.push_back({"range", "neighbourhood of " + name(u)});
            if (i + 1 < sph.size() && !subset(sph[i], sph[i + 1]))
                out.push_back({"nesting", "(" + format_set(m, sph[i]) + "," + format_set(m, sph[i + 1]) + ")"});
        }
    }
    for (const auto& [p, s] : m.val)
        if (!subset(s, all)) out.push_back({"range", "valuation of " + p});
    return out;
}

namespace detail {

inline bool contains_nbhd(const std::vector<world_set>& sph, world_set n) {
    for (world_set s : sph)
        if (s == n) return true;
    return false;
}

inline world_set lookup_nbhd(const assignment& s, const std::string& v) {
    auto it = s.nbhds.find(v);
    if (it == s.nbhds.end()) throw unbound_variable("neighbourhood variable " + v + " is unbound");
    return it->second;
}

inline int lookup_world(const assignment& s, const std::string& v) {
    auto it = s.worlds.find(v);
    if (it == s.worlds.end()) throw unbound_variable("world variable " + v + " is unbound");
    return it->second;
}

/// Satisfaction of f restricted to its first k index labels. `n` is the selected
/// neighbourhood and is meaningful only when `templ` holds.
inline bool holds(const finite_model& m, const assignment& s, const formula& f, std::size_t k, int w, world_set n,
                  bool templ);

inline bool holds_full(const finite_model& m, const assignment& s, const formula& f, int w, world_set n, bool templ) {
    return holds(m, s, f, f.index().size(), w, n, templ);
}

// Template <*, N> satisfies a^{+}.
inline bool some_in(const finite_model& m, const assignment& s, const formula& a, world_set n) {
    for (int v = 0; v < m.size(); ++v)
        if (member(n, v) && holds_full(m, s, a, v, 0, false)) return true;
    return false;
}

// Template <*, N> satisfies a^{*}.
inline bool all_in(const finite_model& m, const assignment& s, const formula& a, world_set n) {
    for (int v = 0; v < m.size(); ++v)
        if (member(n, v) && !holds_full(m, s, a, v, 0, false)) return false;
    return true;
}

inline bool holds(const finite_model& m, const assignment& s, const formula& f, std::size_t k, int w, world_set n,
                  bool templ) {
    const auto& sph = m.spheres[static_cast<std::size_t>(w)];
    if (k > 0) {
        const label& l = f.index()[k - 1];
        switch (l.kind) {
        case label_kind::all_nbhd:
            for (world_set x : sph)
                if (!holds(m, s, f, k - 1, w, x, true)) return false;
            return true;
        case label_kind::some_nbhd:
            for (world_set x : sph)
                if (holds(m, s, f, k - 1, w, x, true)) return true;
            return false;
        case label_kind::nbhd_var: {
            world_set x = lookup_nbhd(s, l.name);
            return contains_nbhd(sph, x) && holds(m, s, f, k - 1, w, x, true);
        }
        case label_kind::testimonial:
        case label_kind::believer: {
            const bool t = l.kind == label_kind::testimonial;
            const world_set acc = m.access[static_cast<std::size_t>(w)];
            for (int lam = 0; lam < m.size(); ++lam) {
                if (!member(acc, lam)) continue;
                for (world_set x : m.spheres[static_cast<std::size_t>(lam)]) {
                    bool in = t ? some_in(m, s, *l.payload, x) : all_in(m, s, *l.payload, x);
                    if (in && !holds(m, s, f, k - 1, lam, x, true)) return false;
                }
            }
            return true;
        }
        case label_kind::all_worlds:
            for (int v = 0; v < m.size(); ++v)
                if (member(n, v) && !holds(m, s, f, k - 1, v, 0, false)) return false;
            return true;
        case label_kind::some_world:
            for (int v = 0; v < m.size(); ++v)
                if (member(n, v) && holds(m, s, f, k - 1, v, 0, false)) return true;
            return false;
        case label_kind::world_var: {
            int v = lookup_world(s, l.name);
            return v >= 0 && v < m.size() && member(n, v) && holds(m, s, f, k - 1, v, 0, false);
        }
        }
        return false;
    }
    switch (f.kind()) {
    case op::atom: return member(m.atom(f.name()), w);
    case op::bot_n:
    case op::bot_w: return false;
    case op::nbhd_leq: return subset(lookup_nbhd(s, f.name()), n);
    case op::nbhd_geq: return subset(n, lookup_nbhd(s, f.name()));
    case op::conj: return holds_full(m, s, f.lhs(), w, n, templ) && holds_full(m, s, f.rhs(), w, n, templ);
    case op::disj: return holds_full(m, s, f.lhs(), w, n, templ) || holds_full(m, s, f.rhs(), w, n, templ);
    case op::neg:
    case op::imp: {
        const world_set acc = m.access[static_cast<std::size_t>(w)];
        for (int lam = 0; lam < m.size(); ++lam) {
            if (!member(acc, lam)) continue;
            if (f.kind() == op::neg) {
                if (holds_full(m, s, f.lhs(), lam, n, templ)) return false;
            } else if (holds_full(m, s, f.lhs(), lam, n, templ) && !holds_full(m, s, f.rhs(), lam, n, templ)) {
                return false;
            }
        }
        return true;
    }
    }
    return false;
}

inline void check_bound(const formula& f, const assignment& s) {
    auto vars = variables_of(f);
    for (const auto& v : vars.worlds)
        if (!s.worlds.count(v)) throw unbound_variable("world variable " + v + " is unbound");
    for (const auto& v : vars.nbhds)
        if (!s.nbhds.count(v)) throw unbound_variable("neighbourhood variable " + v + " is unbound");
}

} // namespace detail

/// Satisfaction at a model point (Fn formulas) or a template (Fw formulas).
inline bool eval(const finite_model& m, const eval_point& pt, const assignment& s, const formula& f) {
    const characteristic c = characteristic_of(f);
    if ((c == characteristic::fn) != !pt.selected.has_value())
        throw characteristic_mismatch(c == characteristic::fn ? "Fn formula evaluated at a template"
                                                              : "Fw formula evaluated at a model point");
    if (pt.world < 0 || pt.world >= m.size()) throw error("evaluation world out of range");
    if (pt.selected && !detail::contains_nbhd(m.spheres[static_cast<std::size_t>(pt.world)], *pt.selected))
        throw error("selected neighbourhood is not a sphere of the evaluation world");
    detail::check_bound(f, s);
    return detail::holds_full(m, s, f, pt.world, pt.selected.value_or(0), pt.selected.has_value());
}

inline bool eval(const finite_model& m, const eval_point& pt, const formula& f) { return eval(m, pt, {}, f); }

inline bool resolve_at(const finite_model& m, int world, const assignment& s, const context& ctx, const formula& f) {
    return eval(m, eval_point{world, std::nullopt}, s, flatten(f, ctx));
}

/// Satisfaction of f under ctx at the model's distinguished world.
inline bool resolve(const finite_model& m, const assignment& s, const context& ctx, const formula& f) {
    return resolve_at(m, m.actual, s, ctx, f);
}

namespace detail {
inline std::vector<world_set> sphere_filter(const finite_model& m, int chi, const assignment& s, const formula& a,
                                            bool testimonial) {
    if (characteristic_of(a) != characteristic::fn)
        throw characteristic_mismatch("testimonial/believer argument must be Fn");
    if (chi < 0 || chi >= m.size()) throw error("world out of range");
    check_bound(a, s);
    std::vector<world_set> out;
    for (world_set n : m.spheres[static_cast<std::size_t>(chi)])
        if (testimonial ? some_in(m, s, a, n) : all_in(m, s, a, n)) out.push_back(n);
    return out;
}
} // namespace detail

/// Spheres of chi containing some a-world.
inline std::vector<world_set> testimonials(const finite_model& m, int chi, const assignment& s, const formula& a) {
    return detail::sphere_filter(m, chi, s, a, true);
}

/// Spheres of chi containing only a-worlds.
inline std::vector<world_set> believers(const finite_model& m, int chi, const assignment& s, const formula& a) {
    return detail::sphere_filter(m, chi, s, a, false);
}

} // namespace ipuc
