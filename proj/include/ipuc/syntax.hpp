#pragma once

#include "error.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ipuc {

enum class characteristic : std::uint8_t { fn, fw };

enum class op : std::uint8_t { atom, bot_n, bot_w, nbhd_leq, nbhd_geq, neg, conj, disj, imp };

enum class label_kind : std::uint8_t {
    all_worlds,  // *
    some_world,  // +
    world_var,   // w(U)
    all_nbhd,    // @
    some_nbhd,   // #
    nbhd_var,    // n(N)
    testimonial, // T(a)
    believer     // B(a)
};

[[nodiscard]] constexpr bool is_world_kind(label_kind k) noexcept {
    return k == label_kind::all_worlds || k == label_kind::some_world || k == label_kind::world_var;
}

[[nodiscard]] constexpr bool is_universal(label_kind k) noexcept {
    return k == label_kind::all_worlds || k == label_kind::all_nbhd || k == label_kind::testimonial ||
           k == label_kind::believer;
}

[[nodiscard]] constexpr bool is_existential(label_kind k) noexcept {
    return k == label_kind::some_world || k == label_kind::some_nbhd;
}

[[nodiscard]] constexpr bool is_variable(label_kind k) noexcept {
    return k == label_kind::world_var || k == label_kind::nbhd_var;
}

namespace detail {
struct node;
}

struct label;

/// Immutable labeled formula: a body (connective tree) plus an index of labels.
/// The index is read left to right; evaluation peels the rightmost label first.
class formula {
public:
    formula();

    static formula atom(std::string name);
    static formula bot_n();
    static formula bot_w();
    static formula leq(std::string nbhd_var);
    static formula geq(std::string nbhd_var);
    static formula neg(formula f);
    static formula conj(formula a, formula b);
    static formula disj(formula a, formula b);
    static formula imp(formula a, formula b);

    [[nodiscard]] op kind() const;
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] formula lhs() const;
    [[nodiscard]] formula rhs() const;
    [[nodiscard]] const std::vector<label>& index() const;

    [[nodiscard]] formula with_label(label l) const;
    [[nodiscard]] formula with_labels(const std::vector<label>& ls) const;
    [[nodiscard]] formula with_index(std::vector<label> idx) const;
    [[nodiscard]] formula without_last() const;
    [[nodiscard]] formula body() const { return with_index({}); }

    friend bool operator==(const formula& a, const formula& b);
    friend std::strong_ordering operator<=>(const formula& a, const formula& b);

private:
    explicit formula(std::shared_ptr<const detail::node> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::node> node_;
};

struct label {
    label_kind kind = label_kind::all_nbhd;
    std::string name;                 // variables only
    std::optional<formula> payload;   // testimonial / believer only

    static label all_worlds() { return {label_kind::all_worlds, {}, std::nullopt}; }
    static label some_world() { return {label_kind::some_world, {}, std::nullopt}; }
    static label world_var(std::string n) { return {label_kind::world_var, std::move(n), std::nullopt}; }
    static label all_nbhd() { return {label_kind::all_nbhd, {}, std::nullopt}; }
    static label some_nbhd() { return {label_kind::some_nbhd, {}, std::nullopt}; }
    static label nbhd_var(std::string n) { return {label_kind::nbhd_var, std::move(n), std::nullopt}; }
    static label testimonial(formula f) { return {label_kind::testimonial, {}, std::move(f)}; }
    static label believer(formula f) { return {label_kind::believer, {}, std::move(f)}; }

    [[nodiscard]] bool world_kind() const noexcept { return is_world_kind(kind); }

    friend bool operator==(const label&, const label&) = default;
    friend std::strong_ordering operator<=>(const label& a, const label& b) {
        if (auto c = a.kind <=> b.kind; c != 0) return c;
        if (auto c = a.name <=> b.name; c != 0) return c;
        if (a.payload.has_value() != b.payload.has_value()) return a.payload.has_value() <=> b.payload.has_value();
        if (a.payload) return *a.payload <=> *b.payload;
        return std::strong_ordering::equal;
    }
};

namespace detail {
struct node {
    op kind = op::atom;
    std::string name;
    std::shared_ptr<const node> lhs;
    std::shared_ptr<const node> rhs;
    std::vector<label> index;
};

inline const std::shared_ptr<const node>& bot_n_node() {
    static const auto n = std::make_shared<const node>(node{op::bot_n, {}, {}, {}, {}});
    return n;
}
} // namespace detail

inline formula::formula() : node_(detail::bot_n_node()) {}

inline formula formula::atom(std::string name) {
    return formula(std::make_shared<const detail::node>(detail::node{op::atom, std::move(name), {}, {}, {}}));
}
inline formula formula::bot_n() { return formula(detail::bot_n_node()); }
inline formula formula::bot_w() {
    static const auto n = std::make_shared<const detail::node>(detail::node{op::bot_w, {}, {}, {}, {}});
    return formula(n);
}
inline formula formula::leq(std::string v) {
    return formula(std::make_shared<const detail::node>(detail::node{op::nbhd_leq, std::move(v), {}, {}, {}}));
}
inline formula formula::geq(std::string v) {
    return formula(std::make_shared<const detail::node>(detail::node{op::nbhd_geq, std::move(v), {}, {}, {}}));
}
inline formula formula::neg(formula f) {
    return formula(std::make_shared<const detail::node>(detail::node{op::neg, {}, std::move(f.node_), {}, {}}));
}
inline formula formula::conj(formula a, formula b) {
    return formula(std::make_shared<const detail::node>(detail::node{op::conj, {}, std::move(a.node_), std::move(b.node_), {}}));
}
inline formula formula::disj(formula a, formula b) {
    return formula(std::make_shared<const detail::node>(detail::node{op::disj, {}, std::move(a.node_), std::move(b.node_), {}}));
}
inline formula formula::imp(formula a, formula b) {
    return formula(std::make_shared<const detail::node>(detail::node{op::imp, {}, std::move(a.node_), std::move(b.node_), {}}));
}

inline op formula::kind() const { return node_->kind; }
inline const std::string& formula::name() const { return node_->name; }
inline formula formula::lhs() const { return formula(node_->lhs); }
inline formula formula::rhs() const { return formula(node_->rhs); }
inline const std::vector<label>& formula::index() const { return node_->index; }

inline formula formula::with_index(std::vector<label> idx) const {
    auto n = std::make_shared<detail::node>(*node_);
    n->index = std::move(idx);
    return formula(std::move(n));
}
inline formula formula::with_label(label l) const {
    auto idx = index();
    idx.push_back(std::move(l));
    return with_index(std::move(idx));
}
inline formula formula::with_labels(const std::vector<label>& ls) const {
    auto idx = index();
    idx.insert(idx.end(), ls.begin(), ls.end());
    return with_index(std::move(idx));
}
inline formula formula::without_last() const {
    auto idx = index();
    if (!idx.empty()) idx.pop_back();
    return with_index(std::move(idx));
}

inline std::strong_ordering operator<=>(const formula& a, const formula& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (auto c = x.kind <=> y.kind; c != 0) return c;
    if (auto c = x.name <=> y.name; c != 0) return c;
    const bool unary = x.kind == op::neg;
    const bool binary = x.kind == op::conj || x.kind == op::disj || x.kind == op::imp;
    if (unary || binary) {
        if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
    }
    if (binary) {
        if (auto c = a.rhs() <=> b.rhs(); c != 0) return c;
    }
    return std::lexicographical_compare_three_way(x.index.begin(), x.index.end(), y.index.begin(), y.index.end());
}

inline bool operator==(const formula& a, const formula& b) { return (a <=> b) == 0; }

/// The label sequence under which a formula is asserted. Grows at the right.
struct context {
    std::vector<label> labels;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] bool empty() const noexcept { return labels.empty(); }
    [[nodiscard]] const label& back() const { return labels.back(); }

    [[nodiscard]] context with(label l) const {
        context c = *this;
        c.labels.push_back(std::move(l));
        return c;
    }
    [[nodiscard]] context without_last() const {
        context c = *this;
        if (!c.labels.empty()) c.labels.pop_back();
        return c;
    }

    friend bool operator==(const context&, const context&) = default;
    friend std::strong_ordering operator<=>(const context& a, const context& b) {
        return std::lexicographical_compare_three_way(a.labels.begin(), a.labels.end(), b.labels.begin(),
                                                      b.labels.end());
    }
};

// ---------------------------------------------------------------------------
// Characteristic and well-formedness

namespace detail {

inline std::optional<characteristic> characteristic_of(const formula& f, std::string* why);

inline std::optional<characteristic> apply_labels(characteristic base, const std::vector<label>& idx,
                                                  std::string* why) {
    characteristic c = base;
    for (const auto& l : idx) {
        if (l.kind == label_kind::testimonial || l.kind == label_kind::believer) {
            if (!l.payload) {
                if (why) *why = "testimonial/believer label without payload";
                return std::nullopt;
            }
            auto pc = characteristic_of(*l.payload, why);
            if (!pc) return std::nullopt;
            if (*pc != characteristic::fn) {
                if (why) *why = "testimonial/believer payload must have characteristic Fn";
                return std::nullopt;
            }
        }
        if (is_variable(l.kind) && l.name.empty()) {
            if (why) *why = "variable label without a name";
            return std::nullopt;
        }
        if (l.world_kind()) {
            if (c != characteristic::fn) {
                if (why) *why = "world label attached to an Fw formula";
                return std::nullopt;
            }
            c = characteristic::fw;
        } else {
            if (c != characteristic::fw) {
                if (why) *why = "neighbourhood label attached to an Fn formula";
                return std::nullopt;
            }
            c = characteristic::fn;
        }
    }
    return c;
}

inline std::optional<characteristic> characteristic_of(const formula& f, std::string* why) {
    characteristic base{};
    switch (f.kind()) {
    case op::atom:
    case op::bot_n: base = characteristic::fn; break;
    case op::bot_w:
    case op::nbhd_leq:
    case op::nbhd_geq: base = characteristic::fw; break;
    case op::neg: {
        auto c = characteristic_of(f.lhs(), why);
        if (!c) return std::nullopt;
        base = *c;
        break;
    }
    case op::conj:
    case op::disj:
    case op::imp: {
        auto a = characteristic_of(f.lhs(), why);
        if (!a) return std::nullopt;
        auto b = characteristic_of(f.rhs(), why);
        if (!b) return std::nullopt;
        if (*a != *b) {
            if (why) *why = "binary connective over operands of different characteristic";
            return std::nullopt;
        }
        base = *a;
        break;
    }
    }
    return apply_labels(base, f.index(), why);
}

} // namespace detail

[[nodiscard]] inline std::optional<characteristic> try_characteristic(const formula& f) {
    return detail::characteristic_of(f, nullptr);
}

[[nodiscard]] inline bool well_formed(const formula& f) { return try_characteristic(f).has_value(); }

/// Fn iff the formula is evaluated at a model point, Fw iff at a template.
inline characteristic characteristic_of(const formula& f) {
    std::string why;
    auto c = detail::characteristic_of(f, &why);
    if (!c) throw ill_formed(why);
    return *c;
}

[[nodiscard]] inline bool well_formed(const context& ctx) {
    for (std::size_t i = 0; i < ctx.labels.size(); ++i) {
        const auto& l = ctx.labels[i];
        const bool want_world = (i % 2) == 1;
        if (l.world_kind() != want_world) return false;
        if (is_variable(l.kind) && l.name.empty()) return false;
        if (l.kind == label_kind::testimonial || l.kind == label_kind::believer) {
            if (!l.payload || try_characteristic(*l.payload) != characteristic::fn) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Fitting and flattening

/// f with reverse(ctx) appended to its index.
[[nodiscard]] inline formula append_reversed(const formula& f, const context& ctx) {
    std::vector<label> rev(ctx.labels.rbegin(), ctx.labels.rend());
    return f.with_labels(rev);
}

[[nodiscard]] inline bool fits(const formula& f, const context& ctx) {
    if (!well_formed(ctx) || !well_formed(f)) return false;
    return try_characteristic(append_reversed(f, ctx)) == characteristic::fn;
}

inline formula flatten(const formula& f, const context& ctx) {
    if (!fits(f, ctx)) throw fit_error("formula does not fit its context");
    return append_reversed(f, ctx);
}

// ---------------------------------------------------------------------------
// Variables

struct variable_set {
    std::set<std::string> worlds;
    std::set<std::string> nbhds;

    [[nodiscard]] bool empty() const noexcept { return worlds.empty() && nbhds.empty(); }
    [[nodiscard]] bool contains(const label& v) const {
        if (v.kind == label_kind::world_var) return worlds.count(v.name) != 0;
        if (v.kind == label_kind::nbhd_var) return nbhds.count(v.name) != 0;
        return false;
    }
    void merge(const variable_set& o) {
        worlds.insert(o.worlds.begin(), o.worlds.end());
        nbhds.insert(o.nbhds.begin(), o.nbhds.end());
    }
};

inline void collect_variables(const formula& f, variable_set& out);

inline void collect_variables(const label& l, variable_set& out) {
    if (l.kind == label_kind::world_var) out.worlds.insert(l.name);
    if (l.kind == label_kind::nbhd_var) out.nbhds.insert(l.name);
    if (l.payload) collect_variables(*l.payload, out);
}

inline void collect_variables(const formula& f, variable_set& out) {
    switch (f.kind()) {
    case op::nbhd_leq:
    case op::nbhd_geq: out.nbhds.insert(f.name()); break;
    case op::neg: collect_variables(f.lhs(), out); break;
    case op::conj:
    case op::disj:
    case op::imp:
        collect_variables(f.lhs(), out);
        collect_variables(f.rhs(), out);
        break;
    default: break;
    }
    for (const auto& l : f.index()) collect_variables(l, out);
}

[[nodiscard]] inline variable_set variables_of(const formula& f) {
    variable_set v;
    collect_variables(f, v);
    return v;
}

[[nodiscard]] inline variable_set variables_of(const context& ctx) {
    variable_set v;
    for (const auto& l : ctx.labels) collect_variables(l, v);
    return v;
}

[[nodiscard]] inline bool has_nbhd_atom(const formula& f) {
    if (f.kind() == op::nbhd_leq || f.kind() == op::nbhd_geq) return true;
    if (f.kind() == op::neg && has_nbhd_atom(f.lhs())) return true;
    if ((f.kind() == op::conj || f.kind() == op::disj || f.kind() == op::imp) &&
        (has_nbhd_atom(f.lhs()) || has_nbhd_atom(f.rhs())))
        return true;
    for (const auto& l : f.index())
        if (l.payload && has_nbhd_atom(*l.payload)) return true;
    return false;
}

/// Membership in S_n / S_w: no variable labels and no leq/geq subformulas.
[[nodiscard]] inline bool is_sentence(const formula& f) {
    return variables_of(f).empty() && !has_nbhd_atom(f);
}

inline formula rename_variable(const formula& f, label_kind kind, const std::string& from, const std::string& to);

inline label rename_variable(const label& l, label_kind kind, const std::string& from, const std::string& to) {
    label r = l;
    if (r.kind == kind && r.name == from) r.name = to;
    if (r.payload) r.payload = rename_variable(*r.payload, kind, from, to);
    return r;
}

/// Replaces every occurrence of variable `from` (of the given kind) by `to`.
inline formula rename_variable(const formula& f, label_kind kind, const std::string& from, const std::string& to) {
    formula body;
    switch (f.kind()) {
    case op::nbhd_leq:
        body = formula::leq(kind == label_kind::nbhd_var && f.name() == from ? to : f.name());
        break;
    case op::nbhd_geq:
        body = formula::geq(kind == label_kind::nbhd_var && f.name() == from ? to : f.name());
        break;
    case op::neg: body = formula::neg(rename_variable(f.lhs(), kind, from, to)); break;
    case op::conj:
        body = formula::conj(rename_variable(f.lhs(), kind, from, to), rename_variable(f.rhs(), kind, from, to));
        break;
    case op::disj:
        body = formula::disj(rename_variable(f.lhs(), kind, from, to), rename_variable(f.rhs(), kind, from, to));
        break;
    case op::imp:
        body = formula::imp(rename_variable(f.lhs(), kind, from, to), rename_variable(f.rhs(), kind, from, to));
        break;
    default: body = f.body(); break;
    }
    std::vector<label> idx;
    idx.reserve(f.index().size());
    for (const auto& l : f.index()) idx.push_back(rename_variable(l, kind, from, to));
    return body.with_index(std::move(idx));
}

inline context rename_variable(const context& c, label_kind kind, const std::string& from, const std::string& to) {
    context r;
    for (const auto& l : c.labels) r.labels.push_back(rename_variable(l, kind, from, to));
    return r;
}

/// Atom names occurring anywhere in f, including label payloads.
inline void collect_atoms(const formula& f, std::set<std::string>& out) {
    switch (f.kind()) {
    case op::atom: out.insert(f.name()); break;
    case op::neg: collect_atoms(f.lhs(), out); break;
    case op::conj:
    case op::disj:
    case op::imp:
        collect_atoms(f.lhs(), out);
        collect_atoms(f.rhs(), out);
        break;
    default: break;
    }
    for (const auto& l : f.index())
        if (l.payload) collect_atoms(*l.payload, out);
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(const formula& f) {
    if (!f.index().empty()) return 5;
    switch (f.kind()) {
    case op::imp: return 1;
    case op::disj: return 2;
    case op::conj: return 3;
    case op::neg: return 4;
    default: return 5;
    }
}

inline void print(const formula& f, std::string& out);

inline void print_label(const label& l, std::string& out) {
    switch (l.kind) {
    case label_kind::all_worlds: out += '*'; break;
    case label_kind::some_world: out += '+'; break;
    case label_kind::world_var: out += "w(" + l.name + ")"; break;
    case label_kind::all_nbhd: out += '@'; break;
    case label_kind::some_nbhd: out += '#'; break;
    case label_kind::nbhd_var: out += "n(" + l.name + ")"; break;
    case label_kind::testimonial:
        out += "T(";
        print(*l.payload, out);
        out += ')';
        break;
    case label_kind::believer:
        out += "B(";
        print(*l.payload, out);
        out += ')';
        break;
    }
}

inline void print_operand(const formula& f, int min_prec, std::string& out) {
    if (precedence(f) < min_prec) {
        out += '(';
        print(f, out);
        out += ')';
    } else {
        print(f, out);
    }
}

inline void print_body(const formula& f, std::string& out) {
    switch (f.kind()) {
    case op::atom: out += f.name(); break;
    case op::bot_n: out += "botN"; break;
    case op::bot_w: out += "botW"; break;
    case op::nbhd_leq: out += "leq(n(" + f.name() + "))"; break;
    case op::nbhd_geq: out += "geq(n(" + f.name() + "))"; break;
    case op::neg:
        out += '~';
        print_operand(f.lhs(), 4, out);
        break;
    case op::conj:
        print_operand(f.lhs(), 3, out);
        out += " & ";
        print_operand(f.rhs(), 4, out);
        break;
    case op::disj:
        print_operand(f.lhs(), 2, out);
        out += " | ";
        print_operand(f.rhs(), 3, out);
        break;
    case op::imp:
        print_operand(f.lhs(), 2, out);
        out += " -> ";
        print_operand(f.rhs(), 1, out);
        break;
    }
}

inline void print(const formula& f, std::string& out) {
    if (f.index().empty()) {
        print_body(f, out);
        return;
    }
    const formula b = f.body();
    if (precedence(b) < 5) {
        out += '(';
        print_body(b, out);
        out += ')';
    } else {
        print_body(b, out);
    }
    out += "^{";
    for (std::size_t i = 0; i < f.index().size(); ++i) {
        if (i) out += ',';
        print_label(f.index()[i], out);
    }
    out += '}';
}

} // namespace detail

[[nodiscard]] inline std::string format(const formula& f) {
    std::string s;
    detail::print(f, s);
    return s;
}

[[nodiscard]] inline std::string format(const label& l) {
    std::string s;
    detail::print_label(l, s);
    return s;
}

[[nodiscard]] inline std::string format(const context& c) {
    std::string s;
    for (std::size_t i = 0; i < c.labels.size(); ++i) {
        if (i) s += ',';
        detail::print_label(c.labels[i], s);
    }
    return s;
}

} // namespace ipuc
