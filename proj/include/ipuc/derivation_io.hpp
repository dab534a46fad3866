#pragma once

#include "deduction.hpp"
#include "parser.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace ipuc {

namespace detail {

struct drv_token {
    enum kind_t { word, quoted, semi } kind;
    std::string text;
    std::size_t line;
};

inline std::vector<drv_token> tokenize_derivation(const std::string& text) {
    std::vector<drv_token> out;
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size();) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '%') { // comment to end of line
            while (i < text.size() && text[i] != '\n') ++i;
        } else if (c == ';') {
            out.push_back({drv_token::semi, ";", line});
            ++i;
        } else if (c == '"') {
            std::size_t j = text.find('"', i + 1);
            if (j == std::string::npos) throw format_error("line " + std::to_string(line) + ": unterminated string");
            out.push_back({drv_token::quoted, text.substr(i + 1, j - i - 1), line});
            i = j + 1;
        } else {
            std::size_t j = i;
            int depth = 0;
            while (j < text.size() && (depth > 0 || (!std::isspace(static_cast<unsigned char>(text[j])) &&
                                                     text[j] != ';' && text[j] != '"'))) {
                if (text[j] == '(') ++depth;
                if (text[j] == ')') --depth;
                ++j;
            }
            out.push_back({drv_token::word, text.substr(i, j - i), line});
            i = j;
        }
    }
    return out;
}

} // namespace detail

/// Reads the line-oriented derivation format. The last node is the root; premises
/// refer to earlier node ids.
inline derivation read_derivation(const std::string& text) {
    const auto toks = detail::tokenize_derivation(text);
    std::map<std::string, derivation> nodes;
    std::string last;
    std::size_t i = 0;
    auto fail = [&](const std::string& msg) -> derivation {
        const std::size_t line = i < toks.size() ? toks[i].line : (toks.empty() ? 1 : toks.back().line);
        throw format_error("line " + std::to_string(line) + ": " + msg);
    };
    auto want = [&](detail::drv_token::kind_t k, const char* what) -> const detail::drv_token& {
        if (i >= toks.size() || toks[i].kind != k) fail(std::string("expected ") + what);
        return toks[i++];
    };
    while (i < toks.size()) {
        const std::string id = want(detail::drv_token::word, "node id").text;
        if (nodes.count(id)) fail("duplicate node id " + id);
        const std::string tok = want(detail::drv_token::word, "rule").text;
        auto rule = rule_from_token(tok);
        if (!rule) fail("unknown rule " + tok);
        derivation d;
        d.rule = *rule;
        d.id = id;
        try {
            d.concl.f = parse(want(detail::drv_token::quoted, "quoted formula").text);
            if (i >= toks.size() || toks[i].text != "@") fail("expected '@'");
            ++i;
            d.concl.ctx = parse_context(want(detail::drv_token::quoted, "quoted context").text);
        } catch (const format_error&) {
            throw;
        } catch (const error& e) {
            fail(e.what());
        }
        while (i < toks.size() && toks[i].kind == detail::drv_token::word) {
            const std::string kw = toks[i++].text;
            if (kw == "from") {
                while (i < toks.size() && toks[i].kind == detail::drv_token::word && toks[i].text != "discharge" &&
                       toks[i].text != "bind") {
                    auto it = nodes.find(toks[i].text);
                    if (it == nodes.end()) fail("unknown premise " + toks[i].text);
                    d.premises.push_back(it->second);
                    ++i;
                }
            } else if (kw == "discharge") {
                while (i < toks.size() && toks[i].kind == detail::drv_token::word && toks[i].text != "from" &&
                       toks[i].text != "bind")
                    d.discharges.push_back(toks[i++].text);
            } else if (kw == "bind") {
                const std::string v = want(detail::drv_token::word, "bound variable").text;
                try {
                    auto c = detail::parser(v).parse_label();
                    if (!is_variable(c.kind)) fail("bind expects w(NAME) or n(NAME)");
                    d.binds = c;
                } catch (const parse_error& e) {
                    fail(e.what());
                }
            } else {
                --i;
                fail("unexpected " + kw);
            }
        }
        want(detail::drv_token::semi, "';'");
        nodes.emplace(id, d);
        last = id;
    }
    if (last.empty()) throw format_error("empty derivation");
    return nodes.at(last);
}

namespace detail {

class derivation_writer {
public:
    explicit derivation_writer(const derivation& root) { reserve(root); }

    std::string emit(const derivation& d) {
        if (d.rule == rule_id::hyp || d.rule == rule_id::premise) {
            if (!emitted_hyps_.insert(d.id).second) return d.id;
            line(d.id, d, {});
            return d.id;
        }
        std::vector<std::string> refs;
        for (const auto& p : d.premises) refs.push_back(emit(p));
        std::string name = d.id;
        if (name.empty() || used_.count(name)) name = fresh();
        used_.insert(name);
        line(name, d, refs);
        return name;
    }

    std::string text() const { return out_.str(); }

private:
    void reserve(const derivation& d) {
        if (d.rule == rule_id::hyp || d.rule == rule_id::premise) used_.insert(d.id);
        for (const auto& p : d.premises) reserve(p);
    }

    std::string fresh() {
        std::string n;
        do n = "n" + std::to_string(++counter_);
        while (used_.count(n));
        return n;
    }

    void line(const std::string& name, const derivation& d, const std::vector<std::string>& refs) {
        out_ << name << ' ' << rule_token(d.rule) << " \"" << format(d.concl.f) << "\" @ \"" << format(d.concl.ctx)
             << '"';
        if (!refs.empty()) {
            out_ << " from";
            for (const auto& r : refs) out_ << ' ' << r;
        }
        if (!d.discharges.empty()) {
            out_ << " discharge";
            for (const auto& r : d.discharges) out_ << ' ' << r;
        }
        if (d.binds) out_ << " bind " << format(*d.binds);
        out_ << " ;\n";
    }

    std::ostringstream out_;
    std::set<std::string> used_;
    std::set<std::string> emitted_hyps_;
    int counter_ = 0;
};

} // namespace detail

inline std::string write_derivation(const derivation& d) {
    detail::derivation_writer w(d);
    w.emit(d);
    return w.text();
}

} // namespace ipuc
