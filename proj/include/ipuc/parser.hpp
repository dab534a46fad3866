#pragma once

#include "syntax.hpp"

#include <cctype>
#include <string>
#include <string_view>

namespace ipuc {

namespace detail {

class parser {
public:
    explicit parser(std::string_view text) : s_(text) {}

    formula parse_formula_text() {
        formula f = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected input");
        return f;
    }

    context parse_context_text() {
        context c;
        skip();
        if (i_ == s_.size()) return c;
        c.labels.push_back(parse_label());
        while (accept(",")) c.labels.push_back(parse_label());
        skip();
        if (i_ != s_.size()) fail("unexpected input");
        return c;
    }

    label parse_label() {
        skip();
        if (accept("*")) return label::all_worlds();
        if (accept("+")) return label::some_world();
        if (accept("@")) return label::all_nbhd();
        if (accept("#")) return label::some_nbhd();
        if (accept_word("w")) return label::world_var(paren_name());
        if (accept_word("n")) return label::nbhd_var(paren_name());
        if (accept_word("T")) return label::testimonial(paren_formula());
        if (accept_word("B")) return label::believer(paren_formula());
        fail("expected a label");
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw parse_error(what, i_); }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool accept(std::string_view tok) {
        skip();
        if (s_.substr(i_, tok.size()) == tok) {
            i_ += tok.size();
            return true;
        }
        return false;
    }

    // A keyword immediately followed by '('.
    bool accept_word(std::string_view w) {
        skip();
        if (s_.substr(i_, w.size()) != w) return false;
        std::size_t j = i_ + w.size();
        while (j < s_.size() && std::isspace(static_cast<unsigned char>(s_[j]))) ++j;
        if (j >= s_.size() || s_[j] != '(') return false;
        i_ = j;
        return true;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }

    std::string name() {
        skip();
        std::size_t start = i_;
        if (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) {
            ++i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        }
        if (start == i_) fail("expected a variable name");
        return std::string(s_.substr(start, i_ - start));
    }

    std::string paren_name() {
        expect("(");
        std::string n = name();
        expect(")");
        return n;
    }

    formula paren_formula() {
        expect("(");
        formula f = expr();
        expect(")");
        return f;
    }

    formula expr() {
        formula lhs = disj();
        if (accept("->")) return formula::imp(lhs, expr());
        return lhs;
    }

    formula disj() {
        formula f = conj();
        while (accept("|")) f = formula::disj(f, conj());
        return f;
    }

    formula conj() {
        formula f = unary();
        while (accept("&")) f = formula::conj(f, unary());
        return f;
    }

    formula unary() {
        if (accept("~")) return formula::neg(unary());
        return postfix();
    }

    formula postfix() {
        formula f = primary();
        while (accept("^")) {
            expect("{");
            std::vector<label> ls;
            ls.push_back(parse_label());
            while (accept(",")) ls.push_back(parse_label());
            expect("}");
            f = f.with_labels(ls);
        }
        return f;
    }

    formula nbhd_atom(bool leq) {
        expect("(");
        skip();
        if (!accept_word("n")) fail("expected n(NAME)");
        std::string v = paren_name();
        expect(")");
        return leq ? formula::leq(v) : formula::geq(v);
    }

    formula primary() {
        skip();
        if (accept("(")) {
            formula f = expr();
            expect(")");
            return f;
        }
        if (accept_word("leq")) return nbhd_atom(true);
        if (accept_word("geq")) return nbhd_atom(false);
        if (i_ < s_.size() && s_[i_] >= 'a' && s_[i_] <= 'z') {
            std::size_t start = i_;
            ++i_;
            while (i_ < s_.size() && (std::islower(static_cast<unsigned char>(s_[i_])) ||
                                      std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                ++i_;
            if (s_.substr(start, 3) == "bot" && i_ - start == 3 && i_ < s_.size()) {
                if (s_[i_] == 'N') {
                    ++i_;
                    return formula::bot_n();
                }
                if (s_[i_] == 'W') {
                    ++i_;
                    return formula::bot_w();
                }
            }
            return formula::atom(std::string(s_.substr(start, i_ - start)));
        }
        fail(i_ < s_.size() ? "unexpected character" : "unexpected end of input");
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

} // namespace detail

/// Parses the ASCII grammar. Throws parse_error on syntax, ill_formed on alternation violations.
inline formula parse(std::string_view text) {
    formula f = detail::parser(text).parse_formula_text();
    (void)characteristic_of(f);
    return f;
}

inline context parse_context(std::string_view text) {
    context c = detail::parser(text).parse_context_text();
    if (!well_formed(c)) throw ill_formed("context does not alternate starting with a neighbourhood label");
    return c;
}

} // namespace ipuc
