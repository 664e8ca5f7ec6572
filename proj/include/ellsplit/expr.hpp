// ellsplit: exact arithmetic for elliptic surfaces over Q(t)
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "ellsplit/rational_function.hpp"

namespace ellsplit {

/// Syntax error with the byte offset and the expected-token set.
struct parse_error : user_error {
    size_t offset;
    std::string expected;
    parse_error(size_t off, const std::string& exp, const std::string& found)
        : user_error("syntax error at byte " + std::to_string(off) + ": expected " + exp +
                     ", found " + found),
          offset(off),
          expected(exp) {}
};

namespace edetail {

struct Token {
    enum Kind { Int, Var, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
    size_t pos;
    mpz_class value;  // for Int
    std::string text;
};

class Lexer {
public:
    Lexer(const std::string& s, const std::string& var) : s_(s), var_(var) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        tok_.pos = i_;
        if (i_ >= s_.size()) { tok_.kind = Token::End; tok_.text = "end of input"; return; }
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i_;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
            tok_.kind = Token::Int;
            tok_.text = s_.substr(i_, j - i_);
            tok_.value = mpz_class(tok_.text);
            i_ = j;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i_;
            while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
            std::string name = s_.substr(i_, j - i_);
            if (name != var_)
                throw parse_error(i_, "the variable '" + var_ + "'", "identifier '" + name + "'");
            tok_.kind = Token::Var;
            tok_.text = name;
            i_ = j;
            return;
        }
        switch (c) {
            case '+': tok_.kind = Token::Plus; break;
            case '-': tok_.kind = Token::Minus; break;
            case '*': tok_.kind = Token::Star; break;
            case '/': tok_.kind = Token::Slash; break;
            case '^': tok_.kind = Token::Caret; break;
            case '(': tok_.kind = Token::LParen; break;
            case ')': tok_.kind = Token::RParen; break;
            default:
                throw parse_error(i_, "a number, '" + var_ + "', '(', or an operator",
                                  std::string("'") + c + "'");
        }
        tok_.text = std::string(1, c);
        ++i_;
    }
    std::string s_, var_;
    size_t i_ = 0;
    Token tok_;
};

class ExprParser {
public:
    ExprParser(const std::string& s, const std::string& var) : lex_(s, var) {}

    RF parse() {
        RF r = sum();
        const Token& t = lex_.peek();
        if (t.kind != Token::End)
            throw parse_error(t.pos, "an operator or end of input", "'" + t.text + "'");
        return r;
    }

private:
    // sum := product (('+'|'-') product)*      (left associative)
    RF sum() {
        RF r = product();
        while (true) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Plus) { lex_.take(); r = r + product(); }
            else if (t.kind == Token::Minus) { lex_.take(); r = r - product(); }
            else return r;
        }
    }
    // product := unary (('*'|'/') unary)*      (left associative)
    RF product() {
        RF r = unary();
        while (true) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Star) { lex_.take(); r = r * unary(); }
            else if (t.kind == Token::Slash) {
                Token op = lex_.take();
                RF d = unary();
                if (d.is_zero()) throw parse_error(op.pos, "a nonzero divisor", "zero");
                r = r / d;
            } else return r;
        }
    }
    // unary := '-' unary | power             (so -t^2 = -(t^2))
    RF unary() {
        if (lex_.peek().kind == Token::Minus) {
            lex_.take();
            return -unary();
        }
        return power();
    }
    // power := atom ('^' exponent)?          (right associative)
    RF power() {
        RF base = atom();
        if (lex_.peek().kind == Token::Caret) {
            lex_.take();
            const Token& t = lex_.peek();
            if (t.kind != Token::Int)
                throw parse_error(t.pos, "a nonnegative integer exponent", "'" + t.text + "'");
            Token e = lex_.take();
            if (!e.value.fits_slong_p())
                throw parse_error(e.pos, "a small exponent", e.text);
            long n = e.value.get_si();
            if (lex_.peek().kind == Token::Caret)
                throw parse_error(lex_.peek().pos, "no further '^' (write nested powers with parentheses)", "'^'");
            return base.pow(n);
        }
        return base;
    }
    RF atom() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Token::Int: {
                Token v = lex_.take();
                return RF(Poly<Rat>(Rat(v.value)));
            }
            case Token::Var: {
                lex_.take();
                return RF(Poly<Rat>({Rat(0), Rat(1)}));
            }
            case Token::LParen: {
                lex_.take();
                RF r = sum();
                const Token& c = lex_.peek();
                if (c.kind != Token::RParen) throw parse_error(c.pos, "')'", "'" + c.text + "'");
                lex_.take();
                return r;
            }
            default:
                throw parse_error(t.pos, "a number, '(' or the variable", "'" + t.text + "'");
        }
    }

    Lexer lex_;
};

}  // namespace edetail

/// Parse the expression grammar (integers, a/b, the variable, + - * / ^,
/// parentheses) into a canonical rational function.
inline RF parse_expression(const std::string& s, const std::string& var = "t") {
    edetail::ExprParser p(s, var);
    return p.parse();
}

/// Parse an expression that must reduce to a polynomial.
inline PolyQ parse_polynomial(const std::string& s, const std::string& var = "t") {
    RF f = parse_expression(s, var);
    if (!f.is_polynomial())
        throw user_error("expression '" + s + "' is not a polynomial in " + var);
    return f.num();
}

}  // namespace ellsplit
