#include "kron/parse.hpp"

#include <cctype>
#include <sstream>

#include "kron/errors.hpp"

namespace kron {

namespace {

struct Token {
    enum Type { Number, Ident, Op, End } type;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << msg << " at position " << current_.pos;
        if (current_.type != Token::End) os << " near '" << current_.text << "'";
        throw Error(ErrorCode::ParseError, os.str());
    }

private:
    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        current_.pos = i_;
        if (i_ >= text_.size()) {
            current_ = {Token::End, "", i_};
            return;
        }
        char c = text_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
            current_ = {Token::Number, text_.substr(i_, j - i_), i_};
            i_ = j;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
                ++j;
            current_ = {Token::Ident, text_.substr(i_, j - i_), i_};
            i_ = j;
        } else if (std::string("+-*/^()=").find(c) != std::string::npos) {
            current_ = {Token::Op, std::string(1, c), i_};
            ++i_;
        } else {
            current_ = {Token::Op, std::string(1, c), i_};
            throw Error(ErrorCode::ParseError,
                        "unexpected character '" + std::string(1, c) + "' at position " +
                            std::to_string(i_));
        }
    }

    const std::string& text_;
    std::size_t i_ = 0;
    Token current_;
};

class Parser {
public:
    Parser(const std::string& text, const std::vector<Var>& context,
           const std::map<std::string, PolyExpr>& env)
        : lex_(text), context_(context), env_(env) {}

    PolyExpr parse_full() {
        PolyExpr e = parse_expr();
        if (lex_.peek().type != Token::End) lex_.fail("trailing input");
        return e;
    }

    std::pair<std::string, PolyExpr> parse_def() {
        if (lex_.peek().type != Token::Ident) lex_.fail("expected a name on the left of '='");
        std::string name = lex_.next().text;
        if (!(lex_.peek().type == Token::Op && lex_.peek().text == "=")) {
            lex_.fail("expected '='");
        }
        lex_.next();
        PolyExpr e = parse_expr();
        if (lex_.peek().type != Token::End) lex_.fail("trailing input");
        return {name, e};
    }

private:
    PolyExpr parse_expr() {
        bool negate = false;
        if (lex_.peek().type == Token::Op &&
            (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            negate = lex_.next().text == "-";
        }
        PolyExpr acc = parse_term();
        if (negate) acc = -acc;
        while (lex_.peek().type == Token::Op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            bool minus = lex_.next().text == "-";
            PolyExpr rhs = parse_term();
            acc = minus ? acc - rhs : acc + rhs;
        }
        return acc;
    }

    PolyExpr parse_term() {
        PolyExpr acc = parse_factor();
        while (lex_.peek().type == Token::Op &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            bool divide = lex_.next().text == "/";
            PolyExpr rhs = parse_factor();
            if (divide) {
                if (!rhs.is_constant()) {
                    lex_.fail("division is only defined by rational constants");
                }
                Rat v = rhs.constant_value();
                if (v == 0) lex_.fail("division by zero");
                acc = acc.scaled(1 / v);
            } else {
                acc = acc * rhs;
            }
        }
        return acc;
    }

    PolyExpr parse_factor() {
        PolyExpr base = parse_atom();
        while (lex_.peek().type == Token::Op && lex_.peek().text == "^") {
            lex_.next();
            if (lex_.peek().type != Token::Number) lex_.fail("expected an integer exponent");
            long e = std::stol(lex_.next().text);
            if (e > 64) lex_.fail("exponent too large");
            base = base.pow(static_cast<int>(e));
        }
        return base;
    }

    PolyExpr parse_atom() {
        const Token& t = lex_.peek();
        if (t.type == Token::Number) {
            std::string num = lex_.next().text;
            // RATIONAL := digits ('/' digits)?  -- '/' binds to the literal
            // only when the numerator is a bare number followed directly by
            // digits; otherwise term-level division handles it. Both give
            // the same value, so just return the numerator here.
            return PolyExpr::constant(parse_rat(num));
        }
        if (t.type == Token::Ident) {
            if (t.text == "sin" || t.text == "cos") return parse_trig();
            std::string name = lex_.next().text;
            for (const Var& v : context_) {
                if (v.name == name) {
                    if (v.kind == VarKind::Angle) {
                        lex_.fail("angle variable '" + name +
                                  "' may only appear inside sin(...) or cos(...)");
                    }
                    return PolyExpr::variable(name);
                }
            }
            auto it = env_.find(name);
            if (it != env_.end()) return it->second;
            lex_.fail("unknown identifier '" + name + "'");
        }
        if (t.type == Token::Op && t.text == "(") {
            lex_.next();
            PolyExpr e = parse_expr();
            expect_close();
            return e;
        }
        lex_.fail("expected a number, name or '('");
    }

    PolyExpr parse_trig() {
        std::string fn = lex_.next().text;
        if (!(lex_.peek().type == Token::Op && lex_.peek().text == "(")) {
            lex_.fail("expected '(' after " + fn);
        }
        lex_.next();
        // arg := ['-'] sterm (('+'|'-') sterm)*, sterm := [INT '*'] IDENT
        std::vector<std::pair<std::string, int>> arg;
        int sign = 1;
        if (lex_.peek().type == Token::Op &&
            (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            sign = lex_.next().text == "-" ? -1 : 1;
        }
        while (true) {
            int coeff = sign;
            if (lex_.peek().type == Token::Number) {
                coeff = sign * static_cast<int>(std::stol(lex_.next().text));
                if (!(lex_.peek().type == Token::Op && lex_.peek().text == "*")) {
                    lex_.fail("expected '*' between coefficient and angle name");
                }
                lex_.next();
            }
            if (lex_.peek().type != Token::Ident) lex_.fail("expected an angle variable");
            std::string name = lex_.next().text;
            bool known = false;
            for (const Var& v : context_) {
                if (v.name == name) {
                    if (v.kind != VarKind::Angle) {
                        lex_.fail("'" + name + "' is not an angle variable");
                    }
                    known = true;
                    break;
                }
            }
            if (!known) lex_.fail("unknown angle variable '" + name + "'");
            arg.emplace_back(name, coeff);

            if (lex_.peek().type == Token::Op &&
                (lex_.peek().text == "+" || lex_.peek().text == "-")) {
                sign = lex_.next().text == "-" ? -1 : 1;
                continue;
            }
            break;
        }
        expect_close();
        return fn == "sin" ? PolyExpr::sin_of(arg) : PolyExpr::cos_of(arg);
    }

    void expect_close() {
        if (!(lex_.peek().type == Token::Op && lex_.peek().text == ")")) {
            lex_.fail("expected ')'");
        }
        lex_.next();
    }

    Lexer lex_;
    const std::vector<Var>& context_;
    const std::map<std::string, PolyExpr>& env_;
};

std::string print_monomial_factors(const PolyExpr& f, const std::vector<int>& mono,
                                   bool& need_star) {
    std::ostringstream os;
    const auto& ctx = f.context();
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        if (ctx[i].kind != VarKind::Line || mono[i] == 0) continue;
        if (need_star) os << "*";
        os << ctx[i].name;
        if (mono[i] != 1) os << "^" << mono[i];
        need_star = true;
    }
    return os.str();
}

std::string print_angle_arg(const PolyExpr& f, const std::vector<int>& mono) {
    std::ostringstream os;
    const auto& ctx = f.context();
    bool first = true;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        if (ctx[i].kind != VarKind::Angle || mono[i] == 0) continue;
        int c = mono[i];
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (std::abs(c) != 1) os << std::abs(c) << "*";
        os << ctx[i].name;
        first = false;
    }
    return os.str();
}

}  // namespace

PolyExpr parse_expr(const std::string& text, const std::vector<Var>& context,
                    const std::map<std::string, PolyExpr>& env) {
    return Parser(text, context, env).parse_full();
}

std::pair<std::string, PolyExpr> parse_definition(const std::string& text,
                                                  const std::vector<Var>& context,
                                                  const std::map<std::string, PolyExpr>& env) {
    return Parser(text, context, env).parse_def();
}

std::string print_expr(const PolyExpr& f) {
    if (f.is_zero()) return "0";
    const auto& ctx = f.context();

    struct Piece {
        Rat coeff;
        std::string body;  // "" for a bare rational
    };
    std::vector<Piece> pieces;

    for (const auto& [mono, c] : f.terms()) {
        int angle_sign = 0;
        for (std::size_t i = 0; i < ctx.size(); ++i) {
            if (ctx[i].kind == VarKind::Angle && mono[i] != 0) {
                angle_sign = mono[i] > 0 ? 1 : -1;
                break;
            }
        }
        if (angle_sign < 0) continue;  // conjugate partner handles it

        if (angle_sign == 0) {
            bool star = false;
            std::string body = print_monomial_factors(f, mono, star);
            pieces.push_back({c.re, body});
            continue;
        }

        // c e^{i a} + conj(c) e^{-i a} = 2 Re(c) cos a - 2 Im(c) sin a
        std::string arg = print_angle_arg(f, mono);
        Rat cos_coeff = 2 * c.re;
        Rat sin_coeff = -2 * c.im;
        if (cos_coeff != 0) {
            bool star = false;
            std::string body = print_monomial_factors(f, mono, star);
            if (star) body += "*";
            pieces.push_back({cos_coeff, body + "cos(" + arg + ")"});
        }
        if (sin_coeff != 0) {
            bool star = false;
            std::string body = print_monomial_factors(f, mono, star);
            if (star) body += "*";
            pieces.push_back({sin_coeff, body + "sin(" + arg + ")"});
        }
    }

    std::ostringstream os;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        Rat c = pieces[i].coeff;
        if (i == 0) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        Rat a = abs(c);
        if (pieces[i].body.empty()) {
            os << rat_to_string(a);
        } else {
            if (a != 1) os << rat_to_string(a) << "*";
            os << pieces[i].body;
        }
    }
    return os.str();
}

}  // namespace kron
