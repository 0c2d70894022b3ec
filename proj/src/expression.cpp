#include "heatlab/expression.hpp"

#include <cctype>
#include <cmath>
#include <utility>
#include <vector>

namespace heatlab {

namespace {

struct Node {
    virtual ~Node() = default;
    virtual double eval(double u) const = 0;
};
using NodePtr = std::unique_ptr<Node>;

struct Const : Node {
    double v;
    explicit Const(double v_) : v(v_) {}
    double eval(double) const override { return v; }
};

struct Var : Node {
    double eval(double u) const override { return u; }
};

struct Binary : Node {
    char op;
    NodePtr lhs, rhs;
    Binary(char op_, NodePtr l, NodePtr r) : op(op_), lhs(std::move(l)), rhs(std::move(r)) {}
    double eval(double u) const override {
        const double a = lhs->eval(u), b = rhs->eval(u);
        switch (op) {
            case '+': return a + b;
            case '-': return a - b;
            case '*': return a * b;
            default: return a / b;
        }
    }
};

struct Negate : Node {
    NodePtr arg;
    explicit Negate(NodePtr a) : arg(std::move(a)) {}
    double eval(double u) const override { return -arg->eval(u); }
};

struct Call1 : Node {
    double (*fn)(double);
    NodePtr arg;
    Call1(double (*fn_)(double), NodePtr a) : fn(fn_), arg(std::move(a)) {}
    double eval(double u) const override { return fn(arg->eval(u)); }
};

struct Call2 : Node {
    double (*fn)(double, double);
    NodePtr a, b;
    Call2(double (*fn_)(double, double), NodePtr a_, NodePtr b_)
        : fn(fn_), a(std::move(a_)), b(std::move(b_)) {}
    double eval(double u) const override { return fn(a->eval(u), b->eval(u)); }
};

struct OddExtend : Node {
    NodePtr arg;
    explicit OddExtend(NodePtr a) : arg(std::move(a)) {}
    double eval(double u) const override {
        if (u == 0.0) return 0.0;
        const double v = arg->eval(std::fabs(u));
        return u > 0 ? v : -v;
    }
};

double fn_sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }
double fn_min(double a, double b) { return std::min(a, b); }
double fn_max(double a, double b) { return std::max(a, b); }

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    double number = 0;
    std::string ident;
    int line = 1, column = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
            ++pos_;
        }
        tok_.line = line_;
        tok_.column = col_;
        if (pos_ >= text_.size()) { tok_.kind = Tok::End; return; }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t end = 0;
            tok_.number = std::stod(text_.substr(pos_), &end);
            tok_.kind = Tok::Number;
            pos_ += end;
            col_ += static_cast<int>(end);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            tok_.ident = text_.substr(pos_, end - pos_);
            tok_.kind = Tok::Ident;
            col_ += static_cast<int>(end - pos_);
            pos_ = end;
            return;
        }
        switch (c) {
            case '+': tok_.kind = Tok::Plus; break;
            case '-': tok_.kind = Tok::Minus; break;
            case '*': tok_.kind = Tok::Star; break;
            case '/': tok_.kind = Tok::Slash; break;
            case '(': tok_.kind = Tok::LParen; break;
            case ')': tok_.kind = Tok::RParen; break;
            case ',': tok_.kind = Tok::Comma; break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
        }
        ++pos_;
        ++col_;
    }

    const std::string text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

class Parser {
  public:
    explicit Parser(const std::string& text) : lex_(text) {}

    NodePtr parse() {
        NodePtr e = expr();
        const Token& t = lex_.peek();
        if (t.kind != Tok::End) throw ParseError("trailing input", t.line, t.column);
        return e;
    }

  private:
    NodePtr expr() {
        NodePtr lhs = term();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            const char op = lex_.take().kind == Tok::Plus ? '+' : '-';
            lhs = std::make_unique<Binary>(op, std::move(lhs), term());
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = factor();
        while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
            const char op = lex_.take().kind == Tok::Star ? '*' : '/';
            lhs = std::make_unique<Binary>(op, std::move(lhs), factor());
        }
        return lhs;
    }

    NodePtr factor() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            return std::make_unique<Negate>(factor());
        }
        return primary();
    }

    NodePtr primary() {
        Token t = lex_.take();
        switch (t.kind) {
            case Tok::Number:
                return std::make_unique<Const>(t.number);
            case Tok::LParen: {
                NodePtr e = expr();
                expect(Tok::RParen, ")");
                return e;
            }
            case Tok::Ident:
                return ident(t);
            default:
                throw ParseError("expected expression", t.line, t.column);
        }
    }

    NodePtr ident(const Token& t) {
        if (t.ident == "u") return std::make_unique<Var>();
        expect(Tok::LParen, "(");
        NodePtr first = expr();
        if (t.ident == "abs") return close1(std::fabs, std::move(first));
        if (t.ident == "ln") return close1(std::log, std::move(first));
        if (t.ident == "exp") return close1(std::exp, std::move(first));
        if (t.ident == "sign") return close1(fn_sign, std::move(first));
        if (t.ident == "odd_extend") {
            expect(Tok::RParen, ")");
            return std::make_unique<OddExtend>(std::move(first));
        }
        if (t.ident == "pow" || t.ident == "min" || t.ident == "max") {
            expect(Tok::Comma, ",");
            NodePtr second = expr();
            expect(Tok::RParen, ")");
            if (t.ident == "pow")
                return std::make_unique<Call2>(static_cast<double (*)(double, double)>(std::pow),
                                               std::move(first), std::move(second));
            if (t.ident == "min")
                return std::make_unique<Call2>(fn_min, std::move(first), std::move(second));
            return std::make_unique<Call2>(fn_max, std::move(first), std::move(second));
        }
        throw ParseError("unknown function '" + t.ident + "'", t.line, t.column);
    }

    NodePtr close1(double (*fn)(double), NodePtr arg) {
        expect(Tok::RParen, ")");
        return std::make_unique<Call1>(fn, std::move(arg));
    }

    void expect(Tok kind, const char* what) {
        Token t = lex_.take();
        if (t.kind != kind)
            throw ParseError(std::string("expected '") + what + "'", t.line, t.column);
    }

    Lexer lex_;
};

}  // namespace

std::function<double(double)> parse_expression(const std::string& text) {
    auto root = std::shared_ptr<Node>(Parser(text).parse().release());
    return [root](double u) { return root->eval(u); };
}

}  // namespace heatlab
