#include <cctype>

#include "teamlogic/syntax.hpp"

namespace teamlogic {

namespace {

enum class Tok { Ident, LParen, RParen, LBrace, RBrace, Comma, Semi, Dot, Slash, Equals, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t col;
};

std::vector<Token> lex(std::string_view src)
{
    std::vector<Token> out;
    std::size_t line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), line, col});
            advance(j - i);
            continue;
        }
        Tok k;
        switch (c) {
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '{': k = Tok::LBrace; break;
        case '}': k = Tok::RBrace; break;
        case ',': k = Tok::Comma; break;
        case ';': k = Tok::Semi; break;
        case '.': k = Tok::Dot; break;
        case '/': k = Tok::Slash; break;
        case '=': k = Tok::Equals; break;
        default:
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        out.push_back({k, std::string(1, c), line, col});
        advance(1);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

bool is_keyword(const std::string& s)
{
    return s == "forall" || s == "exists" || s == "branch" || s == "not" || s == "and" || s == "or" || s == "dep" ||
           s == "ind";
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    Formula parse_all()
    {
        auto f = formula();
        if (peek().kind != Tok::End) error("unexpected '" + peek().text + "' after formula");
        return f;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void error(const std::string& msg) const { throw ParseError(peek().line, peek().col, msg); }

    bool at_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

    void expect(Tok k, std::string_view what)
    {
        if (peek().kind != k) error("expected " + std::string(what));
        next();
    }

    void expect_word(std::string_view w)
    {
        if (!at_word(w)) error("expected '" + std::string(w) + "'");
        next();
    }

    std::string variable()
    {
        if (peek().kind != Tok::Ident || is_keyword(peek().text)) error("expected a variable name");
        return next().text;
    }

    std::vector<std::string> variables_until(Tok stop)
    {
        std::vector<std::string> out;
        while (peek().kind != stop) out.push_back(variable());
        return out;
    }

    Formula formula()
    {
        if (at_word("forall") || at_word("exists")) return quantifier();
        if (at_word("branch")) return branch();
        return disjunction();
    }

    Formula quantifier()
    {
        const bool universal = next().text == "forall";
        auto v = variable();
        if (peek().kind == Tok::Slash) {
            if (universal) error("slash is only allowed on 'exists'");
            next();
            expect(Tok::LBrace, "'{'");
            auto slashed = variables_until(Tok::RBrace);
            next();
            expect(Tok::Dot, "'.'");
            return Formula::slashed_exists(std::move(v), VarTuple(std::move(slashed)), formula());
        }
        expect(Tok::Dot, "'.'");
        auto body = formula();
        return universal ? Formula::forall(std::move(v), std::move(body)) : Formula::exists(std::move(v), std::move(body));
    }

    Formula branch()
    {
        const auto& start = next();
        expect(Tok::LBrace, "'{'");
        std::vector<HenkinRow> rows;
        for (;;) {
            expect_word("forall");
            auto u = variable();
            expect_word("exists");
            auto e = variable();
            rows.push_back({std::move(u), std::move(e)});
            if (peek().kind == Tok::Semi) {
                next();
                continue;
            }
            break;
        }
        expect(Tok::RBrace, "'}' or ';'");
        expect(Tok::Dot, "'.'");
        auto body = formula();
        try {
            return Formula::henkin(std::move(rows), std::move(body));
        } catch (const Error& e) {
            throw ParseError(start.line, start.col, e.what());
        }
    }

    Formula disjunction()
    {
        auto f = conjunction();
        while (at_word("or")) {
            next();
            f = Formula::disj(std::move(f), conjunction());
        }
        return f;
    }

    Formula conjunction()
    {
        auto f = unary();
        while (at_word("and")) {
            next();
            f = Formula::conj(std::move(f), unary());
        }
        return f;
    }

    Formula unary()
    {
        if (at_word("not")) {
            const auto& at = next();
            auto operand = unary();
            if (!operand.is_atom()) throw ParseError(at.line, at.col, "negation applied to a non-atom");
            return Formula::negate(std::move(operand));
        }
        if (peek().kind == Tok::LParen) {
            next();
            auto f = formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (at_word("forall") || at_word("exists") || at_word("branch"))
            error("quantified operand must be parenthesized");
        return atom();
    }

    Formula atom()
    {
        if ((at_word("dep") || at_word("ind")) && peek(1).kind == Tok::LParen) {
            const bool is_dep = next().text == "dep";
            next();
            auto a = variables_until(Tok::Semi);
            next();
            if (is_dep) {
                auto b = variables_until(Tok::RParen);
                next();
                return Formula::dep(VarTuple(std::move(a)), VarTuple(std::move(b)));
            }
            auto b = variables_until(Tok::Semi);
            next();
            auto c = variables_until(Tok::RParen);
            next();
            return Formula::ind(VarTuple(std::move(a)), VarTuple(std::move(b)), VarTuple(std::move(c)));
        }
        if (peek().kind != Tok::Ident || is_keyword(peek().text)) error("expected an atomic formula");
        if (peek(1).kind == Tok::LParen) {
            auto name = next().text;
            next();
            std::vector<Term> args;
            args.push_back(Term{variable()});
            while (peek().kind == Tok::Comma) {
                next();
                args.push_back(Term{variable()});
            }
            expect(Tok::RParen, "')' or ','");
            return Formula::relation(std::move(name), std::move(args));
        }
        auto lhs = variable();
        expect(Tok::Equals, "'=' or '('");
        auto rhs = variable();
        return Formula::equal(Term{std::move(lhs)}, Term{std::move(rhs)});
    }
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse_all(); }

// Printer -----------------------------------------------------------------

namespace {

std::string join(const VarTuple& t)
{
    return t.to_string();
}

std::string print(const Formula& f);

bool is_quantifier(const Formula& f)
{
    switch (f.kind()) {
    case FormulaKind::Exists:
    case FormulaKind::Forall:
    case FormulaKind::SlashedExists:
    case FormulaKind::Henkin:
        return true;
    default:
        return false;
    }
}

std::string operand(const Formula& f, FormulaKind parent, bool right)
{
    bool parens = is_quantifier(f);
    if (f.kind() == FormulaKind::Or && parent == FormulaKind::And) parens = true;
    if (f.kind() == parent && right) parens = true;
    auto s = print(f);
    return parens ? "(" + s + ")" : s;
}

std::string quantified_body(const Formula& body)
{
    auto s = print(body);
    if (body.kind() == FormulaKind::And || body.kind() == FormulaKind::Or) return "(" + s + ")";
    return s;
}

std::string print(const Formula& f)
{
    switch (f.kind()) {
    case FormulaKind::Equal:
        return f.terms()[0].name + " = " + f.terms()[1].name;
    case FormulaKind::Relation: {
        std::string s = f.name() + "(";
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
            if (i) s += ", ";
            s += f.terms()[i].name;
        }
        return s + ")";
    }
    case FormulaKind::Not:
        return "not " + print(f.child());
    case FormulaKind::Dep: {
        std::string s = "dep(" + join(f.first());
        s += f.first().empty() ? ";" : " ;";
        if (!f.second().empty()) s += " " + join(f.second());
        return s + ")";
    }
    case FormulaKind::Ind: {
        std::string s = "ind(" + join(f.first());
        if (f.second().empty()) {
            s += f.first().empty() ? ";;" : " ;;";
        } else {
            s += f.first().empty() ? "; " : " ; ";
            s += join(f.second()) + " ;";
        }
        if (!f.third().empty()) s += " " + join(f.third());
        return s + ")";
    }
    case FormulaKind::And:
        return operand(f.lhs(), FormulaKind::And, false) + " and " + operand(f.rhs(), FormulaKind::And, true);
    case FormulaKind::Or:
        return operand(f.lhs(), FormulaKind::Or, false) + " or " + operand(f.rhs(), FormulaKind::Or, true);
    case FormulaKind::Exists:
        return "exists " + f.var() + ". " + quantified_body(f.body());
    case FormulaKind::Forall:
        return "forall " + f.var() + ". " + quantified_body(f.body());
    case FormulaKind::SlashedExists:
        return "exists " + f.var() + "/{" + join(f.first()) + "}. " + quantified_body(f.body());
    case FormulaKind::Henkin: {
        std::string s = "branch{";
        for (std::size_t i = 0; i < f.henkin_rows().size(); ++i) {
            if (i) s += "; ";
            s += "forall " + f.henkin_rows()[i].universal + " exists " + f.henkin_rows()[i].existential;
        }
        return s + "}. " + quantified_body(f.body());
    }
    }
    return {};
}

}  // namespace

std::string to_string(const Formula& f) { return print(f); }

}  // namespace teamlogic
