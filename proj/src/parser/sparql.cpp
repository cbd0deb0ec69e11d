#include "skg/parser/sparql.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <set>

#include "skg/errors.hpp"

namespace skg::parser {

FilterExpr FilterExpr::clone() const {
    FilterExpr e;
    e.node = node;
    e.var = var;
    e.op = op;
    e.number = number;
    e.rhs_var = rhs_var;
    e.rhs_is_var = rhs_is_var;
    e.lower = lower;
    e.upper = upper;
    if (lhs) e.lhs = std::make_unique<FilterExpr>(lhs->clone());
    if (rhs) e.rhs = std::make_unique<FilterExpr>(rhs->clone());
    return e;
}

std::vector<std::string> FilterExpr::variables() const {
    std::vector<std::string> vars;
    if (node == Node::And || node == Node::Or) {
        for (const auto* child : {lhs.get(), rhs.get()})
            if (child)
                for (auto& v : child->variables())
                    if (std::find(vars.begin(), vars.end(), v) == vars.end())
                        vars.push_back(std::move(v));
        return vars;
    }
    vars.push_back(var);
    if (rhs_is_var && rhs_var != var) vars.push_back(rhs_var);
    return vars;
}

bool FilterExpr::operator==(const FilterExpr& other) const {
    if (node != other.node) return false;
    if (node == Node::And || node == Node::Or) {
        auto eq = [](const FilterExpr* a, const FilterExpr* b) {
            return (a == nullptr) == (b == nullptr) && (!a || *a == *b);
        };
        return eq(lhs.get(), other.lhs.get()) && eq(rhs.get(), other.rhs.get());
    }
    if (node == Node::IdInterval)
        return var == other.var && lower == other.lower && upper == other.upper;
    return var == other.var && op == other.op && number == other.number &&
           rhs_is_var == other.rhs_is_var && rhs_var == other.rhs_var;
}

FilterExpr FilterExpr::combine(Node op, FilterExpr a, FilterExpr b) {
    FilterExpr e;
    e.node = op;
    e.lhs = std::make_unique<FilterExpr>(std::move(a));
    e.rhs = std::make_unique<FilterExpr>(std::move(b));
    return e;
}

std::vector<std::string> QueryAst::pattern_variables() const {
    std::vector<std::string> vars;
    auto add = [&](const PatternTerm& p) {
        if (p.is_variable && std::find(vars.begin(), vars.end(), p.var) == vars.end())
            vars.push_back(p.var);
    };
    for (const TriplePattern& tp : patterns) {
        add(tp.subject);
        add(tp.predicate);
        add(tp.object);
    }
    return vars;
}

std::vector<std::string> QueryAst::output_columns() const {
    return select_star ? pattern_variables() : projection;
}

bool QueryAst::equivalent(const QueryAst& other) const {
    return select_star == other.select_star && distinct == other.distinct &&
           projection == other.projection && patterns == other.patterns &&
           filters == other.filters;
}

namespace {

enum class Tok : uint8_t {
    Iri, PName, Var, String, Number, Word,
    LBrace, RBrace, LParen, RParen, Dot, Semicolon, Comma, Star,
    AndAnd, OrOr, Lt, Le, Gt, Ge, Eq, Ne,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;       // IRI value, var name, word, number lexical
    std::string aux;        // PName local part; literal datatype
    std::string lang;       // literal language tag
    std::size_t line = 1;
};

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        if (pos_ >= text_.size()) return t;
        const char c = text_[pos_];
        switch (c) {
            case '{': ++pos_; t.kind = Tok::LBrace; return t;
            case '}': ++pos_; t.kind = Tok::RBrace; return t;
            case '(': ++pos_; t.kind = Tok::LParen; return t;
            case ')': ++pos_; t.kind = Tok::RParen; return t;
            case ';': ++pos_; t.kind = Tok::Semicolon; return t;
            case ',': ++pos_; t.kind = Tok::Comma; return t;
            case '*': ++pos_; t.kind = Tok::Star; return t;
            case '&':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '&') {
                    pos_ += 2; t.kind = Tok::AndAnd; return t;
                }
                fail("stray '&'");
            case '|':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '|') {
                    pos_ += 2; t.kind = Tok::OrOr; return t;
                }
                fail("stray '|'");
            case '=': ++pos_; t.kind = Tok::Eq; return t;
            case '!':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
                    pos_ += 2; t.kind = Tok::Ne; return t;
                }
                fail("stray '!'");
            case '>':
                ++pos_;
                if (pos_ < text_.size() && text_[pos_] == '=') { ++pos_; t.kind = Tok::Ge; }
                else t.kind = Tok::Gt;
                return t;
            case '<': return less_or_iri(t);
            case '?':
            case '$': return variable(t);
            case '"': return string_literal(t);
            default: break;
        }
        if (c == '.' && !(pos_ + 1 < text_.size() &&
                          std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            ++pos_;
            t.kind = Tok::Dot;
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.')
            return number(t);
        return word(t);
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, line_);
    }

private:
    void skip_ws() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n') { ++line_; ++pos_; }
            else if (c == ' ' || c == '\t' || c == '\r') ++pos_;
            else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else break;
        }
    }

    Token less_or_iri(Token t) {
        // '<...>' with no intervening whitespace is an IRI, otherwise '<'/'<='.
        std::size_t j = pos_ + 1;
        while (j < text_.size() && text_[j] != '>' && text_[j] != ' ' && text_[j] != '\t' &&
               text_[j] != '\n' && text_[j] != '"')
            ++j;
        if (j < text_.size() && text_[j] == '>') {
            t.kind = Tok::Iri;
            t.text.assign(text_.substr(pos_ + 1, j - pos_ - 1));
            pos_ = j + 1;
            return t;
        }
        ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '=') { ++pos_; t.kind = Tok::Le; }
        else t.kind = Tok::Lt;
        return t;
    }

    Token variable(Token t) {
        ++pos_;
        while (pos_ < text_.size() && word_char(text_[pos_]) && text_[pos_] != '.')
            t.text += text_[pos_++];
        if (t.text.empty()) fail("empty variable name");
        t.kind = Tok::Var;
        return t;
    }

    Token string_literal(Token t) {
        ++pos_;  // opening quote
        while (true) {
            if (pos_ >= text_.size()) fail("unterminated string literal");
            const char c = text_[pos_++];
            if (c == '"') break;
            if (c == '\\') {
                if (pos_ >= text_.size()) fail("unterminated escape");
                const char e = text_[pos_++];
                switch (e) {
                    case 'n': t.text += '\n'; break;
                    case 't': t.text += '\t'; break;
                    case 'r': t.text += '\r'; break;
                    case '"': t.text += '"'; break;
                    case '\\': t.text += '\\'; break;
                    default: fail("invalid escape in string literal");
                }
            } else {
                t.text += c;
            }
        }
        if (pos_ + 1 < text_.size() && text_[pos_] == '^' && text_[pos_ + 1] == '^') {
            pos_ += 2;
            if (pos_ >= text_.size() || text_[pos_] != '<') fail("expected datatype IRI");
            Token dt = less_or_iri(Token{});
            if (dt.kind != Tok::Iri) fail("expected datatype IRI");
            t.aux = dt.text;
        } else if (pos_ < text_.size() && text_[pos_] == '@') {
            ++pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-'))
                t.lang += text_[pos_++];
            if (t.lang.empty()) fail("empty language tag");
        }
        t.kind = Tok::String;
        return t;
    }

    Token number(Token t) {
        const std::size_t start = pos_;
        if (text_[pos_] == '+' || text_[pos_] == '-') ++pos_;
        bool any = false;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                any = true;
            }
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            // A trailing dot is the statement terminator, not a fraction.
            if (pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
                ++pos_;
                digits();
            }
        }
        if (any && pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            bool exp_digit = false;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                exp_digit = true;
            }
            if (!exp_digit) pos_ = save;
        }
        if (!any) fail("malformed number");
        t.kind = Tok::Number;
        t.text.assign(text_.substr(start, pos_ - start));
        return t;
    }

    Token word(Token t) {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (word_char(text_[pos_]) || text_[pos_] == ':') && text_[pos_] != '.')
            ++pos_;
        if (pos_ == start) fail(std::string("unexpected character '") + text_[pos_] + "'");
        std::string_view w = text_.substr(start, pos_ - start);
        const std::size_t colon = w.find(':');
        if (colon != std::string_view::npos) {
            t.kind = Tok::PName;
            t.text.assign(w.substr(0, colon));
            t.aux.assign(w.substr(colon + 1));
        } else {
            t.kind = Tok::Word;
            t.text.assign(w);
        }
        return t;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return out;
}

const std::set<std::string> kUnsupported = {
    "BIND", "UNION", "OPTIONAL", "REGEX", "GRAPH", "SERVICE", "VALUES", "MINUS",
    "ORDER", "GROUP", "HAVING", "LIMIT", "OFFSET", "EXISTS", "ASK", "CONSTRUCT", "DESCRIBE",
};

class QueryParser {
public:
    explicit QueryParser(std::string_view text) : lexer_(text) { advance(); }

    QueryAst parse() {
        prologue();
        select_clause();
        where_clause();
        if (cur_.kind != Tok::End) {
            if (cur_.kind == Tok::Word) check_unsupported(cur_.text);
            fail("trailing tokens after query body");
        }
        validate();
        return std::move(ast_);
    }

private:
    void advance() { cur_ = lexer_.next(); }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, cur_.line);
    }

    void check_unsupported(const std::string& word) const {
        if (kUnsupported.count(upper(word))) throw UnsupportedFeature(upper(word));
    }

    bool at_keyword(const char* kw) const {
        return cur_.kind == Tok::Word && upper(cur_.text) == kw;
    }

    void expect_keyword(const char* kw) {
        if (!at_keyword(kw)) fail(std::string("expected ") + kw);
        advance();
    }

    std::string resolve_pname() {
        auto it = ast_.prefixes.find(cur_.text);
        if (it == ast_.prefixes.end())
            fail("undeclared prefix '" + cur_.text + ":'");
        std::string iri = it->second + cur_.aux;
        advance();
        return iri;
    }

    void prologue() {
        while (at_keyword("PREFIX")) {
            advance();
            if (cur_.kind != Tok::PName || !cur_.aux.empty())
                fail("expected prefix name before ':'");
            std::string name = cur_.text;
            advance();
            if (cur_.kind != Tok::Iri) fail("expected IRI in PREFIX declaration");
            ast_.prefixes[name] = cur_.text;
            advance();
        }
    }

    void select_clause() {
        if (cur_.kind == Tok::Word) check_unsupported(cur_.text);
        expect_keyword("SELECT");
        if (at_keyword("DISTINCT")) {
            ast_.distinct = true;
            advance();
        }
        if (cur_.kind == Tok::Star) {
            ast_.select_star = true;
            advance();
            return;
        }
        while (cur_.kind == Tok::Var) {
            ast_.projection.push_back(cur_.text);
            advance();
        }
        if (ast_.projection.empty()) fail("empty projection");
        if (cur_.kind == Tok::LParen) throw UnsupportedFeature("expression in SELECT");
    }

    PatternTerm subject_term() {
        if (cur_.kind == Tok::Var) {
            PatternTerm p = PatternTerm::variable(cur_.text);
            advance();
            return p;
        }
        if (cur_.kind == Tok::Iri) {
            PatternTerm p = PatternTerm::constant(Term::iri(cur_.text));
            advance();
            return p;
        }
        if (cur_.kind == Tok::PName) return PatternTerm::constant(Term::iri(resolve_pname()));
        if (cur_.kind == Tok::Word) {
            check_unsupported(cur_.text);
            if (cur_.text.size() >= 2 && cur_.text[0] == '_')
                throw UnsupportedFeature("blank node in query");
        }
        fail("expected variable or IRI");
    }

    PatternTerm predicate_term(bool& is_type) {
        is_type = false;
        if (cur_.kind == Tok::Word && cur_.text == "a") {
            advance();
            is_type = true;
            return PatternTerm::constant(Term::iri(kRdfType));
        }
        PatternTerm p = subject_term();
        if (!p.is_variable && p.term.value == kRdfType) is_type = true;
        return p;
    }

    PatternTerm object_term() {
        if (cur_.kind == Tok::String) {
            PatternTerm p = PatternTerm::constant(Term::literal(cur_.text, cur_.aux, cur_.lang));
            advance();
            return p;
        }
        if (cur_.kind == Tok::Number) {
            PatternTerm p = PatternTerm::constant(Term::literal(cur_.text));
            advance();
            return p;
        }
        return subject_term();
    }

    void triples_same_subject() {
        const PatternTerm subj = subject_term();
        while (true) {
            TriplePattern tp;
            tp.subject = subj;
            tp.predicate = predicate_term(tp.is_rdf_type);
            tp.object = object_term();
            ast_.patterns.push_back(std::move(tp));
            if (cur_.kind == Tok::Semicolon) {
                advance();
                // trailing ';' before '.' or '}' is tolerated
                if (cur_.kind == Tok::Dot || cur_.kind == Tok::RBrace) break;
                continue;
            }
            break;
        }
        if (cur_.kind == Tok::Dot) advance();
    }

    FilterExpr filter_primary() {
        if (cur_.kind == Tok::LParen) {
            advance();
            FilterExpr e = filter_or();
            if (cur_.kind != Tok::RParen) fail("expected ')'");
            advance();
            return e;
        }
        if (cur_.kind == Tok::Word || cur_.kind == Tok::PName) {
            check_unsupported(cur_.kind == Tok::PName ? cur_.aux : cur_.text);
            throw UnsupportedFeature("function call in FILTER: " +
                                     (cur_.kind == Tok::PName ? cur_.aux : cur_.text));
        }
        return comparison();
    }

    double number_value() {
        double v = 0;
        const std::string& s = cur_.text;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) fail("malformed number");
        advance();
        return v;
    }

    FilterExpr comparison() {
        FilterExpr e;
        e.node = FilterExpr::Node::Compare;
        bool lhs_is_number = false;
        if (cur_.kind == Tok::Var) {
            e.var = cur_.text;
            advance();
        } else if (cur_.kind == Tok::Number) {
            e.number = number_value();
            lhs_is_number = true;
        } else {
            fail("expected variable or number in FILTER comparison");
        }
        switch (cur_.kind) {
            case Tok::Lt: e.op = CompareOp::Lt; break;
            case Tok::Le: e.op = CompareOp::Le; break;
            case Tok::Gt: e.op = CompareOp::Gt; break;
            case Tok::Ge: e.op = CompareOp::Ge; break;
            case Tok::Eq: e.op = CompareOp::Eq; break;
            case Tok::Ne: e.op = CompareOp::Ne; break;
            default: fail("expected comparison operator");
        }
        advance();
        if (cur_.kind == Tok::Var) {
            if (lhs_is_number) {
                // normalize `3 < ?v` to `?v > 3`
                e.var = cur_.text;
                advance();
                switch (e.op) {
                    case CompareOp::Lt: e.op = CompareOp::Gt; break;
                    case CompareOp::Le: e.op = CompareOp::Ge; break;
                    case CompareOp::Gt: e.op = CompareOp::Lt; break;
                    case CompareOp::Ge: e.op = CompareOp::Le; break;
                    default: break;
                }
            } else {
                e.rhs_is_var = true;
                e.rhs_var = cur_.text;
                advance();
            }
        } else if (cur_.kind == Tok::Number) {
            if (lhs_is_number) fail("comparison between two constants");
            e.number = number_value();
        } else {
            fail("expected variable or number after comparison operator");
        }
        return e;
    }

    FilterExpr filter_and() {
        FilterExpr e = filter_primary();
        while (cur_.kind == Tok::AndAnd) {
            advance();
            e = FilterExpr::combine(FilterExpr::Node::And, std::move(e), filter_primary());
        }
        return e;
    }

    FilterExpr filter_or() {
        FilterExpr e = filter_and();
        while (cur_.kind == Tok::OrOr) {
            advance();
            e = FilterExpr::combine(FilterExpr::Node::Or, std::move(e), filter_and());
        }
        return e;
    }

    void where_clause() {
        if (at_keyword("WHERE")) advance();
        if (cur_.kind != Tok::LBrace) fail("expected '{'");
        advance();
        while (cur_.kind != Tok::RBrace) {
            if (cur_.kind == Tok::End) fail("unterminated group, expected '}'");
            if (cur_.kind == Tok::LBrace) throw UnsupportedFeature("nested group pattern");
            if (at_keyword("FILTER")) {
                advance();
                if (cur_.kind != Tok::LParen) fail("expected '(' after FILTER");
                advance();
                ast_.filters.push_back(filter_or());
                if (cur_.kind != Tok::RParen) fail("expected ')'");
                advance();
                if (cur_.kind == Tok::Dot) advance();
                continue;
            }
            if (cur_.kind == Tok::Word) check_unsupported(cur_.text);
            triples_same_subject();
        }
        advance();
    }

    void validate() const {
        if (ast_.patterns.empty()) throw ParseError("empty basic graph pattern", 1);
        for (const TriplePattern& tp : ast_.patterns) {
            if (tp.variable_count() == 0)
                throw UnsupportedFeature("fully-constant triple pattern");
            if (tp.variable_count() == 3)
                throw UnsupportedFeature("triple pattern with three variables");
        }
    }

    Lexer lexer_;
    Token cur_;
    QueryAst ast_;
};

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

std::string print_term(const PatternTerm& p) {
    if (p.is_variable) return "?" + p.var;
    const Term& t = p.term;
    switch (t.type) {
        case TermType::Iri: return "<" + t.value + ">";
        case TermType::BlankNode: return "_:" + t.value;
        case TermType::Literal: break;
    }
    std::string out = "\"" + t.value + "\"";
    if (!t.datatype.empty())
        out += "^^<" + t.datatype + ">";
    else if (!t.lang.empty())
        out += "@" + t.lang;
    return out;
}

const char* op_text(CompareOp op) {
    switch (op) {
        case CompareOp::Lt: return "<";
        case CompareOp::Le: return "<=";
        case CompareOp::Gt: return ">";
        case CompareOp::Ge: return ">=";
        case CompareOp::Eq: return "=";
        case CompareOp::Ne: return "!=";
    }
    return "?";
}

std::string print_filter(const FilterExpr& e) {
    switch (e.node) {
        case FilterExpr::Node::And:
            return "(" + print_filter(*e.lhs) + " && " + print_filter(*e.rhs) + ")";
        case FilterExpr::Node::Or:
            return "(" + print_filter(*e.lhs) + " || " + print_filter(*e.rhs) + ")";
        case FilterExpr::Node::IdInterval:
            // only reachable when printing rewritten plans; kept numeric
            return "(?" + e.var + " >= " + std::to_string(e.lower) + " && ?" + e.var + " < " +
                   std::to_string(e.upper) + ")";
        case FilterExpr::Node::Compare: break;
    }
    std::string rhs = e.rhs_is_var ? "?" + e.rhs_var : format_double(e.number);
    return "?" + e.var + " " + op_text(e.op) + " " + rhs;
}

}  // namespace

QueryAst parse_query(std::string_view text) {
    return QueryParser(text).parse();
}

std::string print_query(const QueryAst& ast) {
    std::string out = "SELECT ";
    if (ast.distinct) out += "DISTINCT ";
    if (ast.select_star) {
        out += "*";
    } else {
        bool first = true;
        for (const std::string& v : ast.projection) {
            if (!first) out += " ";
            out += "?" + v;
            first = false;
        }
    }
    out += " WHERE {\n";
    for (const TriplePattern& tp : ast.patterns) {
        out += "  " + print_term(tp.subject) + " " +
               (tp.is_rdf_type ? "a" : print_term(tp.predicate)) + " " + print_term(tp.object) +
               " .\n";
    }
    for (const FilterExpr& f : ast.filters) out += "  FILTER (" + print_filter(f) + ")\n";
    out += "}";
    return out;
}

}  // namespace skg::parser
