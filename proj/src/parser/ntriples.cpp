#include "skg/parser/ntriples.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <string>

#include "skg/errors.hpp"

namespace skg::parser {

namespace {

void append_utf8(std::string& out, uint32_t cp) {
    if (cp <= 0x7F) {
        out += static_cast<char>(cp);
    } else if (cp <= 0x7FF) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp <= 0xFFFF) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

class LineScanner {
public:
    LineScanner(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

    void skip_ws() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    }

    [[nodiscard]] bool at_end() const { return pos_ >= line_.size(); }
    [[nodiscard]] char peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }
    char take() {
        if (at_end()) fail("unexpected end of line");
        return line_[pos_++];
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, line_no_);
    }

    uint32_t hex_codepoint(unsigned digits) {
        uint32_t cp = 0;
        for (unsigned i = 0; i < digits; ++i) {
            const char c = take();
            cp <<= 4;
            if (c >= '0' && c <= '9')
                cp |= static_cast<uint32_t>(c - '0');
            else if (c >= 'a' && c <= 'f')
                cp |= static_cast<uint32_t>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F')
                cp |= static_cast<uint32_t>(c - 'A' + 10);
            else
                fail("bad hex digit in escape");
        }
        return cp;
    }

    // Unescapes \uXXXX / \UXXXXXXXX plus the string escapes when `in_literal`.
    void unescape_into(std::string& out, char c, bool in_literal) {
        if (c != '\\') {
            out += c;
            return;
        }
        const char e = take();
        switch (e) {
            case 'u': append_utf8(out, hex_codepoint(4)); return;
            case 'U': append_utf8(out, hex_codepoint(8)); return;
            default: break;
        }
        if (!in_literal) fail("invalid escape in IRI");
        switch (e) {
            case 't': out += '\t'; return;
            case 'b': out += '\b'; return;
            case 'n': out += '\n'; return;
            case 'r': out += '\r'; return;
            case 'f': out += '\f'; return;
            case '"': out += '"'; return;
            case '\'': out += '\''; return;
            case '\\': out += '\\'; return;
            default: fail("invalid escape in literal");
        }
    }

    std::string iri_ref() {
        if (take() != '<') fail("expected '<'");
        std::string out;
        while (true) {
            const char c = take();
            if (c == '>') return out;
            if (c == ' ' || c == '\t') fail("whitespace inside IRI");
            unescape_into(out, c, false);
        }
    }

    std::string blank_label() {
        if (take() != '_' || take() != ':') fail("expected blank node label");
        std::string out;
        while (!at_end()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '.') break;
            out += take();
        }
        if (out.empty()) fail("empty blank node label");
        return out;
    }

    Term literal() {
        if (take() != '"') fail("expected '\"'");
        std::string lexical;
        while (true) {
            const char c = take();
            if (c == '"') break;
            unescape_into(lexical, c, true);
        }
        std::string datatype, lang;
        if (peek() == '^') {
            take();
            if (take() != '^') fail("expected '^^'");
            datatype = iri_ref();
        } else if (peek() == '@') {
            take();
            while (!at_end()) {
                const char c = peek();
                if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-')) break;
                lang += take();
            }
            if (lang.empty()) fail("empty language tag");
        }
        return Term::literal(std::move(lexical), std::move(datatype), std::move(lang));
    }

    Term subject() {
        skip_ws();
        if (peek() == '<') return Term::iri(iri_ref());
        if (peek() == '_') return Term::blank(blank_label());
        fail("expected IRI or blank node as subject");
    }

    Term predicate() {
        skip_ws();
        if (peek() == '<') return Term::iri(iri_ref());
        fail("expected IRI as predicate");
    }

    Term object() {
        skip_ws();
        if (peek() == '<') return Term::iri(iri_ref());
        if (peek() == '_') return Term::blank(blank_label());
        if (peek() == '"') return literal();
        fail("expected IRI, blank node or literal as object");
    }

    void terminal_dot() {
        skip_ws();
        if (at_end() || take() != '.') fail("missing terminal '.'");
        skip_ws();
        if (!at_end() && peek() != '#') fail("trailing characters after '.'");
    }

private:
    std::string_view line_;
    std::size_t pos_ = 0;
    std::size_t line_no_;
};

template <typename Fn>
void for_each_statement(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0, start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;

        std::size_t first = line.find_first_not_of(" \t");
        if (first != std::string_view::npos && line[first] != '#') {
            LineScanner scan(line, line_no);
            RawTriple triple;
            triple.subject = scan.subject();
            triple.predicate = scan.predicate();
            triple.object = scan.object();
            scan.terminal_dot();
            fn(std::move(triple));
        }
        if (end == text.size()) break;
        start = end + 1;
    }
}

std::string escape_iri(const std::string& value) {
    std::string out;
    for (char c : value) {
        if (c == '>' || c == '<' || c == '\\') {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(c));
            out += buf;
        } else {
            out += c;
        }
    }
    return out;
}

std::string escape_literal(const std::string& value) {
    std::string out;
    for (char c : value) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::vector<RawTriple> parse_ntriples(std::string_view text) {
    std::vector<RawTriple> triples;
    for_each_statement(text, [&](RawTriple t) { triples.push_back(std::move(t)); });
    return triples;
}

std::string to_ntriples(const Term& term) {
    switch (term.type) {
        case TermType::Iri: return "<" + escape_iri(term.value) + ">";
        case TermType::BlankNode: return "_:" + term.value;
        case TermType::Literal: break;
    }
    std::string out = "\"" + escape_literal(term.value) + "\"";
    if (!term.datatype.empty())
        out += "^^<" + escape_iri(term.datatype) + ">";
    else if (!term.lang.empty())
        out += "@" + term.lang;
    return out;
}

std::string to_ntriples(const RawTriple& triple) {
    return to_ntriples(triple.subject) + " " + to_ntriples(triple.predicate) + " " +
           to_ntriples(triple.object) + " .";
}

std::string to_ntriples(const std::vector<RawTriple>& triples) {
    std::string out;
    for (const RawTriple& t : triples) {
        out += to_ntriples(t);
        out += '\n';
    }
    return out;
}

OntologyParse parse_ontology(std::string_view text) {
    OntologyParse result;
    for_each_statement(text, [&](RawTriple t) {
        if (t.predicate.value == kRdfsSubClassOf && t.subject.is_resource() &&
            t.object.is_resource()) {
            result.graph.concept_edges.emplace_back(t.subject.key(), t.object.key());
        } else if (t.predicate.value == kRdfsSubPropertyOf && t.subject.is_resource() &&
                   t.object.is_resource()) {
            result.graph.property_edges.emplace_back(t.subject.key(), t.object.key());
        } else if (t.predicate.value == kRdfsDomain && t.object.is_resource()) {
            result.graph.domain_of[t.subject.key()].push_back(t.object.key());
        } else if (t.predicate.value == kRdfsRange && t.object.is_resource()) {
            result.graph.range_of[t.subject.key()].push_back(t.object.key());
        } else {
            ++result.ignored_statements;
        }
    });
    return result;
}

}  // namespace skg::parser
