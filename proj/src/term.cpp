#include "termweb/term.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace termweb::term {

Term Term::integer(std::int64_t v) { return Term(Kind::Int, v); }
Term Term::real(double v) { return Term(Kind::Float, v); }
Term Term::atom(std::string name) { return Term(Kind::Atom, std::move(name)); }
Term Term::str(std::string text) { return Term(Kind::String, std::move(text)); }
Term Term::list(TermList items) { return Term(Kind::List, std::move(items)); }
Term Term::compound(std::string name, TermList args) {
    return Term(Kind::Compound, Compound{std::move(name), std::move(args)});
}
Term Term::placeholder() { return Term(Kind::Placeholder, Placeholder{}); }

bool Term::operator==(const Term& other) const {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
    case Kind::Int: return int_value() == other.int_value();
    case Kind::Float: return float_value() == other.float_value();
    case Kind::Atom:
    case Kind::String: return text() == other.text();
    case Kind::List: return items() == other.items();
    case Kind::Compound: return name() == other.name() && args() == other.args();
    case Kind::Placeholder: return true;
    }
    return false;
}

namespace {

bool plain_atom(const std::string& name) {
    if (name.empty()) return false;
    if (!(name[0] >= 'a' && name[0] <= 'z')) return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

void write_quoted(std::string& out, const std::string& s, char quote) {
    out += quote;
    for (char c : s) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (c == quote) {
                out += '\\';
                out += c;
            } else {
                out += c;
            }
        }
    }
    out += quote;
}

void write_atom(std::string& out, const std::string& name) {
    if (plain_atom(name))
        out += name;
    else
        write_quoted(out, name, '\'');
}

void write_float(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    std::string text(buf, res.ptr);
    // keep floats re-readable as floats
    if (text.find('.') == std::string::npos && text.find('e') == std::string::npos &&
        text.find("inf") == std::string::npos && text.find("nan") == std::string::npos)
        text += ".0";
    out += text;
}

void write_term(std::string& out, const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Int:
        out += std::to_string(t.int_value());
        break;
    case Term::Kind::Float:
        write_float(out, t.float_value());
        break;
    case Term::Kind::Atom:
        write_atom(out, t.text());
        break;
    case Term::Kind::String:
        write_quoted(out, t.text(), '"');
        break;
    case Term::Kind::List: {
        out += '[';
        bool first = true;
        for (const auto& item : t.items()) {
            if (!first) out += ',';
            first = false;
            write_term(out, item);
        }
        out += ']';
        break;
    }
    case Term::Kind::Compound:
        if (t.name() == "=" && t.args().size() == 2) {
            write_term(out, t.args()[0]);
            out += '=';
            write_term(out, t.args()[1]);
            break;
        }
        write_atom(out, t.name());
        out += '(';
        for (std::size_t i = 0; i < t.args().size(); ++i) {
            if (i) out += ',';
            write_term(out, t.args()[i]);
        }
        out += ')';
        break;
    case Term::Kind::Placeholder:
        out += '_';
        break;
    }
}

class Reader {
public:
    Reader(const std::string& text, std::size_t pos) : text_(text), pos_(pos) {}

    std::size_t pos() const { return pos_; }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    Term read_term() {
        Term lhs = read_primary();
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '=') {
            ++pos_;
            Term rhs = read_primary();
            return Term::compound("=", {std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

private:
    [[noreturn]] void fail(const std::string& msg) { throw TermSyntax(msg, pos_); }

    char peek() {
        if (pos_ >= text_.size()) fail("unexpected end of input");
        return text_[pos_];
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    Term read_primary() {
        skip_space();
        char c = peek();
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) return read_number();
        if (c == '"') return Term::str(read_quoted('"'));
        if (c == '\'') return read_named(read_quoted('\''));
        if (c == '[') return read_list();
        if (c == '_') {
            ++pos_;
            if (pos_ < text_.size() &&
                (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                fail("named variables are not supported");
            return Term::placeholder();
        }
        if (c >= 'a' && c <= 'z') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            return read_named(text_.substr(start, pos_ - start));
        }
        fail("unexpected character");
    }

    Term read_named(std::string name) {
        if (pos_ < text_.size() && text_[pos_] == '(') {
            ++pos_;
            TermList args;
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == ')') {
                // name() is not a valid compound; require at least one arg
                fail("empty argument list");
            }
            while (true) {
                args.push_back(read_term());
                skip_space();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
            expect(')');
            return Term::compound(std::move(name), std::move(args));
        }
        return Term::atom(std::move(name));
    }

    Term read_list() {
        expect('[');
        TermList items;
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ']') {
            ++pos_;
            return Term::list({});
        }
        while (true) {
            items.push_back(read_term());
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
                continue;
            }
            break;
        }
        expect(']');
        return Term::list(std::move(items));
    }

    Term read_number() {
        std::size_t start = pos_;
        if (text_[pos_] == '-' || text_[pos_] == '+') ++pos_;
        std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == digits) fail("expected digits");
        bool is_float = false;
        if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            is_float = true;
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_ + 1;
            if (mark < text_.size() && (text_[mark] == '-' || text_[mark] == '+')) ++mark;
            if (mark < text_.size() && std::isdigit(static_cast<unsigned char>(text_[mark]))) {
                is_float = true;
                pos_ = mark;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
        }
        std::string num = text_.substr(start, pos_ - start);
        if (is_float) {
            double v = 0;
            auto res = std::from_chars(num.data(), num.data() + num.size(), v);
            if (res.ec != std::errc{}) fail("bad float literal");
            return Term::real(v);
        }
        std::int64_t v = 0;
        const char* first = num.data();
        if (num[0] == '+') ++first;  // from_chars rejects a leading '+'
        auto res = std::from_chars(first, num.data() + num.size(), v);
        if (res.ec != std::errc{}) fail("integer out of range");
        return Term::integer(v);
    }

    std::string read_quoted(char quote) {
        expect(quote);
        std::string out;
        while (true) {
            if (pos_ >= text_.size()) fail("unterminated quoted token");
            char c = text_[pos_++];
            if (c == quote) break;
            if (c == '\\') {
                if (pos_ >= text_.size()) fail("dangling escape");
                char e = text_[pos_++];
                switch (e) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                default: out += e;
                }
            } else {
                out += c;
            }
        }
        return out;
    }

    const std::string& text_;
    std::size_t pos_;
};

}  // namespace

std::string to_text(const Term& t) {
    std::string out;
    write_term(out, t);
    return out;
}

Term parse_term(const std::string& text, std::size_t& pos) {
    Reader r(text, pos);
    Term t = r.read_term();
    pos = r.pos();
    return t;
}

Term parse_term(const std::string& text) {
    std::size_t pos = 0;
    Reader r(text, pos);
    Term t = r.read_term();
    if (!r.at_end()) throw TermSyntax("trailing input after term", r.pos());
    return t;
}

TermList parse_terms(const std::string& text) {
    TermList out;
    Reader r(text, 0);
    while (!r.at_end()) out.push_back(r.read_term());
    return out;
}

}  // namespace termweb::term
