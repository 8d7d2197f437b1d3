#include "termweb/html_codec.hpp"

#include <array>
#include <cctype>
#include <ostream>
#include <set>
#include <sstream>

#include "termweb/sugar.hpp"

namespace termweb::codec {

namespace {

const std::set<std::string>& void_elements() {
    static const std::set<std::string> voids = {"img",  "br",   "hr",   "input", "meta",
                                                "link", "base", "area", "param"};
    return voids;
}

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// ---- serializer -------------------------------------------------------

void serialize(const Node& node, Dialect dialect, std::ostream& out) {
    bool xml = dialect == Dialect::Xml;
    if (node.is<markup::Text>()) {
        out << markup::escape_text(node.as<markup::Text>().content);
        return;
    }
    if (node.is<markup::Raw>()) {
        out << node.as<markup::Raw>().bytes;
        return;
    }
    if (node.is<markup::Comment>()) {
        out << "<!--" << node.as<markup::Comment>().content << "-->";
        return;
    }
    if (node.is<markup::Declaration>()) {
        out << "<!" << node.as<markup::Declaration>().content << ">";
        return;
    }
    if (node.is<markup::Element>()) {
        const auto& e = node.as<markup::Element>();
        std::string name = xml ? e.name : lowercase(e.name);
        markup::AttrList attrs = e.attrs;
        if (!xml)
            for (auto& a : attrs) a.name = lowercase(a.name);
        out << '<' << name << markup::attrs_text(attrs, xml) << (xml ? "/>" : ">");
        return;
    }
    if (node.is<markup::Environment>()) {
        const auto& e = node.as<markup::Environment>();
        std::string name = xml ? e.name : lowercase(e.name);
        markup::AttrList attrs = e.attrs;
        if (!xml)
            for (auto& a : attrs) a.name = lowercase(a.name);
        out << '<' << name << markup::attrs_text(attrs, xml) << '>';
        for (const auto& child : e.body) serialize(child, dialect, out);
        out << "</" << name << '>';
        return;
    }
    throw Error("unexpected node kind after normalization");
}

// ---- entity decoding ----------------------------------------------------

int named_entity(const std::string& name) {
    if (name == "lt") return '<';
    if (name == "gt") return '>';
    if (name == "amp") return '&';
    if (name == "quot") return '"';
    if (name == "apos") return '\'';
    return -1;
}

/// Decodes the core named entities and numeric references; unknown
/// names pass through literally.
std::string decode_entities(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c != '&') {
            out += c;
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        int value = -1;
        if (j < s.size() && s[j] == '#') {
            ++j;
            bool hex = j < s.size() && (s[j] == 'x' || s[j] == 'X');
            if (hex) ++j;
            std::size_t digits = j;
            long code = 0;
            while (j < s.size() && code <= 0x10FFFF) {
                char d = s[j];
                int dv;
                if (d >= '0' && d <= '9') dv = d - '0';
                else if (hex && d >= 'a' && d <= 'f') dv = d - 'a' + 10;
                else if (hex && d >= 'A' && d <= 'F') dv = d - 'A' + 10;
                else break;
                code = code * (hex ? 16 : 10) + dv;
                ++j;
            }
            if (j > digits && code <= 255) value = static_cast<int>(code);
        } else {
            std::size_t start = j;
            while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
            if (j > start) value = named_entity(s.substr(start, j - start));
        }
        if (value >= 0) {
            out += static_cast<char>(value);
            if (j < s.size() && s[j] == ';') ++j;
            i = j;
        } else {
            out += '&';
            ++i;
        }
    }
    return out;
}

// ---- tokenizing parser ----------------------------------------------------

struct OpenTag {
    std::string name;
    markup::NodeList body;
    markup::AttrList attrs;
};

class Parser {
public:
    Parser(const std::string& input, Dialect dialect) : in_(input), xml_(dialect == Dialect::Xml) {}

    NodeList run() {
        while (pos_ < in_.size()) step();
        flush_text();
        if (xml_ && !stack_.empty())
            throw XmlSyntax("unclosed element <" + stack_.back().name + "> at end of input");
        // recovery: close everything still open at end of input
        while (!stack_.empty()) close_top();
        return std::move(top_);
    }

private:
    NodeList& sink() { return stack_.empty() ? top_ : stack_.back().body; }

    // appends to a preceding text node so recovery (dropped tags) still
    // yields a canonical list without adjacent text nodes
    void emit_text_raw(const std::string& t) {
        if (t.empty()) return;
        NodeList& out = sink();
        std::string decoded = decode_entities(t);
        if (!out.empty() && out.back().is<markup::Text>()) {
            out.back() = markup::text(out.back().as<markup::Text>().content + decoded);
        } else {
            out.push_back(markup::text(std::move(decoded)));
        }
    }

    void flush_text() {
        emit_text_raw(text_);
        text_.clear();
    }

    void close_top() {
        OpenTag open = std::move(stack_.back());
        stack_.pop_back();
        sink().push_back(markup::env(open.name, std::move(open.attrs), std::move(open.body)));
    }

    void step() {
        char c = in_[pos_];
        if (c != '<') {
            text_ += c;
            ++pos_;
            return;
        }
        if (pos_ + 1 >= in_.size()) {
            text_ += c;
            ++pos_;
            return;
        }
        char next = in_[pos_ + 1];
        if (next == '!') {
            flush_text();
            read_markup_declaration();
        } else if (xml_ && next == '?') {
            flush_text();
            read_processing_instruction();
        } else if (next == '/' || std::isalpha(static_cast<unsigned char>(next))) {
            flush_text();
            read_tag();
        } else {
            // stray '<' that opens nothing: literal text
            text_ += c;
            ++pos_;
        }
    }

    void read_markup_declaration() {
        pos_ += 2;  // "<!"
        if (in_.compare(pos_, 2, "--") == 0) {
            pos_ += 2;
            std::size_t end = in_.find("-->", pos_);
            std::string content =
                end == std::string::npos ? in_.substr(pos_) : in_.substr(pos_, end - pos_);
            pos_ = end == std::string::npos ? in_.size() : end + 3;
            sink().push_back(markup::comment(std::move(content)));
            return;
        }
        std::size_t end = in_.find('>', pos_);
        std::string content =
            end == std::string::npos ? in_.substr(pos_) : in_.substr(pos_, end - pos_);
        pos_ = end == std::string::npos ? in_.size() : end + 1;
        sink().push_back(markup::declare(std::move(content)));
    }

    // <?...?> kept as a declaration so XML prologs survive a round trip
    void read_processing_instruction() {
        ++pos_;  // '<'
        std::size_t end = in_.find('>', pos_);
        std::string content =
            end == std::string::npos ? in_.substr(pos_) : in_.substr(pos_, end - pos_);
        pos_ = end == std::string::npos ? in_.size() : end + 1;
        sink().push_back(markup::declare(std::move(content)));
    }

    static bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.' ||
               c == ':';
    }

    void skip_ws() {
        while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_]))) ++pos_;
    }

    std::string read_name() {
        std::size_t start = pos_;
        while (pos_ < in_.size() && name_char(in_[pos_])) ++pos_;
        std::string name = in_.substr(start, pos_ - start);
        return xml_ ? name : lowercase(name);
    }

    void read_tag() {
        ++pos_;  // '<'
        bool closing = in_[pos_] == '/';
        if (closing) {
            ++pos_;
            skip_ws();
        }
        std::string name = read_name();
        if (closing) {
            // discard anything up to '>'
            std::size_t end = in_.find('>', pos_);
            pos_ = end == std::string::npos ? in_.size() : end + 1;
            handle_close(name);
            return;
        }

        markup::AttrList attrs;
        bool self_closing = false;
        while (pos_ < in_.size()) {
            skip_ws();
            if (pos_ >= in_.size()) break;
            char c = in_[pos_];
            if (c == '>') {
                ++pos_;
                break;
            }
            if (c == '/') {
                ++pos_;
                if (pos_ < in_.size() && in_[pos_] == '>') {
                    ++pos_;
                    self_closing = true;
                    break;
                }
                continue;  // stray '/': skip
            }
            read_attr(attrs);
        }
        handle_open(std::move(name), std::move(attrs), self_closing);
    }

    void read_attr(markup::AttrList& attrs) {
        std::size_t start = pos_;
        while (pos_ < in_.size() && in_[pos_] != '=' && in_[pos_] != '>' && in_[pos_] != '/' &&
               !std::isspace(static_cast<unsigned char>(in_[pos_])))
            ++pos_;
        std::string name = in_.substr(start, pos_ - start);
        if (name.empty()) {
            ++pos_;  // unexpected byte inside tag: skip it
            return;
        }
        if (!xml_) name = lowercase(name);
        bool name_ok = true;
        for (char c : name)
            if (c == '<' || c == '&' || c == '"' || c == '\'') name_ok = false;
        skip_ws();
        if (pos_ >= in_.size() || in_[pos_] != '=') {
            if (name_ok) attrs.push_back(markup::Attr(std::move(name)));
            return;
        }
        ++pos_;  // '='
        skip_ws();
        std::string value;
        if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\'')) {
            char quote = in_[pos_++];
            std::size_t end = in_.find(quote, pos_);
            if (end == std::string::npos) {
                value = in_.substr(pos_);
                pos_ = in_.size();
            } else {
                value = in_.substr(pos_, end - pos_);
                pos_ = end + 1;
            }
        } else {
            std::size_t vstart = pos_;
            while (pos_ < in_.size() && in_[pos_] != '>' &&
                   !std::isspace(static_cast<unsigned char>(in_[pos_])))
                ++pos_;
            value = in_.substr(vstart, pos_ - vstart);
        }
        if (name_ok) attrs.push_back(markup::Attr(std::move(name), decode_entities(value)));
    }

    void handle_open(std::string name, markup::AttrList attrs, bool self_closing) {
        if (name.empty()) return;  // "<>" and friends: drop
        if (self_closing || (!xml_ && void_elements().count(name))) {
            sink().push_back(markup::elem(std::move(name), std::move(attrs)));
            return;
        }
        stack_.push_back(OpenTag{std::move(name), {}, std::move(attrs)});
    }

    void handle_close(const std::string& name) {
        if (name.empty()) return;
        if (!xml_ && void_elements().count(name)) return;  // "</br>" etc: drop
        if (xml_) {
            if (stack_.empty() || stack_.back().name != name)
                throw XmlSyntax("mismatched </" + name + "> at offset " + std::to_string(pos_));
            close_top();
            return;
        }
        // find the innermost matching open tag; drop the end tag if none
        for (std::size_t i = stack_.size(); i-- > 0;) {
            if (stack_[i].name == name) {
                while (stack_.size() > i + 1) close_top();  // close intervening scopes
                close_top();
                return;
            }
        }
    }

    const std::string& in_;
    bool xml_;
    std::size_t pos_ = 0;
    std::string text_;
    NodeList top_;
    std::vector<OpenTag> stack_;
};

}  // namespace

std::string render(const Node& node, Dialect dialect) {
    return render(NodeList{node}, dialect);
}

std::string render(const NodeList& nodes, Dialect dialect) {
    std::ostringstream out;
    render_to_stream(nodes, dialect, out);
    return std::move(out).str();
}

void render_to_stream(const Node& node, Dialect dialect, std::ostream& sink) {
    render_to_stream(NodeList{node}, dialect, sink);
}

void render_to_stream(const NodeList& nodes, Dialect dialect, std::ostream& sink) {
    for (const auto& node : sugar::expand_normalize(nodes)) serialize(node, dialect, sink);
}

NodeList parse(const std::string& text, Dialect dialect) {
    return Parser(text, dialect).run();
}

}  // namespace termweb::codec
