#include "termweb/markup.hpp"

#include <atomic>
#include <stdexcept>

#include "termweb/sugar.hpp"

namespace termweb::markup {

namespace {

std::atomic<std::uint64_t> slot_counter{0};

void check_token(const std::string& name, const char* what) {
    if (name.empty()) throw std::invalid_argument(std::string(what) + " name is empty");
    for (char c : name) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '<' || c == '>' || c == '&' ||
            c == '"')
            throw std::invalid_argument(std::string(what) + " name contains '" + c + "'");
    }
}

}  // namespace

Attr::Attr(std::string name) : name(std::move(name)) { check_token(this->name, "attribute"); }

Attr::Attr(std::string name, std::string value) : name(std::move(name)), value(std::move(value)) {
    check_token(this->name, "attribute");
}

Slot::Slot(std::string label) : id_(++slot_counter), label_(std::move(label)) {}

bool Slot::bound() const {
    std::lock_guard lock(mutex_);
    return binding_ != nullptr;
}

const Node& Slot::value() const {
    std::lock_guard lock(mutex_);
    if (!binding_) throw UnboundSlot("slot " + describe() + " is unbound");
    return *binding_;
}

void Slot::bind(Node value) {
    auto holder = std::make_shared<const Node>(std::move(value));
    std::lock_guard lock(mutex_);
    if (binding_) throw AlreadyBound("slot " + describe() + " is already bound");
    binding_ = std::move(holder);
}

std::string Slot::describe() const {
    std::string out = "#" + std::to_string(id_);
    if (!label_.empty()) out += " (" + label_ + ")";
    return out;
}

SlotRef new_slot(std::string label) { return std::make_shared<Slot>(std::move(label)); }

void bind_slot(const SlotRef& ref, Node value) { ref->bind(std::move(value)); }

Node text(std::string content) { return Node(Text{std::move(content)}); }

Node elem(std::string name, AttrList attrs) {
    check_token(name, "element");
    return Node(Element{std::move(name), std::move(attrs)});
}

Node env(std::string name, AttrList attrs, NodeList body) {
    check_token(name, "environment");
    return Node(Environment{std::move(name), std::move(attrs), std::move(body)});
}

Node comment(std::string content) { return Node(Comment{std::move(content)}); }
Node declare(std::string content) { return Node(Declaration{std::move(content)}); }
Node slot(SlotRef ref) { return Node(SlotUse{std::move(ref)}); }
Node seq(NodeList items) { return Node(Sequence{std::move(items)}); }
Node raw(std::string bytes) { return Node(Raw{std::move(bytes)}); }

namespace {

void normalize_into(const Node& node, NodeList& out) {
    if (node.is<Sequence>()) {
        for (const auto& item : node.as<Sequence>().items) normalize_into(item, out);
        return;
    }
    if (node.is<SlotUse>()) {
        const auto& ref = node.as<SlotUse>().ref;
        normalize_into(ref->value(), out);  // throws UnboundSlot when unbound
        return;
    }
    if (node.is<Environment>()) {
        const auto& e = node.as<Environment>();
        NodeList body;
        for (const auto& item : e.body) normalize_into(item, body);
        out.push_back(env(e.name, e.attrs, std::move(body)));
        return;
    }
    if (node.is_sugar())
        throw Error("cannot normalize unexpanded sugar '" + node.sugar().name + "'");
    out.push_back(node);
}

// Like normalize, but keeps unbound slots in place so equality can
// compare them by identity.
void loose_normalize_into(const Node& node, NodeList& out) {
    if (node.is<Sequence>()) {
        for (const auto& item : node.as<Sequence>().items) loose_normalize_into(item, out);
        return;
    }
    if (node.is<SlotUse>()) {
        const auto& ref = node.as<SlotUse>().ref;
        if (ref->bound())
            loose_normalize_into(ref->value(), out);
        else
            out.push_back(node);
        return;
    }
    if (node.is<Environment>()) {
        const auto& e = node.as<Environment>();
        NodeList body;
        for (const auto& item : e.body) loose_normalize_into(item, body);
        out.push_back(env(e.name, e.attrs, std::move(body)));
        return;
    }
    out.push_back(node);
}

bool equal_normalized(const Node& a, const Node& b) {
    if (a.raw_variant().index() != b.raw_variant().index()) return false;
    if (a.is<Text>()) return a.as<Text>() == b.as<Text>();
    if (a.is<Element>()) return a.as<Element>() == b.as<Element>();
    if (a.is<Comment>()) return a.as<Comment>() == b.as<Comment>();
    if (a.is<Declaration>()) return a.as<Declaration>() == b.as<Declaration>();
    if (a.is<Raw>()) return a.as<Raw>() == b.as<Raw>();
    if (a.is<SlotUse>()) return a.as<SlotUse>().ref.get() == b.as<SlotUse>().ref.get();
    if (a.is_sugar()) return &a.sugar() == &b.sugar();
    if (a.is<Environment>()) {
        const auto& ea = a.as<Environment>();
        const auto& eb = b.as<Environment>();
        if (ea.name != eb.name || ea.attrs != eb.attrs) return false;
        if (ea.body.size() != eb.body.size()) return false;
        for (std::size_t i = 0; i < ea.body.size(); ++i)
            if (!equal_normalized(ea.body[i], eb.body[i])) return false;
        return true;
    }
    return false;
}

}  // namespace

NodeList normalize(const Node& node) {
    NodeList out;
    normalize_into(node, out);
    return out;
}

NodeList normalize(const NodeList& nodes) {
    NodeList out;
    for (const auto& node : nodes) normalize_into(node, out);
    return out;
}

bool term_equal(const Node& a, const Node& b) { return term_equal(NodeList{a}, NodeList{b}); }

bool term_equal(const NodeList& a, const NodeList& b) {
    NodeList na, nb;
    for (const auto& n : a) loose_normalize_into(n, na);
    for (const auto& n : b) loose_normalize_into(n, nb);
    if (na.size() != nb.size()) return false;
    for (std::size_t i = 0; i < na.size(); ++i)
        if (!equal_normalized(na[i], nb[i])) return false;
    return true;
}

std::string escape_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string escape_attr_value(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string attrs_text(const AttrList& attrs, bool xml_flags) {
    std::string out;
    for (const auto& a : attrs) {
        out += ' ';
        out += a.name;
        if (a.is_flag()) {
            if (xml_flags) out += "=\"" + a.name + "\"";
        } else {
            out += "=\"" + escape_attr_value(*a.value) + "\"";
        }
    }
    return out;
}

namespace {

term::Term attrs_to_term(const AttrList& attrs) {
    term::TermList items;
    for (const auto& a : attrs) {
        if (a.is_flag())
            items.push_back(term::Term::atom(a.name));
        else
            items.push_back(term::Term::compound(
                "=", {term::Term::atom(a.name), term::Term::str(*a.value)}));
    }
    return term::Term::list(std::move(items));
}

}  // namespace

term::Term to_term(const Node& node) {
    if (node.is<Text>()) return term::Term::compound("text", {term::Term::str(node.as<Text>().content)});
    if (node.is<Element>()) {
        const auto& e = node.as<Element>();
        return term::Term::compound("element",
                                    {term::Term::atom(e.name), attrs_to_term(e.attrs)});
    }
    if (node.is<Environment>()) {
        const auto& e = node.as<Environment>();
        return term::Term::compound(
            "env", {term::Term::atom(e.name), attrs_to_term(e.attrs), to_term(e.body)});
    }
    if (node.is<Comment>())
        return term::Term::compound("comment", {term::Term::str(node.as<Comment>().content)});
    if (node.is<Declaration>())
        return term::Term::compound("declare", {term::Term::str(node.as<Declaration>().content)});
    if (node.is<Raw>())
        return term::Term::compound("raw", {term::Term::str(node.as<Raw>().bytes)});
    // sequences and slots are transient shapes; normalize first
    NodeList flat = normalize(node);
    if (flat.size() == 1) return to_term(flat[0]);
    return to_term(flat);
}

term::Term to_term(const NodeList& nodes) {
    term::TermList items;
    for (const auto& n : normalize(nodes)) items.push_back(to_term(n));
    return term::Term::list(std::move(items));
}

}  // namespace termweb::markup
