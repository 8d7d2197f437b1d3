#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "termweb/error.hpp"
#include "termweb/term.hpp"

namespace termweb::markup {

class Node;
using NodeList = std::vector<Node>;
using StrList = std::vector<std::string>;

class AlreadyBound : public Error {
public:
    explicit AlreadyBound(const std::string& what) : Error(what) {}
};

class UnboundSlot : public Error {
public:
    explicit UnboundSlot(const std::string& what) : Error(what) {}
};

/// One markup attribute: a bare flag (`ismap`) or a name="value" pair.
struct Attr {
    std::string name;
    std::optional<std::string> value;

    Attr(std::string name);                     // flag
    Attr(std::string name, std::string value);  // pair
    Attr(std::string name, const char* value) : Attr(std::move(name), std::string(value)) {}

    bool is_flag() const { return !value.has_value(); }
    bool operator==(const Attr& other) const = default;
};

using AttrList = std::vector<Attr>;

/// Write-once bindable cell standing in for a logic variable inside a
/// term.  Identity is the shared_ptr; binding is serialized, one winner.
class Slot {
public:
    explicit Slot(std::string label = {});

    bool bound() const;
    const Node& value() const;  // pre: bound()
    void bind(Node value);      // throws AlreadyBound

    std::uint64_t id() const { return id_; }
    const std::string& label() const { return label_; }
    std::string describe() const;

private:
    std::uint64_t id_;
    std::string label_;
    mutable std::mutex mutex_;
    std::shared_ptr<const Node> binding_;  // set once under mutex_
};

using SlotRef = std::shared_ptr<Slot>;

SlotRef new_slot(std::string label = {});
void bind_slot(const SlotRef& ref, Node value);

/// name -> slot dictionary produced by template parsing; repeated names
/// share one SlotRef, listed in first-occurrence order.
using TemplateDict = std::vector<std::pair<std::string, SlotRef>>;

// ---- node kinds -----------------------------------------------------

struct Text {
    std::string content;
    bool operator==(const Text&) const = default;
};

struct Element {
    std::string name;
    AttrList attrs;
    bool operator==(const Element&) const = default;
};

struct Environment {
    std::string name;
    AttrList attrs;
    NodeList body;
};

struct Comment {
    std::string content;
    bool operator==(const Comment&) const = default;
};

struct Declaration {
    std::string content;
    bool operator==(const Declaration&) const = default;
};

struct SlotUse {
    SlotRef ref;
};

struct Sequence {
    NodeList items;
};

/// Pre-rendered bytes the serializer emits verbatim.  Produced only by
/// sugar expansion (verbatim, entity, begin/end); never by the parser.
struct Raw {
    std::string bytes;
    bool operator==(const Raw&) const = default;
};

struct SugarNode;

/// A markup tree node.  Core kinds are Text, Element, Environment,
/// Comment and Declaration; Sequence, SlotUse, Raw and SugarNode are
/// removed or resolved before serialization.
class Node {
public:
    using Variant = std::variant<Text, Element, Environment, Comment, Declaration, SlotUse,
                                 Sequence, Raw, std::shared_ptr<SugarNode>>;

    Node(Text v) : v_(std::move(v)) {}
    Node(Element v) : v_(std::move(v)) {}
    Node(Environment v) : v_(std::move(v)) {}
    Node(Comment v) : v_(std::move(v)) {}
    Node(Declaration v) : v_(std::move(v)) {}
    Node(SlotUse v) : v_(std::move(v)) {}
    Node(Sequence v) : v_(std::move(v)) {}
    Node(Raw v) : v_(std::move(v)) {}
    Node(std::shared_ptr<SugarNode> v) : v_(std::move(v)) {}

    template <class T> bool is() const { return std::holds_alternative<T>(v_); }
    template <class T> const T& as() const { return std::get<T>(v_); }
    bool is_sugar() const { return std::holds_alternative<std::shared_ptr<SugarNode>>(v_); }
    const SugarNode& sugar() const { return *std::get<std::shared_ptr<SugarNode>>(v_); }

    const Variant& raw_variant() const { return v_; }

private:
    Variant v_;
};

/// One argument of a sugar constructor.  Constructors have fixed arity
/// and argument shapes; expansion checks them.
using SugarArg = std::variant<std::string, std::int64_t, Node, NodeList, AttrList,
                              std::vector<NodeList>, StrList, term::Term>;

/// Sugar constructor left for the expansion registry to rewrite.
struct SugarNode {
    std::string name;
    std::vector<SugarArg> args;
};

// ---- constructors ---------------------------------------------------

Node text(std::string content);
Node elem(std::string name, AttrList attrs = {});
Node env(std::string name, AttrList attrs, NodeList body);
Node comment(std::string content);
Node declare(std::string content);
Node slot(SlotRef ref);
Node seq(NodeList items);
Node raw(std::string bytes);

// ---- operations -----------------------------------------------------

/// Flattens sequences, substitutes bound slots, leaves only core node
/// kinds (plus raw fragments).  Throws UnboundSlot naming the first
/// unbound slot met, in document order.
NodeList normalize(const Node& node);
NodeList normalize(const NodeList& nodes);

/// Structural equality on normalized forms; unbound slots compare by
/// identity, bound slots by their binding.  Never throws.
bool term_equal(const Node& a, const Node& b);
bool term_equal(const NodeList& a, const NodeList& b);

// ---- text primitives shared by the serializer and raw emissions ------

std::string escape_text(std::string_view s);        // & < >
std::string escape_attr_value(std::string_view s);  // & "

/// Renders an attribute list with a leading space per attribute:
/// ` src="x" ismap`.  XML dialect spells flags as name="name".
std::string attrs_text(const AttrList& attrs, bool xml_flags = false);

// ---- canonical term text --------------------------------------------

/// Core markup as symbolic terms: text("…"), element(name,[attrs]),
/// env(name,[attrs],[body]), comment("…"), declare("…"), raw("…").
/// Pre: node fully bound (sequences/slots are normalized away first).
/// The inverse lives in sugar.hpp, which also accepts sugar heads.
term::Term to_term(const Node& node);
term::Term to_term(const NodeList& nodes);  // list term

}  // namespace termweb::markup
