#pragma once

#include <functional>
#include <map>
#include <shared_mutex>
#include <string>
#include <vector>

#include "termweb/markup.hpp"

namespace termweb::sugar {

using markup::AttrList;
using markup::Node;
using markup::NodeList;
using markup::StrList;
using markup::SugarNode;

class MalformedSugar : public Error {
public:
    explicit MalformedSugar(const std::string& what) : Error(what) {}
};

class ExpansionDepthExceeded : public Error {
public:
    explicit ExpansionDepthExceeded(const std::string& what) : Error(what) {}
};

class ReservedHead : public Error {
public:
    explicit ReservedHead(const std::string& what) : Error(what) {}
};

// ---- sugar constructors (the §6.2/§6.3 vocabulary, by role) ----------

Node start();  // document open
Node end();    // document close
Node hrule();
Node linebreak();
Node parbreak();
Node nl();
Node image(std::string addr);
Node image(std::string addr, AttrList attrs);
Node ref(std::string addr, Node body);
Node label(std::string name, Node body);
Node heading(std::int64_t level, Node body);
Node itemize(NodeList items);
Node enumerate(NodeList items);
Node description(std::vector<NodeList> defs);
Node nice_itemize(std::string bullet_image, NodeList items);
Node preformatted(NodeList lines);
Node verbatim(Node content);
Node verbatim(std::string content);
Node prolog_term(term::Term value);
Node entity(std::string name);
Node cgi_reply();
Node pr();
Node begin_tag(std::string name);
Node begin_tag(std::string name, AttrList attrs);
Node end_tag(std::string name);

Node start_form();
Node start_form(std::string handler_url);
Node start_form(std::string handler_url, AttrList attrs);
Node end_form();
Node checkbox(std::string name, std::string state);
Node radio(std::string name, std::string value, std::string selected_value);
Node input(std::string type, AttrList attrs);
Node textinput(std::string name, AttrList attrs, Node body);
Node option(std::string name, std::string selected_value, StrList options);
Node menu(std::string name, AttrList attrs, NodeList items);
Node selected(Node item);  // marks a menu item as initially selected

/// Configures the branding block emitted by pr().
void set_logo(std::string image_path, std::string href, std::string alt);

// ---- expansion ------------------------------------------------------

/// Rewrites one sugar node; may return further sugar, which is expanded
/// in turn (depth-capped).
using Rewrite = std::function<Node(const SugarNode&)>;

class ExpansionRegistry {
public:
    /// Registers (or replaces, last wins) a user rule for name/arity.
    /// User rules shadow built-ins; core constructor heads are refused.
    void register_expansion(const std::string& name, std::size_t arity, Rewrite fn);

    /// Rewrites every sugar constructor to core terms.  Plain markup
    /// passes through unchanged (slots and sequences are preserved).
    Node expand(const Node& node) const;
    NodeList expand(const NodeList& nodes) const;

    /// expand + normalize in one pass; also expands sugar found inside
    /// slot bindings.  This is what rendering runs on.
    NodeList expand_normalize(const Node& node) const;
    NodeList expand_normalize(const NodeList& nodes) const;

    static ExpansionRegistry& global();

private:
    Rewrite lookup(const std::string& name, std::size_t arity) const;
    Node expand_one(const Node& node, int depth) const;
    void expand_normalize_into(const Node& node, NodeList& out, int depth) const;

    mutable std::shared_mutex mutex_;
    std::map<std::pair<std::string, std::size_t>, Rewrite> user_;
};

// Conveniences over the global registry.
void register_expansion(const std::string& name, std::size_t arity, Rewrite fn);
Node expand(const Node& node);
NodeList expand(const NodeList& nodes);
NodeList expand_normalize(const Node& node);
NodeList expand_normalize(const NodeList& nodes);

/// Prints a symbolic value in functional notation, strings quoted,
/// placeholders as `_`.
std::string prolog_term_text(const term::Term& value);

// ---- term text -> markup ---------------------------------------------

/// Inverse of markup::to_term, extended over the sugar vocabulary and
/// the general environment reading: strings and atoms become text,
/// lists become sequences, name(Body) / name(Attrs,Body) become
/// environments.  Throws Error on shapes with no markup meaning.
Node node_from_term(const term::Term& t);
NodeList nodes_from_term(const term::Term& t);

}  // namespace termweb::sugar
