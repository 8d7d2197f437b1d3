#include "termweb/sugar.hpp"

#include <algorithm>
#include <set>

namespace termweb::sugar {

using markup::Attr;

namespace {

constexpr int kMaxExpansionDepth = 64;

Node make_sugar(std::string name, std::vector<markup::SugarArg> args) {
    return Node(std::make_shared<SugarNode>(SugarNode{std::move(name), std::move(args)}));
}

std::string head_of(const SugarNode& s) {
    return s.name + "/" + std::to_string(s.args.size());
}

[[noreturn]] void bad(const SugarNode& s, const std::string& why) {
    throw MalformedSugar(head_of(s) + ": " + why);
}

// checked argument accessors

const std::string& arg_str(const SugarNode& s, std::size_t i) {
    if (auto* v = std::get_if<std::string>(&s.args[i])) return *v;
    bad(s, "argument " + std::to_string(i + 1) + " must be a string token");
}

std::int64_t arg_int(const SugarNode& s, std::size_t i) {
    if (auto* v = std::get_if<std::int64_t>(&s.args[i])) return *v;
    bad(s, "argument " + std::to_string(i + 1) + " must be an integer");
}

Node arg_node(const SugarNode& s, std::size_t i) {
    if (auto* v = std::get_if<Node>(&s.args[i])) return *v;
    if (auto* v = std::get_if<std::string>(&s.args[i])) return markup::text(*v);
    if (auto* v = std::get_if<NodeList>(&s.args[i])) return markup::seq(*v);
    bad(s, "argument " + std::to_string(i + 1) + " must be markup");
}

const NodeList& arg_nodes(const SugarNode& s, std::size_t i) {
    if (auto* v = std::get_if<NodeList>(&s.args[i])) return *v;
    bad(s, "argument " + std::to_string(i + 1) + " must be a list of markup terms");
}

const AttrList& arg_attrs(const SugarNode& s, std::size_t i) {
    if (auto* v = std::get_if<AttrList>(&s.args[i])) return *v;
    bad(s, "argument " + std::to_string(i + 1) + " must be an attribute list");
}

const std::vector<NodeList>& arg_defs(const SugarNode& s, std::size_t i) {
    if (auto* v = std::get_if<std::vector<NodeList>>(&s.args[i])) return *v;
    bad(s, "argument " + std::to_string(i + 1) + " must be a list of definition sequences");
}

const StrList& arg_strs(const SugarNode& s, std::size_t i) {
    if (auto* v = std::get_if<StrList>(&s.args[i])) return *v;
    bad(s, "argument " + std::to_string(i + 1) + " must be a list of string tokens");
}

const term::Term& arg_term(const SugarNode& s, std::size_t i) {
    if (auto* v = std::get_if<term::Term>(&s.args[i])) return *v;
    bad(s, "argument " + std::to_string(i + 1) + " must be a symbolic term");
}

std::string escape_verbatim(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    for (char c : in) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

void collect_plain_text(const SugarNode& s, const Node& n, std::string& out) {
    if (n.is<markup::Text>()) {
        out += n.as<markup::Text>().content;
        return;
    }
    if (n.is<markup::Sequence>()) {
        for (const auto& item : n.as<markup::Sequence>().items) collect_plain_text(s, item, out);
        return;
    }
    bad(s, "expects plain text content");
}

struct Logo {
    std::string image = "images/powered.gif";
    std::string href;
    std::string alt = "Developed with the termweb library";
};

std::shared_mutex logo_mutex;
Logo logo_config;

Logo current_logo() {
    std::shared_lock lock(logo_mutex);
    return logo_config;
}

Node begin_fragment(const std::string& name, const AttrList& attrs) {
    return markup::raw("<" + name + markup::attrs_text(attrs) + ">");
}

// ---- built-in table ---------------------------------------------------

// Argument shapes, used both for validation and for reading sugar heads
// back from term text.
enum class ArgKind { Str, Int, Markup, Markups, Attrs, Defs, Strs, Symbolic };

struct Builtin {
    std::vector<ArgKind> shape;
    Rewrite rewrite;
};

// ArgKind::Markups items are inspected before their own expansion so the
// selected(...) marker is still visible here.
Node expand_menu(const SugarNode& s) {
    AttrList attrs{{"name", arg_str(s, 0)}};
    const AttrList& extra = arg_attrs(s, 1);
    attrs.insert(attrs.end(), extra.begin(), extra.end());
    NodeList body;
    for (const auto& item : arg_nodes(s, 2)) {
        bool is_selected = item.is_sugar() && item.sugar().name == "selected" &&
                           item.sugar().args.size() == 1;
        AttrList opt_attrs;
        if (is_selected) opt_attrs.push_back(Attr("selected"));
        Node content = is_selected ? arg_node(item.sugar(), 0) : item;
        body.push_back(markup::env("option", std::move(opt_attrs), {std::move(content)}));
    }
    return markup::env("select", std::move(attrs), std::move(body));
}


const std::map<std::pair<std::string, std::size_t>, Builtin>& builtins() {
    static const std::map<std::pair<std::string, std::size_t>, Builtin> table = [] {
        std::map<std::pair<std::string, std::size_t>, Builtin> t;
        auto add = [&t](const char* name, std::vector<ArgKind> shape, Rewrite fn) {
            std::size_t arity = shape.size();
            t.emplace(std::make_pair(std::string(name), arity),
                      Builtin{std::move(shape), std::move(fn)});
        };

        add("start", {}, [](const SugarNode&) { return markup::raw("<html>"); });
        add("end", {}, [](const SugarNode&) { return markup::raw("</html>"); });
        add("hrule", {}, [](const SugarNode&) { return markup::elem("hr"); });
        add("linebreak", {}, [](const SugarNode&) { return markup::elem("br"); });
        add("parbreak", {}, [](const SugarNode&) { return markup::elem("p"); });
        add("nl", {}, [](const SugarNode&) { return markup::text("\n"); });
        add("cgi_reply", {},
            [](const SugarNode&) { return markup::text("Content-type: text/html\n\n"); });
        add("pr", {}, [](const SugarNode&) {
            Logo logo = current_logo();
            Node img = markup::elem("img", {{"src", logo.image}, {"alt", logo.alt}});
            if (logo.href.empty()) return img;
            return markup::env("a", {{"href", logo.href}}, {std::move(img)});
        });

        add("image", {ArgKind::Str}, [](const SugarNode& s) {
            return markup::elem("img", {{"src", arg_str(s, 0)}});
        });
        add("image", {ArgKind::Str, ArgKind::Attrs}, [](const SugarNode& s) {
            AttrList attrs{{"src", arg_str(s, 0)}};
            const AttrList& extra = arg_attrs(s, 1);
            attrs.insert(attrs.end(), extra.begin(), extra.end());
            return markup::elem("img", std::move(attrs));
        });
        add("ref", {ArgKind::Str, ArgKind::Markup}, [](const SugarNode& s) {
            return markup::env("a", {{"href", arg_str(s, 0)}}, {arg_node(s, 1)});
        });
        add("label", {ArgKind::Str, ArgKind::Markup}, [](const SugarNode& s) {
            return markup::env("a", {{"name", arg_str(s, 0)}}, {arg_node(s, 1)});
        });
        add("heading", {ArgKind::Int, ArgKind::Markup}, [](const SugarNode& s) {
            std::int64_t level = arg_int(s, 0);
            if (level < 1 || level > 6) bad(s, "level must be between 1 and 6");
            return markup::env("h" + std::to_string(level), {}, {arg_node(s, 1)});
        });
        add("itemize", {ArgKind::Markups}, [](const SugarNode& s) {
            NodeList body;
            for (const auto& item : arg_nodes(s, 0))
                body.push_back(markup::env("li", {}, {item}));
            return markup::env("ul", {}, std::move(body));
        });
        add("enumerate", {ArgKind::Markups}, [](const SugarNode& s) {
            NodeList body;
            for (const auto& item : arg_nodes(s, 0))
                body.push_back(markup::env("li", {}, {item}));
            return markup::env("ol", {}, std::move(body));
        });
        add("description", {ArgKind::Defs}, [](const SugarNode& s) {
            NodeList body;
            for (const auto& def : arg_defs(s, 0)) {
                if (def.empty()) bad(s, "definition sequences must be non-empty");
                for (std::size_t i = 0; i + 1 < def.size(); ++i)
                    body.push_back(markup::env("dt", {}, {def[i]}));
                body.push_back(markup::env("dd", {}, {def.back()}));
            }
            return markup::env("dl", {}, std::move(body));
        });
        add("nice_itemize", {ArgKind::Str, ArgKind::Markups}, [](const SugarNode& s) {
            const std::string& bullet = arg_str(s, 0);
            NodeList rows;
            for (const auto& item : arg_nodes(s, 1)) {
                rows.push_back(markup::elem("img", {{"src", bullet}}));
                rows.push_back(markup::text(" "));
                rows.push_back(item);
                rows.push_back(markup::elem("br"));
            }
            return markup::seq(std::move(rows));
        });
        add("preformatted", {ArgKind::Markups}, [](const SugarNode& s) {
            NodeList body;
            for (const auto& line : arg_nodes(s, 0)) {
                body.push_back(line);
                body.push_back(markup::text("\n"));
            }
            return markup::env("pre", {}, std::move(body));
        });
        add("verbatim", {ArgKind::Markup}, [](const SugarNode& s) {
            std::string content;
            collect_plain_text(s, arg_node(s, 0), content);
            return markup::raw(escape_verbatim(content));
        });
        add("prolog_term", {ArgKind::Symbolic}, [](const SugarNode& s) {
            return markup::text(prolog_term_text(arg_term(s, 0)));
        });
        add("entity", {ArgKind::Str}, [](const SugarNode& s) {
            return markup::raw("&" + arg_str(s, 0) + ";");
        });
        add("begin", {ArgKind::Str}, [](const SugarNode& s) {
            return begin_fragment(arg_str(s, 0), {});
        });
        add("begin", {ArgKind::Str, ArgKind::Attrs}, [](const SugarNode& s) {
            return begin_fragment(arg_str(s, 0), arg_attrs(s, 1));
        });
        add("end", {ArgKind::Str}, [](const SugarNode& s) {
            return markup::raw("</" + arg_str(s, 0) + ">");
        });

        add("start_form", {}, [](const SugarNode&) {
            return begin_fragment("form", {Attr("method", "POST")});
        });
        add("start_form", {ArgKind::Str}, [](const SugarNode& s) {
            return begin_fragment("form", {Attr("method", "POST"), Attr("action", arg_str(s, 0))});
        });
        add("start_form", {ArgKind::Str, ArgKind::Attrs}, [](const SugarNode& s) {
            AttrList attrs{Attr("action", arg_str(s, 0))};
            const AttrList& extra = arg_attrs(s, 1);
            attrs.insert(attrs.end(), extra.begin(), extra.end());
            return begin_fragment("form", attrs);
        });
        add("end_form", {}, [](const SugarNode&) { return markup::raw("</form>"); });
        add("checkbox", {ArgKind::Str, ArgKind::Str}, [](const SugarNode& s) {
            AttrList attrs{{"type", "checkbox"}, {"name", arg_str(s, 0)}};
            if (arg_str(s, 1) == "on") attrs.push_back(Attr("checked"));
            return markup::elem("input", std::move(attrs));
        });
        add("radio", {ArgKind::Str, ArgKind::Str, ArgKind::Str}, [](const SugarNode& s) {
            AttrList attrs{{"type", "radio"}, {"name", arg_str(s, 0)}, {"value", arg_str(s, 1)}};
            if (arg_str(s, 2) == arg_str(s, 1)) attrs.push_back(Attr("checked"));
            return markup::elem("input", std::move(attrs));
        });
        add("input", {ArgKind::Str, ArgKind::Attrs}, [](const SugarNode& s) {
            AttrList attrs{{"type", arg_str(s, 0)}};
            const AttrList& extra = arg_attrs(s, 1);
            attrs.insert(attrs.end(), extra.begin(), extra.end());
            return markup::elem("input", std::move(attrs));
        });
        add("textinput", {ArgKind::Str, ArgKind::Attrs, ArgKind::Markup}, [](const SugarNode& s) {
            AttrList attrs{{"name", arg_str(s, 0)}};
            const AttrList& extra = arg_attrs(s, 1);
            attrs.insert(attrs.end(), extra.begin(), extra.end());
            return markup::env("textarea", std::move(attrs), {arg_node(s, 2)});
        });
        add("option", {ArgKind::Str, ArgKind::Str, ArgKind::Strs}, [](const SugarNode& s) {
            const StrList& options = arg_strs(s, 2);
            const std::string& chosen = arg_str(s, 1);
            bool found = std::find(options.begin(), options.end(), chosen) != options.end();
            NodeList body;
            for (std::size_t i = 0; i < options.size(); ++i) {
                AttrList attrs;
                bool is_chosen = found ? options[i] == chosen : i == 0;
                if (is_chosen) attrs.push_back(Attr("selected"));
                body.push_back(markup::env("option", std::move(attrs), {markup::text(options[i])}));
            }
            return markup::env("select", {{"name", arg_str(s, 0)}}, std::move(body));
        });
        add("menu", {ArgKind::Str, ArgKind::Attrs, ArgKind::Markups}, expand_menu);
        add("selected", {ArgKind::Markup}, [](const SugarNode& s) -> Node {
            bad(s, "only valid as a menu item marker");
        });

        return t;
    }();
    return table;
}

const std::set<std::string>& reserved_heads() {
    static const std::set<std::string> reserved = {
        "text", "element", "environment", "env", "comment", "declare", "declaration",
        "sequence", "slot", "raw", "="};
    return reserved;
}

}  // namespace

// ---- constructors -----------------------------------------------------

Node start() { return make_sugar("start", {}); }
Node end() { return make_sugar("end", {}); }
Node hrule() { return make_sugar("hrule", {}); }
Node linebreak() { return make_sugar("linebreak", {}); }
Node parbreak() { return make_sugar("parbreak", {}); }
Node nl() { return make_sugar("nl", {}); }
Node image(std::string addr) { return make_sugar("image", {std::move(addr)}); }
Node image(std::string addr, AttrList attrs) {
    return make_sugar("image", {std::move(addr), std::move(attrs)});
}
Node ref(std::string addr, Node body) {
    return make_sugar("ref", {std::move(addr), std::move(body)});
}
Node label(std::string name, Node body) {
    return make_sugar("label", {std::move(name), std::move(body)});
}
Node heading(std::int64_t level, Node body) {
    return make_sugar("heading", {level, std::move(body)});
}
Node itemize(NodeList items) { return make_sugar("itemize", {std::move(items)}); }
Node enumerate(NodeList items) { return make_sugar("enumerate", {std::move(items)}); }
Node description(std::vector<NodeList> defs) {
    return make_sugar("description", {std::move(defs)});
}
Node nice_itemize(std::string bullet_image, NodeList items) {
    return make_sugar("nice_itemize", {std::move(bullet_image), std::move(items)});
}
Node preformatted(NodeList lines) { return make_sugar("preformatted", {std::move(lines)}); }
Node verbatim(Node content) { return make_sugar("verbatim", {std::move(content)}); }
Node verbatim(std::string content) { return verbatim(markup::text(std::move(content))); }
Node prolog_term(term::Term value) { return make_sugar("prolog_term", {std::move(value)}); }
Node entity(std::string name) { return make_sugar("entity", {std::move(name)}); }
Node cgi_reply() { return make_sugar("cgi_reply", {}); }
Node pr() { return make_sugar("pr", {}); }
Node begin_tag(std::string name) { return make_sugar("begin", {std::move(name)}); }
Node begin_tag(std::string name, AttrList attrs) {
    return make_sugar("begin", {std::move(name), std::move(attrs)});
}
Node end_tag(std::string name) { return make_sugar("end", {std::move(name)}); }

Node start_form() { return make_sugar("start_form", {}); }
Node start_form(std::string handler_url) {
    return make_sugar("start_form", {std::move(handler_url)});
}
Node start_form(std::string handler_url, AttrList attrs) {
    return make_sugar("start_form", {std::move(handler_url), std::move(attrs)});
}
Node end_form() { return make_sugar("end_form", {}); }
Node checkbox(std::string name, std::string state) {
    return make_sugar("checkbox", {std::move(name), std::move(state)});
}
Node radio(std::string name, std::string value, std::string selected_value) {
    return make_sugar("radio", {std::move(name), std::move(value), std::move(selected_value)});
}
Node input(std::string type, AttrList attrs) {
    return make_sugar("input", {std::move(type), std::move(attrs)});
}
Node textinput(std::string name, AttrList attrs, Node body) {
    return make_sugar("textinput", {std::move(name), std::move(attrs), std::move(body)});
}
Node option(std::string name, std::string selected_value, StrList options) {
    return make_sugar("option",
                      {std::move(name), std::move(selected_value), std::move(options)});
}
Node menu(std::string name, AttrList attrs, NodeList items) {
    return make_sugar("menu", {std::move(name), std::move(attrs), std::move(items)});
}
Node selected(Node item) { return make_sugar("selected", {std::move(item)}); }

void set_logo(std::string image_path, std::string href, std::string alt) {
    std::unique_lock lock(logo_mutex);
    logo_config = Logo{std::move(image_path), std::move(href), std::move(alt)};
}

// ---- expansion engine --------------------------------------------------

void ExpansionRegistry::register_expansion(const std::string& name, std::size_t arity,
                                           Rewrite fn) {
    if (reserved_heads().count(name))
        throw ReservedHead("'" + name + "' is a core constructor");
    std::unique_lock lock(mutex_);
    user_[{name, arity}] = std::move(fn);
}

Rewrite ExpansionRegistry::lookup(const std::string& name, std::size_t arity) const {
    {
        std::shared_lock lock(mutex_);
        auto it = user_.find({name, arity});
        if (it != user_.end()) return it->second;
    }
    auto it = builtins().find({name, arity});
    if (it != builtins().end()) return it->second.rewrite;
    return nullptr;
}

Node ExpansionRegistry::expand_one(const Node& node, int depth) const {
    if (node.is_sugar()) {
        const SugarNode& s = node.sugar();
        if (depth >= kMaxExpansionDepth)
            throw ExpansionDepthExceeded("expanding " + head_of(s));
        Rewrite rule = lookup(s.name, s.args.size());
        if (!rule) throw MalformedSugar("unknown constructor " + head_of(s));
        return expand_one(rule(s), depth + 1);
    }
    if (node.is<markup::Environment>()) {
        const auto& e = node.as<markup::Environment>();
        NodeList body;
        body.reserve(e.body.size());
        for (const auto& item : e.body) body.push_back(expand_one(item, depth));
        return markup::env(e.name, e.attrs, std::move(body));
    }
    if (node.is<markup::Sequence>()) {
        NodeList items;
        for (const auto& item : node.as<markup::Sequence>().items)
            items.push_back(expand_one(item, depth));
        return markup::seq(std::move(items));
    }
    return node;
}

Node ExpansionRegistry::expand(const Node& node) const { return expand_one(node, 0); }

NodeList ExpansionRegistry::expand(const NodeList& nodes) const {
    NodeList out;
    out.reserve(nodes.size());
    for (const auto& node : nodes) out.push_back(expand_one(node, 0));
    return out;
}

void ExpansionRegistry::expand_normalize_into(const Node& node, NodeList& out, int depth) const {
    if (node.is_sugar()) {
        const SugarNode& s = node.sugar();
        if (depth >= kMaxExpansionDepth)
            throw ExpansionDepthExceeded("expanding " + head_of(s));
        Rewrite rule = lookup(s.name, s.args.size());
        if (!rule) throw MalformedSugar("unknown constructor " + head_of(s));
        expand_normalize_into(rule(s), out, depth + 1);
        return;
    }
    if (node.is<markup::Sequence>()) {
        for (const auto& item : node.as<markup::Sequence>().items)
            expand_normalize_into(item, out, depth);
        return;
    }
    if (node.is<markup::SlotUse>()) {
        expand_normalize_into(node.as<markup::SlotUse>().ref->value(), out, depth);
        return;
    }
    if (node.is<markup::Environment>()) {
        const auto& e = node.as<markup::Environment>();
        NodeList body;
        for (const auto& item : e.body) expand_normalize_into(item, body, depth);
        out.push_back(markup::env(e.name, e.attrs, std::move(body)));
        return;
    }
    out.push_back(node);
}

NodeList ExpansionRegistry::expand_normalize(const Node& node) const {
    NodeList out;
    expand_normalize_into(node, out, 0);
    return out;
}

NodeList ExpansionRegistry::expand_normalize(const NodeList& nodes) const {
    NodeList out;
    for (const auto& node : nodes) expand_normalize_into(node, out, 0);
    return out;
}

ExpansionRegistry& ExpansionRegistry::global() {
    static ExpansionRegistry registry;
    return registry;
}

void register_expansion(const std::string& name, std::size_t arity, Rewrite fn) {
    ExpansionRegistry::global().register_expansion(name, arity, std::move(fn));
}
Node expand(const Node& node) { return ExpansionRegistry::global().expand(node); }
NodeList expand(const NodeList& nodes) { return ExpansionRegistry::global().expand(nodes); }
NodeList expand_normalize(const Node& node) {
    return ExpansionRegistry::global().expand_normalize(node);
}
NodeList expand_normalize(const NodeList& nodes) {
    return ExpansionRegistry::global().expand_normalize(nodes);
}

std::string prolog_term_text(const term::Term& value) { return term::to_text(value); }

// ---- term text -> markup ------------------------------------------------

namespace {

std::string term_token_text(const term::Term& t) {
    switch (t.kind()) {
    case term::Term::Kind::Atom:
    case term::Term::Kind::String: return t.text();
    case term::Term::Kind::Int: return std::to_string(t.int_value());
    case term::Term::Kind::Float: return term::to_text(t);
    default: throw Error("expected a string token, got " + term::to_text(t));
    }
}

AttrList attrs_from_term(const term::Term& t) {
    if (!t.is_list()) throw Error("expected an attribute list, got " + term::to_text(t));
    AttrList attrs;
    for (const auto& item : t.items()) {
        if (item.is_atom()) {
            attrs.push_back(Attr(item.text()));
        } else if (item.is_compound() && item.name() == "=" && item.args().size() == 2) {
            attrs.push_back(Attr(term_token_text(item.args()[0]), term_token_text(item.args()[1])));
        } else {
            throw Error("bad attribute " + term::to_text(item));
        }
    }
    return attrs;
}

markup::SugarArg sugar_arg_from_term(const term::Term& t, ArgKind kind) {
    switch (kind) {
    case ArgKind::Str: return term_token_text(t);
    case ArgKind::Int:
        if (t.kind() != term::Term::Kind::Int)
            throw Error("expected an integer, got " + term::to_text(t));
        return t.int_value();
    case ArgKind::Markup: return node_from_term(t);
    case ArgKind::Markups: return nodes_from_term(t);
    case ArgKind::Attrs: return attrs_from_term(t);
    case ArgKind::Defs: {
        if (!t.is_list()) throw Error("expected a list of lists, got " + term::to_text(t));
        std::vector<NodeList> defs;
        for (const auto& item : t.items()) defs.push_back(nodes_from_term(item));
        return defs;
    }
    case ArgKind::Strs: {
        if (!t.is_list()) throw Error("expected a list of tokens, got " + term::to_text(t));
        StrList out;
        for (const auto& item : t.items()) out.push_back(term_token_text(item));
        return out;
    }
    case ArgKind::Symbolic: return t;
    }
    throw Error("unreachable");
}

bool attr_shaped(const term::Term& t) {
    if (!t.is_list()) return false;
    for (const auto& item : t.items()) {
        if (item.is_atom()) continue;
        if (item.is_compound() && item.name() == "=" && item.args().size() == 2) continue;
        return false;
    }
    return true;
}

}  // namespace

Node node_from_term(const term::Term& t) {
    using K = term::Term::Kind;
    switch (t.kind()) {
    case K::String: return markup::text(t.text());
    case K::Int:
    case K::Float: return markup::text(term::to_text(t));
    case K::Placeholder: throw Error("placeholder has no markup meaning");
    case K::List: return markup::seq(nodes_from_term(t));
    case K::Atom: {
        const std::string& name = t.text();
        if (builtins().count({name, 0})) return make_sugar(name, {});
        return markup::text(name);
    }
    case K::Compound: break;
    }

    const std::string& name = t.name();
    const term::TermList& args = t.args();

    // core constructors
    if (name == "text" && args.size() == 1) return markup::text(term_token_text(args[0]));
    if (name == "element" && args.size() == 2)
        return markup::elem(term_token_text(args[0]), attrs_from_term(args[1]));
    if ((name == "env" || name == "environment") && args.size() == 3)
        return markup::env(term_token_text(args[0]), attrs_from_term(args[1]),
                           nodes_from_term(args[2]));
    if (name == "comment" && args.size() == 1) return markup::comment(term_token_text(args[0]));
    if ((name == "declare" || name == "declaration") && args.size() == 1)
        return markup::declare(term_token_text(args[0]));
    if (name == "raw" && args.size() == 1) return markup::raw(term_token_text(args[0]));
    if (name == "=") throw Error("attribute pair outside an attribute list");

    // sugar constructors with known shapes
    auto it = builtins().find({name, args.size()});
    if (it != builtins().end()) {
        std::vector<markup::SugarArg> sargs;
        for (std::size_t i = 0; i < args.size(); ++i)
            sargs.push_back(sugar_arg_from_term(args[i], it->second.shape[i]));
        return make_sugar(name, std::move(sargs));
    }

    // the general environment readings: name(Body), name(Attrs,Body)
    if (args.size() == 1) return markup::env(name, {}, nodes_from_term(args[0]));
    if (args.size() == 2 && attr_shaped(args[0]))
        return markup::env(name, attrs_from_term(args[0]), nodes_from_term(args[1]));

    throw Error("term has no markup meaning: " + term::to_text(t));
}

NodeList nodes_from_term(const term::Term& t) {
    if (t.is_list()) {
        NodeList out;
        for (const auto& item : t.items()) out.push_back(node_from_term(item));
        return out;
    }
    return {node_from_term(t)};
}

}  // namespace termweb::sugar
