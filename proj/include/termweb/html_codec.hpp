#pragma once

#include <iosfwd>
#include <string>

#include "termweb/markup.hpp"

namespace termweb::codec {

using markup::Node;
using markup::NodeList;

/// Raised only in XML mode, on tag mismatch or missing closure.
class XmlSyntax : public Error {
public:
    explicit XmlSyntax(const std::string& what) : Error(what) {}
};

enum class Dialect { Html, Xml };

/// Markup text from terms: expand, normalize, serialize.  HTML mode
/// lowercases names and renders flags bare; XML mode preserves case,
/// renders elements self-closing and flags as name="name".
std::string render(const Node& node, Dialect dialect = Dialect::Html);
std::string render(const NodeList& nodes, Dialect dialect = Dialect::Html);

void render_to_stream(const Node& node, Dialect dialect, std::ostream& sink);
void render_to_stream(const NodeList& nodes, Dialect dialect, std::ostream& sink);

/// Terms from markup text.  The result is normalized: only text,
/// element, environment, comment and declaration nodes appear.  HTML
/// mode never raises — malformed input is recovered (unmatched end tags
/// dropped, unclosed environments closed at the end of the enclosing
/// scope).  XML mode raises XmlSyntax on tag mismatch.
NodeList parse(const std::string& text, Dialect dialect = Dialect::Html);

}  // namespace termweb::codec
