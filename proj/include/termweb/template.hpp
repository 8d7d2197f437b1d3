#pragma once

#include <filesystem>
#include <string>
#include <utility>

#include "termweb/html_codec.hpp"
#include "termweb/markup.hpp"

namespace termweb::tmpl {

using markup::NodeList;
using markup::TemplateDict;

class UnknownName : public Error {
public:
    explicit UnknownName(const std::string& name) : Error("no template slot named '" + name + "'"),
                                                    name(name) {}
    std::string name;
};

struct Template {
    NodeList terms;
    TemplateDict dict;
};

/// Parses markup text in which <V>name</V> marks a named slot.  Repeated
/// names share one slot; the dictionary lists first occurrences in
/// order.  Everything else parses exactly as codec::parse does.
Template parse_template(const std::string& text);

/// Binds dict entries by name.  Throws UnknownName for a name not in
/// the dictionary and markup::AlreadyBound on a second binding.
void fill(const TemplateDict& dict, const std::vector<std::pair<std::string, markup::Node>>& bindings);

/// Reads a whole file as bytes.
std::string file_to_string(const std::filesystem::path& path);

}  // namespace termweb::tmpl
