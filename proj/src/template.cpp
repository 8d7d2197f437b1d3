#include "termweb/template.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace termweb::tmpl {

namespace {

using markup::Node;
using markup::SlotRef;

// Replaces <V>name</V> environments (parsed as env "v" with a single
// text child) by slots; collects the name dictionary as it goes.
Node substitute(const Node& node, TemplateDict& dict,
                std::map<std::string, SlotRef>& by_name) {
    if (!node.is<markup::Environment>()) return node;
    const auto& e = node.as<markup::Environment>();
    if (e.name == "v" && e.attrs.empty() && e.body.size() == 1 &&
        e.body[0].is<markup::Text>()) {
        const std::string& name = e.body[0].as<markup::Text>().content;
        auto it = by_name.find(name);
        if (it == by_name.end()) {
            it = by_name.emplace(name, markup::new_slot(name)).first;
            dict.emplace_back(name, it->second);
        }
        return markup::slot(it->second);
    }
    NodeList body;
    body.reserve(e.body.size());
    for (const auto& child : e.body) body.push_back(substitute(child, dict, by_name));
    return markup::env(e.name, e.attrs, std::move(body));
}

}  // namespace

Template parse_template(const std::string& text) {
    Template out;
    std::map<std::string, SlotRef> by_name;
    for (const auto& node : codec::parse(text, codec::Dialect::Html))
        out.terms.push_back(substitute(node, out.dict, by_name));
    return out;
}

void fill(const TemplateDict& dict,
          const std::vector<std::pair<std::string, markup::Node>>& bindings) {
    for (const auto& [name, value] : bindings) {
        const SlotRef* found = nullptr;
        for (const auto& [entry_name, slot] : dict) {
            if (entry_name == name) {
                found = &slot;
                break;
            }
        }
        if (!found) throw UnknownName(name);
        (*found)->bind(value);
    }
}

std::string file_to_string(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

}  // namespace termweb::tmpl
