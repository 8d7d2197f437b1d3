#include "termweb/phonedb.hpp"

#include "termweb/sugar.hpp"

namespace termweb::phonedb {

using markup::Node;
using markup::NodeList;

namespace {

bool blank(const std::string& s) {
    for (char c : s)
        if (c != ' ' && c != '\t' && c != '\r' && c != '\n') return false;
    return true;
}

std::string text_of(const term::Term& t) {
    if (t.is_string() || t.is_atom()) return t.text();
    throw Error("expected a name, got " + term::to_text(t));
}

}  // namespace

PhoneBook::PhoneBook() {
    entries_ = {
        {"daniel", "336-7448"},
        {"manuel", "336-7435"},
        {"sacha", "543-5316"},
    };
}

std::optional<std::string> PhoneBook::lookup(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void PhoneBook::add(std::string name, std::string phone) {
    entries_[std::move(name)] = std::move(phone);
}

NodeList PhoneBook::response(const std::string& name) const {
    if (blank(name)) return {};
    if (auto phone = lookup(name)) {
        return {markup::text("Telephone number of "),
                markup::env("b", {}, {markup::text(name)}), markup::text(": "),
                markup::text(*phone), sugar::parbreak()};
    }
    return {markup::text("No telephone number available for "),
            markup::env("b", {}, {markup::text(name)}), markup::text("."), sugar::parbreak()};
}

actmod::Registry make_registry(std::shared_ptr<PhoneBook> book) {
    actmod::Registry registry;
    registry.add("response", 2, [book](const term::TermList& args) -> actmod::CallOutcome {
        std::string name = text_of(args[0]);
        term::Term response = markup::to_term(sugar::expand_normalize(book->response(name)));
        return actmod::CallOutcome::success({args[0], std::move(response)});
    });
    registry.add(
        "add_phone", 2,
        [book](const term::TermList& args) -> actmod::CallOutcome {
            book->add(text_of(args[0]), text_of(args[1]));
            return actmod::CallOutcome::success(args);
        },
        /*mutating=*/true);
    return registry;
}

NodeList page(const NodeList& response) {
    NodeList terms = {
        sugar::cgi_reply(),
        sugar::start(),
        markup::env("title", {}, {markup::text("Telephone database")}),
        sugar::image("phone.gif"),
        sugar::heading(2, markup::text("Telephone database")),
        sugar::hrule(),
    };
    terms.insert(terms.end(), response.begin(), response.end());
    terms.push_back(sugar::start_form());
    terms.push_back(markup::text("Click here, enter name of clip member, and press Return:"));
    terms.push_back(sugar::linebreak());
    terms.push_back(sugar::input("text", {{"name", "person_name"}, {"size", "20"}}));
    terms.push_back(sugar::end_form());
    terms.push_back(sugar::end());
    return terms;
}

}  // namespace termweb::phonedb
