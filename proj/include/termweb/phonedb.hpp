#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "termweb/actmod.hpp"
#include "termweb/markup.hpp"

namespace termweb::phonedb {

/// The demo telephone directory behind both the CGI handler and the
/// active module.
class PhoneBook {
public:
    PhoneBook();  // seeded with the demo entries

    std::optional<std::string> lookup(const std::string& name) const;
    void add(std::string name, std::string phone);

    /// Markup for the answer shown above the query form: nothing for a
    /// blank name, the number when known, an apology otherwise.
    markup::NodeList response(const std::string& name) const;

private:
    std::map<std::string, std::string> entries_;
};

/// Exports response/2 and add_phone/2 over a shared book.
actmod::Registry make_registry(std::shared_ptr<PhoneBook> book);

/// The complete demo page around a response fragment, CGI content
/// header included.
markup::NodeList page(const markup::NodeList& response);

}  // namespace termweb::phonedb
