#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "termweb/error.hpp"

namespace termweb::forms {

class MalformedInput : public Error {
public:
    MalformedInput(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset(offset) {}
    std::size_t offset;
};

class MissingEnv : public Error {
public:
    explicit MissingEnv(const std::string& variable)
        : Error("missing CGI variable " + variable) {}
};

class UnknownMethod : public Error {
public:
    explicit UnknownMethod(const std::string& method)
        : Error("unsupported request method '" + method + "'") {}
};

class Unencodable : public Error {
public:
    explicit Unencodable(const std::string& what) : Error(what) {}
};

/// A decoded form value.  Empty submissions become the empty marker,
/// raw values with a line break become a line list, numeric-looking
/// values become numbers (the numeral text is kept verbatim), the rest
/// are plain tokens.
class FormValue {
public:
    enum class Kind { Empty, Number, Token, Lines };

    static FormValue empty();
    static FormValue number(std::string numeral);
    static FormValue token(std::string text);
    static FormValue lines(std::vector<std::string> lines);

    /// Types a raw decoded value per the rules above.
    static FormValue of_raw(const std::string& raw);

    Kind kind() const { return kind_; }
    bool is_empty_marker() const { return kind_ == Kind::Empty; }

    /// Token text or numeral text; empty string for the empty marker,
    /// lines joined with '\n' for line lists.
    std::string text() const;
    double number_value() const;  // pre: kind() == Number
    const std::vector<std::string>& line_list() const { return lines_; }

    bool operator==(const FormValue&) const = default;

private:
    Kind kind_ = Kind::Empty;
    std::string text_;
    std::vector<std::string> lines_;
};

/// Ordered attribute=value pairs; duplicates allowed and retained.
using FormDict = std::vector<std::pair<std::string, FormValue>>;

/// The CGI environment a form handler reads.  Fields are absent when
/// the server did not pass them.
struct CgiEnv {
    std::optional<std::string> request_method;
    std::optional<std::string> query_string;
    std::optional<std::string> content_type;
    std::optional<std::string> content_length;
    std::optional<std::string> script_name;
    std::optional<std::string> server_name;
    std::optional<std::string> server_port;
    std::string body;

    /// Captures the process environment; reads exactly CONTENT_LENGTH
    /// bytes of `body_source` when a POST body is announced.
    static CgiEnv capture(std::istream& body_source);
};

enum class Method { Get, Post };

/// Decodes GET query strings, POST urlencoded bodies and POST
/// multipart/form-data into a dictionary.  Absent or foreign input
/// gives an empty dictionary.
FormDict get_form_input(const CgiEnv& env);

/// First value for `attribute`; the empty marker when not found.
/// Total: never raises.
FormValue get_form_value(const FormDict& dict, const std::string& attribute);

/// True for the empty marker and for token/line values that are all
/// whitespace (space, tab, CR, LF).
bool form_empty_value(const FormValue& value);

/// `value` unless it is empty per form_empty_value, else `fallback`.
FormValue form_default(const FormValue& value, const FormValue& fallback);

/// The URL of this CGI executable, rebuilt from the environment.
std::string my_url(const CgiEnv& env);

Method form_request_method(const CgiEnv& env);

/// Renders a dictionary as a query string (the inverse of GET
/// decoding).  Line lists are not encodable.
std::string url_query(const FormDict& dict);

/// Decodes one urlencoded query string (exposed for reuse and testing).
FormDict decode_urlencoded(const std::string& text);

}  // namespace termweb::forms
