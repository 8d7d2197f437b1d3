#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "termweb/error.hpp"
#include "termweb/url.hpp"

namespace termweb::http {

class ProtocolError : public Error {
public:
    explicit ProtocolError(const std::string& what) : Error(what) {}
};

class OverLimit : public Error {
public:
    explicit OverLimit(const std::string& what) : Error(what) {}
};

class BadDate : public Error {
public:
    explicit BadDate(const std::string& what) : Error(what) {}
};

/// A calendar date as the library models it: full weekday and month
/// names plus a "HH:MM:SS" time.  The wire form is RFC 1123.
struct HttpDate {
    std::string weekday;  // "Tuesday"
    int day = 1;
    std::string month;  // "January"
    int year = 1970;
    std::string time;  // "06:14:02"

    bool operator==(const HttpDate&) const = default;
};

/// "Tue, 15 Jan 1985 06:14:02 GMT".  Throws BadDate on an invalid
/// calendar value.
std::string format_http_date(const HttpDate& date);

/// Accepts RFC 1123 and RFC 850 forms, mapping abbreviated names back
/// to full ones.  Throws BadDate.
HttpDate parse_http_date(const std::string& text);

// ---- request options --------------------------------------------------

struct Head {};
struct TimeoutAfter {
    int seconds;
};
struct IfModifiedSince {
    HttpDate date;
};
struct UserAgent {
    std::string name;
};
struct Authorization {
    std::string scheme;
    std::string params;
};
struct RequestField {
    std::string name;
    std::string value;
};

using RequestOption =
    std::variant<Head, TimeoutAfter, IfModifiedSince, UserAgent, Authorization, RequestField>;
using RequestOptions = std::vector<RequestOption>;

// ---- response parameters ------------------------------------------------

enum class StatusClass {
    Informational,
    Success,
    Redirection,
    RequestError,
    ServerError,
    ExtensionCode,
};

/// 1xx..5xx ranges map to the five named classes; anything else is an
/// extension code.  Total over all integers.
StatusClass status_class(int code);
std::string to_string(StatusClass cls);

struct Content {
    std::string bytes;
};
struct Status {
    StatusClass cls;
    int code;
    std::string phrase;
};
struct Pragma {
    std::string data;
};
struct MessageDate {
    HttpDate date;
};
struct Location {
    std::string url;
};
struct HttpServer {
    std::string name;
};
struct Allow {
    std::vector<std::string> methods;
};
struct LastModified {
    HttpDate date;
};
struct Expires {
    HttpDate date;
};
struct ContentType {
    std::string type;
    std::string subtype;
    std::vector<std::pair<std::string, std::string>> params;
};
struct ContentEncoding {
    std::string encoding;
};
struct ContentLength {
    std::uint64_t length;
};
struct Authenticate {
    std::vector<std::string> challenges;
};
struct ResponseField {
    std::string name;
    std::string value;
};

using ResponseParam =
    std::variant<Content, Status, Pragma, MessageDate, Location, HttpServer, Allow, LastModified,
                 Expires, ContentType, ContentEncoding, ContentLength, Authenticate, ResponseField>;
using ResponseParams = std::vector<ResponseParam>;

/// Looks up the first parameter of a given kind; nullptr when absent.
template <class T>
const T* find_param(const ResponseParams& params) {
    for (const auto& p : params)
        if (const T* v = std::get_if<T>(&p)) return v;
    return nullptr;
}

/// Fetches `url` over one HTTP/1.0 connection (GET, or HEAD with the
/// head option).  Redirects are not followed; the location parameter is
/// returned instead.  Raises termweb::Timeout, termweb::ConnectFailed,
/// ProtocolError or OverLimit.
ResponseParams fetch(const url::UrlInfo& url, const RequestOptions& options = {},
                     std::size_t max_response_bytes = 16 * 1024 * 1024);

}  // namespace termweb::http
