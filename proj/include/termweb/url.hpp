#pragma once

#include <string>

#include "termweb/error.hpp"

namespace termweb::url {

class NotHttp : public Error {
public:
    explicit NotHttp(const std::string& what) : Error(what) {}
};

class MalformedUrl : public Error {
public:
    explicit MalformedUrl(const std::string& what) : Error(what) {}
};

/// A structured HTTP URL: host, port (80 when omitted) and document
/// path starting with "/".  Queries stay in the document; fragments are
/// dropped.
struct UrlInfo {
    std::string host;
    int port = 80;
    std::string document = "/";

    bool operator==(const UrlInfo&) const = default;
};

/// Parses an absolute http URL.  Any other scheme raises NotHttp;
/// everything else unparseable raises MalformedUrl.
UrlInfo url_info(const std::string& url);

/// Canonical text; the port is omitted when it is 80.
std::string url_text(const UrlInfo& info);

/// Resolves a reference found in the page at `base`: absolute
/// references parse on their own, root-relative ones replace the
/// document, plain relative ones replace the last path segment.
/// "." and ".." segments are resolved; ".." clamps at the root.
UrlInfo url_info_relative(const std::string& reference, const UrlInfo& base);

}  // namespace termweb::url
