#include "termweb/url.hpp"

#include <cctype>
#include <vector>

namespace termweb::url {

namespace {

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// scheme = ALPHA *( ALPHA / DIGIT / "+" / "-" / "." ) ":"
std::size_t scheme_length(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return 0;
    std::size_t i = 1;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '+' ||
                            s[i] == '-' || s[i] == '.'))
        ++i;
    return i < s.size() && s[i] == ':' ? i : 0;
}

std::string strip_fragment(std::string s) {
    std::size_t hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    return s;
}

// host[:port] up to the first '/' or '?'
void parse_authority(const std::string& s, std::size_t& pos, UrlInfo& out) {
    std::size_t end = s.find_first_of("/?", pos);
    if (end == std::string::npos) end = s.size();
    std::string authority = s.substr(pos, end - pos);
    pos = end;
    std::size_t colon = authority.rfind(':');
    if (colon != std::string::npos) {
        std::string port_text = authority.substr(colon + 1);
        if (port_text.empty()) throw MalformedUrl("empty port");
        int port = 0;
        for (char c : port_text) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw MalformedUrl("bad port '" + port_text + "'");
            port = port * 10 + (c - '0');
            if (port >= 65536) throw MalformedUrl("port out of range");
        }
        if (port == 0) throw MalformedUrl("port out of range");
        out.port = port;
        authority.erase(colon);
    } else {
        out.port = 80;
    }
    if (authority.empty()) throw MalformedUrl("empty host");
    out.host = lowercase(authority);
}

// RFC 3986 remove_dot_segments, with ".." clamped at the root.  Applies
// to the path part only; an attached query is preserved untouched.
std::string resolve_dots(const std::string& document) {
    std::size_t qmark = document.find('?');
    std::string path = document.substr(0, qmark == std::string::npos ? document.size() : qmark);
    std::string query = qmark == std::string::npos ? "" : document.substr(qmark);

    std::vector<std::string> segments;
    bool trailing_slash = true;
    std::size_t i = 1;  // path always starts with '/'
    while (i <= path.size()) {
        std::size_t next = path.find('/', i);
        std::string segment =
            next == std::string::npos ? path.substr(i) : path.substr(i, next - i);
        bool last = next == std::string::npos;
        if (segment == ".") {
            trailing_slash = true;
        } else if (segment == "..") {
            if (!segments.empty()) segments.pop_back();
            trailing_slash = true;
        } else if (!segment.empty()) {
            segments.push_back(segment);
            trailing_slash = false;
        } else if (last) {
            trailing_slash = true;  // path ended with '/'
        }
        if (last) break;
        i = next + 1;
    }
    std::string out;
    for (const auto& segment : segments) out += "/" + segment;
    if (out.empty() || trailing_slash) out += "/";
    return out + query;
}

}  // namespace

UrlInfo url_info(const std::string& url) {
    std::string s = strip_fragment(url);
    std::size_t scheme_end = scheme_length(s);
    if (scheme_end == 0) throw MalformedUrl("no scheme in '" + url + "'");
    if (lowercase(s.substr(0, scheme_end)) != "http")
        throw NotHttp("unsupported scheme '" + s.substr(0, scheme_end) + "'");
    std::size_t pos = scheme_end + 1;
    if (s.compare(pos, 2, "//") != 0) throw MalformedUrl("expected // after scheme");
    pos += 2;
    UrlInfo info;
    parse_authority(s, pos, info);
    std::string document = s.substr(pos);
    if (document.empty())
        document = "/";
    else if (document[0] == '?')
        document = "/" + document;
    info.document = resolve_dots(document);
    return info;
}

std::string url_text(const UrlInfo& info) {
    std::string out = "http://" + info.host;
    if (info.port != 80) out += ":" + std::to_string(info.port);
    return out + info.document;
}

UrlInfo url_info_relative(const std::string& reference, const UrlInfo& base) {
    std::string ref = strip_fragment(reference);
    if (scheme_length(ref) > 0) return url_info(ref);

    UrlInfo info = base;
    if (ref.compare(0, 2, "//") == 0) {
        // network-path reference: new authority, same scheme
        std::size_t pos = 2;
        parse_authority(ref, pos, info);
        std::string document = ref.substr(pos);
        info.document = resolve_dots(document.empty() ? "/" : document);
        return info;
    }
    if (!ref.empty() && ref[0] == '/') {
        info.document = resolve_dots(ref);
        return info;
    }

    std::string base_path = base.document.substr(0, base.document.find('?'));
    if (ref.empty()) {
        info.document = base.document;  // same document
        return info;
    }
    if (ref[0] == '?') {
        info.document = base_path + ref;  // same path, new query
        return info;
    }
    // merge: replace the last segment of the base path
    std::size_t slash = base_path.rfind('/');
    base_path.erase(slash + 1);
    info.document = resolve_dots(base_path + ref);
    return info;
}

}  // namespace termweb::url
