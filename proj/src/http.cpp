#include "termweb/http.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <cstring>

#include "termweb/net.hpp"

namespace termweb::http {

namespace {

const std::array<const char*, 7> kWeekdays = {"Monday", "Tuesday",  "Wednesday", "Thursday",
                                              "Friday", "Saturday", "Sunday"};
const std::array<const char*, 12> kMonths = {"January",   "February", "March",    "April",
                                             "May",       "June",     "July",     "August",
                                             "September", "October",  "November", "December"};

int month_days(int month_index, int year) {
    static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month_index == 1 && (year % 4 == 0 && (year % 100 != 0 || year % 400 == 0))) return 29;
    return days[month_index];
}

int name_index(const auto& names, const std::string& name, bool abbreviated) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        std::string candidate = names[i];
        if (abbreviated) candidate.resize(3);
        if (candidate == name) return static_cast<int>(i);
    }
    return -1;
}

bool valid_time(const std::string& t) {
    if (t.size() != 8 || t[2] != ':' || t[5] != ':') return false;
    auto digits = [&](int a, int b, int max) {
        if (!std::isdigit(static_cast<unsigned char>(t[a])) ||
            !std::isdigit(static_cast<unsigned char>(t[b])))
            return false;
        int v = (t[a] - '0') * 10 + (t[b] - '0');
        return v <= max;
    };
    return digits(0, 1, 23) && digits(3, 4, 59) && digits(6, 7, 59);
}

void validate(const HttpDate& d) {
    int month = name_index(kMonths, d.month, false);
    if (month < 0) throw BadDate("bad month '" + d.month + "'");
    if (name_index(kWeekdays, d.weekday, false) < 0)
        throw BadDate("bad weekday '" + d.weekday + "'");
    if (d.day < 1 || d.day > month_days(month, d.year))
        throw BadDate("day " + std::to_string(d.day) + " out of range for " + d.month);
    if (d.year < 1 || d.year > 9999) throw BadDate("year out of range");
    if (!valid_time(d.time)) throw BadDate("bad time '" + d.time + "'");
}

std::vector<std::string> split_words(const std::string& s, const char* separators) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < s.size()) {
        std::size_t end = s.find_first_of(separators, start);
        if (end == std::string::npos) end = s.size();
        if (end > start) out.push_back(s.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

int parse_int(const std::string& s) {
    if (s.empty()) throw BadDate("expected digits, got '" + s + "'");
    int v = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw BadDate("expected digits, got '" + s + "'");
        v = v * 10 + (c - '0');
        if (v > 99999) throw BadDate("number out of range");
    }
    return v;
}

}  // namespace

std::string format_http_date(const HttpDate& date) {
    validate(date);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3s, %02d %.3s %04d %s GMT", date.weekday.c_str(), date.day,
                  date.month.c_str(), date.year, date.time.c_str());
    return buf;
}

HttpDate parse_http_date(const std::string& text) {
    std::string s = trim(text);
    std::size_t comma = s.find(',');
    if (comma == std::string::npos) throw BadDate("missing weekday in '" + text + "'");
    std::string weekday_text = s.substr(0, comma);
    std::string rest = trim(s.substr(comma + 1));

    HttpDate date;
    int weekday = name_index(kWeekdays, weekday_text, weekday_text.size() == 3);
    if (weekday < 0) throw BadDate("bad weekday '" + weekday_text + "'");
    date.weekday = kWeekdays[static_cast<std::size_t>(weekday)];

    std::vector<std::string> words = split_words(rest, " ");
    if (words.size() == 2) {
        // RFC 850: 06-Nov-94 08:49:37 GMT missing zone tolerated
        words.push_back("GMT");
    }
    if (words.size() < 3) throw BadDate("too few fields in '" + text + "'");

    int month;
    if (words[0].find('-') != std::string::npos) {
        // RFC 850: DD-Mon-YY
        std::vector<std::string> parts = split_words(words[0], "-");
        if (parts.size() != 3) throw BadDate("bad RFC 850 date '" + words[0] + "'");
        date.day = parse_int(parts[0]);
        month = name_index(kMonths, parts[1], true);
        int year = parse_int(parts[2]);
        date.year = year >= 100 ? year : (year < 70 ? 2000 + year : 1900 + year);
        date.time = words[1];
    } else {
        // RFC 1123: DD Mon YYYY HH:MM:SS GMT
        if (words.size() < 4) throw BadDate("too few fields in '" + text + "'");
        date.day = parse_int(words[0]);
        month = name_index(kMonths, words[1], true);
        date.year = parse_int(words[2]);
        date.time = words[3];
    }
    if (month < 0) throw BadDate("bad month in '" + text + "'");
    date.month = kMonths[static_cast<std::size_t>(month)];
    validate(date);
    return date;
}

StatusClass status_class(int code) {
    if (code >= 100 && code <= 199) return StatusClass::Informational;
    if (code >= 200 && code <= 299) return StatusClass::Success;
    if (code >= 300 && code <= 399) return StatusClass::Redirection;
    if (code >= 400 && code <= 499) return StatusClass::RequestError;
    if (code >= 500 && code <= 599) return StatusClass::ServerError;
    return StatusClass::ExtensionCode;
}

std::string to_string(StatusClass cls) {
    switch (cls) {
    case StatusClass::Informational: return "informational";
    case StatusClass::Success: return "success";
    case StatusClass::Redirection: return "redirection";
    case StatusClass::RequestError: return "request_error";
    case StatusClass::ServerError: return "server_error";
    case StatusClass::ExtensionCode: return "extension_code";
    }
    return "?";
}

namespace {

constexpr int kDefaultTimeoutSeconds = 60;

// from_user -> From-User
std::string wire_field_name(const std::string& name) {
    std::string out;
    bool upper = true;
    for (char c : name) {
        if (c == '_' || c == '-') {
            out += '-';
            upper = true;
        } else if (upper) {
            out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            upper = false;
        } else {
            out += c;
        }
    }
    return out;
}

struct Request {
    bool head = false;
    int timeout_seconds = kDefaultTimeoutSeconds;
    std::string user_agent = "termweb/1.0";
    std::vector<std::pair<std::string, std::string>> fields;
};

Request build_request(const RequestOptions& options) {
    Request req;
    bool timeout_seen = false;
    for (const auto& option : options) {
        if (std::holds_alternative<Head>(option)) {
            req.head = true;
        } else if (const auto* t = std::get_if<TimeoutAfter>(&option)) {
            if (timeout_seen) throw std::invalid_argument("more than one timeout option");
            if (t->seconds <= 0) throw std::invalid_argument("timeout must be positive");
            timeout_seen = true;
            req.timeout_seconds = t->seconds;
        } else if (const auto* d = std::get_if<IfModifiedSince>(&option)) {
            req.fields.emplace_back("If-Modified-Since", format_http_date(d->date));
        } else if (const auto* ua = std::get_if<UserAgent>(&option)) {
            req.user_agent = ua->name;
        } else if (const auto* auth = std::get_if<Authorization>(&option)) {
            req.fields.emplace_back("Authorization", auth->scheme + " " + auth->params);
        } else if (const auto* f = std::get_if<RequestField>(&option)) {
            req.fields.emplace_back(wire_field_name(f->name), f->value);
        }
    }
    return req;
}

// one header line -> one response parameter
ResponseParam header_param(const std::string& name, const std::string& value) {
    std::string key = lowercase(name);
    try {
        if (key == "pragma") return Pragma{value};
        if (key == "date") return MessageDate{parse_http_date(value)};
        if (key == "location") return Location{value};
        if (key == "server") return HttpServer{value};
        if (key == "allow") {
            Allow allow;
            for (const auto& m : split_words(value, ",")) allow.methods.push_back(trim(m));
            return allow;
        }
        if (key == "last-modified") return LastModified{parse_http_date(value)};
        if (key == "expires") return Expires{parse_http_date(value)};
        if (key == "content-type") {
            ContentType ct;
            std::vector<std::string> parts = split_words(value, ";");
            if (!parts.empty()) {
                std::string media = trim(parts[0]);
                std::size_t slash = media.find('/');
                ct.type = lowercase(media.substr(0, slash));
                if (slash != std::string::npos) ct.subtype = lowercase(media.substr(slash + 1));
            }
            for (std::size_t i = 1; i < parts.size(); ++i) {
                std::string param = trim(parts[i]);
                std::size_t eq = param.find('=');
                if (eq == std::string::npos) continue;
                std::string pv = param.substr(eq + 1);
                if (pv.size() >= 2 && pv.front() == '"' && pv.back() == '"')
                    pv = pv.substr(1, pv.size() - 2);
                ct.params.emplace_back(lowercase(param.substr(0, eq)), pv);
            }
            return ct;
        }
        if (key == "content-encoding") return ContentEncoding{value};
        if (key == "content-length") {
            std::uint64_t length = 0;
            for (char c : value) {
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    return ResponseField{key, value};
                length = length * 10 + static_cast<std::uint64_t>(c - '0');
            }
            return ContentLength{length};
        }
        if (key == "www-authenticate") return Authenticate{{value}};
    } catch (const BadDate&) {
        // fall through: keep the raw field
    }
    std::replace(key.begin(), key.end(), '-', '_');
    return ResponseField{key, value};
}

}  // namespace

ResponseParams fetch(const url::UrlInfo& url, const RequestOptions& options,
                     std::size_t max_response_bytes) {
    Request req = build_request(options);
    net::Deadline deadline = net::deadline_in(req.timeout_seconds);

    net::Socket socket = net::Socket::connect(url.host, url.port, deadline);

    std::string request_text = (req.head ? std::string("HEAD ") : std::string("GET ")) +
                               url.document + " HTTP/1.0\r\n";
    request_text += "Host: " + url.host;
    if (url.port != 80) request_text += ":" + std::to_string(url.port);
    request_text += "\r\n";
    request_text += "User-Agent: " + req.user_agent + "\r\n";
    for (const auto& [name, value] : req.fields) request_text += name + ": " + value + "\r\n";
    request_text += "\r\n";
    socket.write_all(request_text, deadline);

    // read the whole header section first
    std::string buffer;
    std::size_t header_end = std::string::npos;
    char chunk[4096];
    while (header_end == std::string::npos) {
        std::size_t n = socket.read_some(chunk, sizeof(chunk), deadline);
        if (n == 0) break;
        buffer.append(chunk, n);
        if (buffer.size() > max_response_bytes)
            throw OverLimit("response exceeds " + std::to_string(max_response_bytes) + " bytes");
        header_end = buffer.find("\r\n\r\n");
        if (header_end == std::string::npos) {
            header_end = buffer.find("\n\n");
            if (header_end != std::string::npos) header_end += 2;
        } else {
            header_end += 4;
        }
    }
    if (header_end == std::string::npos)
        throw ProtocolError("connection closed before the header section ended");

    // status line
    std::size_t line_end = buffer.find('\n');
    std::string status_line = buffer.substr(0, line_end);
    if (!status_line.empty() && status_line.back() == '\r') status_line.pop_back();
    if (status_line.compare(0, 5, "HTTP/") != 0)
        throw ProtocolError("unparseable status line '" + status_line + "'");
    std::size_t sp1 = status_line.find(' ');
    std::size_t code_start =
        sp1 == std::string::npos ? std::string::npos : status_line.find_first_not_of(' ', sp1);
    if (code_start == std::string::npos) throw ProtocolError("status line without a code");
    std::size_t sp2 = status_line.find(' ', code_start);
    std::string code_text = status_line.substr(
        code_start, (sp2 == std::string::npos ? status_line.size() : sp2) - code_start);
    if (code_text.size() != 3 || !std::isdigit(static_cast<unsigned char>(code_text[0])) ||
        !std::isdigit(static_cast<unsigned char>(code_text[1])) ||
        !std::isdigit(static_cast<unsigned char>(code_text[2])))
        throw ProtocolError("bad status code '" + code_text + "'");
    int code = std::stoi(code_text);
    std::string phrase;
    if (sp2 != std::string::npos) {
        std::size_t phrase_start = status_line.find_first_not_of(' ', sp2);
        if (phrase_start != std::string::npos) phrase = status_line.substr(phrase_start);
    }

    ResponseParams params;
    params.push_back(Status{status_class(code), code, phrase});

    // header fields
    std::size_t pos = line_end + 1;
    while (pos < header_end) {
        std::size_t eol = buffer.find('\n', pos);
        if (eol == std::string::npos || eol >= header_end) eol = header_end - 1;
        std::string line = buffer.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t colon = line.find(':');
        if (colon == std::string::npos) continue;
        params.push_back(header_param(trim(line.substr(0, colon)), trim(line.substr(colon + 1))));
    }

    if (req.head) return params;  // leave body bytes unread

    std::string body = buffer.substr(header_end);
    while (true) {
        std::size_t n = socket.read_some(chunk, sizeof(chunk), deadline);
        if (n == 0) break;
        body.append(chunk, n);
        if (body.size() > max_response_bytes)
            throw OverLimit("response exceeds " + std::to_string(max_response_bytes) + " bytes");
    }
    params.push_back(Content{std::move(body)});
    return params;
}

}  // namespace termweb::http
