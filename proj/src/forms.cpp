#include "termweb/forms.hpp"

#include <cctype>
#include <cstdlib>
#include <istream>

namespace termweb::forms {

namespace {

bool numeral(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t digits = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == digits) return false;
    if (i < s.size() && s[i] == '.') {
        ++i;
        std::size_t frac = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == frac) return false;
    }
    return i == s.size();
}

std::string normalize_newlines(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\r') {
            out += '\n';
            if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
        } else {
            out += s[i];
        }
    }
    return out;
}

bool whitespace_only(const std::string& s) {
    for (char c : s)
        if (c != ' ' && c != '\t' && c != '\r' && c != '\n') return false;
    return true;
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string percent_decode(const std::string& s, std::size_t base_offset) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '+') {
            out += ' ';
        } else if (c == '%') {
            int hi = i + 1 < s.size() ? hex_digit(s[i + 1]) : -1;
            int lo = i + 2 < s.size() ? hex_digit(s[i + 2]) : -1;
            if (hi < 0 || lo < 0)
                throw MalformedInput("bad percent escape", base_offset + i);
            out += static_cast<char>(hi * 16 + lo);
            i += 2;
        } else {
            out += c;
        }
    }
    return out;
}

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// header parameter: name="quoted" or name=bare (after a ';')
std::optional<std::string> header_param(const std::string& header, const std::string& name) {
    std::string lower = lowercase(header);
    std::string needle = name + "=";
    std::size_t pos = 0;
    while ((pos = lower.find(needle, pos)) != std::string::npos) {
        bool at_boundary = pos == 0 || lower[pos - 1] == ' ' || lower[pos - 1] == ';' ||
                           lower[pos - 1] == '\t';
        pos += needle.size();
        if (!at_boundary) continue;
        if (pos < header.size() && header[pos] == '"') {
            std::size_t end = header.find('"', pos + 1);
            if (end == std::string::npos) return std::nullopt;
            return header.substr(pos + 1, end - pos - 1);
        }
        std::size_t end = header.find_first_of("; \t", pos);
        return header.substr(pos, (end == std::string::npos ? header.size() : end) - pos);
    }
    return std::nullopt;
}

void decode_pair(const std::string& chunk, std::size_t offset, FormDict& out) {
    if (chunk.empty()) return;
    std::size_t eq = chunk.find('=');
    std::string name = chunk.substr(0, eq == std::string::npos ? chunk.size() : eq);
    std::string value = eq == std::string::npos ? "" : chunk.substr(eq + 1);
    out.emplace_back(percent_decode(name, offset),
                     FormValue::of_raw(percent_decode(value, offset + eq + 1)));
}

FormDict decode_multipart(const std::string& body, const std::string& boundary) {
    FormDict dict;
    std::string open = "--" + boundary;
    std::size_t pos = body.find(open);
    if (pos == std::string::npos) throw MalformedInput("multipart boundary not found", 0);
    pos += open.size();
    while (true) {
        if (body.compare(pos, 2, "--") == 0) break;  // closing delimiter
        if (body.compare(pos, 2, "\r\n") == 0) pos += 2;
        else if (pos < body.size() && body[pos] == '\n') ++pos;
        else if (pos >= body.size()) break;

        std::size_t headers_end = body.find("\r\n\r\n", pos);
        std::size_t data_start;
        if (headers_end != std::string::npos) {
            data_start = headers_end + 4;
        } else {
            headers_end = body.find("\n\n", pos);
            if (headers_end == std::string::npos)
                throw MalformedInput("multipart part without header block", pos);
            data_start = headers_end + 2;
        }
        std::string headers = body.substr(pos, headers_end - pos);

        std::size_t next = body.find(open, data_start);
        if (next == std::string::npos)
            throw MalformedInput("multipart part without closing boundary", data_start);
        std::size_t data_end = next;
        // the CRLF before the boundary belongs to the delimiter
        if (data_end >= 2 && body.compare(data_end - 2, 2, "\r\n") == 0) data_end -= 2;
        else if (data_end >= 1 && body[data_end - 1] == '\n') data_end -= 1;
        std::string value = body.substr(data_start, data_end - data_start);

        std::optional<std::string> part_name;
        std::optional<std::string> filename;
        std::size_t line_start = 0;
        while (line_start < headers.size()) {
            std::size_t line_end = headers.find('\n', line_start);
            std::string line = headers.substr(
                line_start, (line_end == std::string::npos ? headers.size() : line_end) - line_start);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (lowercase(line).compare(0, 20, "content-disposition:") == 0) {
                part_name = header_param(line, "name");
                filename = header_param(line, "filename");
            }
            if (line_end == std::string::npos) break;
            line_start = line_end + 1;
        }
        if (!part_name) throw MalformedInput("multipart part without a name", pos);
        dict.emplace_back(*part_name, FormValue::of_raw(value));
        if (filename) dict.emplace_back(*part_name + "_filename", FormValue::of_raw(*filename));

        pos = next + open.size();
    }
    return dict;
}

}  // namespace

FormValue FormValue::empty() { return FormValue{}; }

FormValue FormValue::number(std::string numeral) {
    FormValue v;
    v.kind_ = Kind::Number;
    v.text_ = std::move(numeral);
    return v;
}

FormValue FormValue::token(std::string text) {
    FormValue v;
    v.kind_ = Kind::Token;
    v.text_ = std::move(text);
    return v;
}

FormValue FormValue::lines(std::vector<std::string> lines) {
    FormValue v;
    v.kind_ = Kind::Lines;
    v.lines_ = std::move(lines);
    return v;
}

FormValue FormValue::of_raw(const std::string& raw) {
    if (raw.empty()) return empty();
    std::string flat = normalize_newlines(raw);
    if (flat.find('\n') != std::string::npos) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (start <= flat.size()) {
            std::size_t nl = flat.find('\n', start);
            if (nl == std::string::npos) {
                if (start < flat.size()) out.push_back(flat.substr(start));
                break;  // no empty line after a trailing newline
            }
            out.push_back(flat.substr(start, nl - start));
            start = nl + 1;
        }
        return lines(std::move(out));
    }
    if (numeral(flat)) return number(flat);
    return token(flat);
}

std::string FormValue::text() const {
    if (kind_ != Kind::Lines) return text_;
    std::string out;
    for (std::size_t i = 0; i < lines_.size(); ++i) {
        if (i) out += '\n';
        out += lines_[i];
    }
    return out;
}

double FormValue::number_value() const { return std::strtod(text_.c_str(), nullptr); }

CgiEnv CgiEnv::capture(std::istream& body_source) {
    auto var = [](const char* name) -> std::optional<std::string> {
        const char* v = std::getenv(name);
        if (!v) return std::nullopt;
        return std::string(v);
    };
    CgiEnv env;
    env.request_method = var("REQUEST_METHOD");
    env.query_string = var("QUERY_STRING");
    env.content_type = var("CONTENT_TYPE");
    env.content_length = var("CONTENT_LENGTH");
    env.script_name = var("SCRIPT_NAME");
    env.server_name = var("SERVER_NAME");
    env.server_port = var("SERVER_PORT");
    if (env.request_method && *env.request_method == "POST" && env.content_length) {
        std::size_t length = std::strtoul(env.content_length->c_str(), nullptr, 10);
        env.body.resize(length);
        body_source.read(env.body.data(), static_cast<std::streamsize>(length));
        env.body.resize(static_cast<std::size_t>(body_source.gcount()));
    }
    return env;
}

FormDict decode_urlencoded(const std::string& text) {
    FormDict dict;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t amp = text.find('&', start);
        std::size_t end = amp == std::string::npos ? text.size() : amp;
        decode_pair(text.substr(start, end - start), start, dict);
        if (amp == std::string::npos) break;
        start = amp + 1;
    }
    return dict;
}

FormDict get_form_input(const CgiEnv& env) {
    if (!env.request_method) return {};
    const std::string& method = *env.request_method;
    if (method == "GET") {
        if (!env.query_string) return {};
        return decode_urlencoded(*env.query_string);
    }
    if (method != "POST") return {};

    std::string content_type = env.content_type ? lowercase(*env.content_type) : "";
    if (content_type.compare(0, 19, "multipart/form-data") == 0) {
        auto boundary = header_param(*env.content_type, "boundary");
        if (!boundary || boundary->empty())
            throw MalformedInput("multipart content without a boundary parameter", 0);
        return decode_multipart(env.body, *boundary);
    }
    std::size_t length = env.body.size();
    if (env.content_length) {
        std::size_t announced = std::strtoul(env.content_length->c_str(), nullptr, 10);
        if (announced < length) length = announced;
    }
    return decode_urlencoded(env.body.substr(0, length));
}

FormValue get_form_value(const FormDict& dict, const std::string& attribute) {
    for (const auto& [name, value] : dict)
        if (name == attribute) return value;
    return FormValue::empty();
}

bool form_empty_value(const FormValue& value) {
    switch (value.kind()) {
    case FormValue::Kind::Empty: return true;
    case FormValue::Kind::Number: return false;
    case FormValue::Kind::Token: return whitespace_only(value.text());
    case FormValue::Kind::Lines:
        for (const auto& line : value.line_list())
            if (!whitespace_only(line)) return false;
        return true;
    }
    return false;
}

FormValue form_default(const FormValue& value, const FormValue& fallback) {
    return form_empty_value(value) ? fallback : value;
}

std::string my_url(const CgiEnv& env) {
    if (!env.server_name) throw MissingEnv("SERVER_NAME");
    if (!env.script_name) throw MissingEnv("SCRIPT_NAME");
    std::string out = "http://" + *env.server_name;
    if (env.server_port && *env.server_port != "80") out += ":" + *env.server_port;
    return out + *env.script_name;
}

Method form_request_method(const CgiEnv& env) {
    if (!env.request_method) throw MissingEnv("REQUEST_METHOD");
    if (*env.request_method == "GET") return Method::Get;
    if (*env.request_method == "POST") return Method::Post;
    throw UnknownMethod(*env.request_method);
}

namespace {

bool unreserved(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.' ||
           c == '~';
}

void percent_encode(const std::string& s, std::string& out) {
    static const char* hex = "0123456789ABCDEF";
    for (char c : s) {
        if (c == ' ') {
            out += '+';
        } else if (unreserved(c)) {
            out += c;
        } else {
            unsigned char b = static_cast<unsigned char>(c);
            out += '%';
            out += hex[b >> 4];
            out += hex[b & 0xF];
        }
    }
}

}  // namespace

std::string url_query(const FormDict& dict) {
    std::string out;
    bool first = true;
    for (const auto& [name, value] : dict) {
        if (value.kind() == FormValue::Kind::Lines)
            throw Unencodable("multi-line value for '" + name + "'");
        if (!first) out += '&';
        first = false;
        percent_encode(name, out);
        out += '=';
        percent_encode(value.text(), out);
    }
    return out;
}

}  // namespace termweb::forms
