// termweb command line: fetch, parse/render, template filling, link
// checking and the active-module runtime.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "termweb/actmod.hpp"
#include "termweb/forms.hpp"
#include "termweb/html_codec.hpp"
#include "termweb/http.hpp"
#include "termweb/phonedb.hpp"
#include "termweb/sugar.hpp"
#include "termweb/template.hpp"
#include "termweb/url.hpp"

namespace {

using namespace termweb;

volatile std::sig_atomic_t stop_requested = 0;

void on_signal(int) { stop_requested = 1; }

void install_signal_handlers() {
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
}

std::string read_input(const std::string& file) {
    if (file.empty() || file == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return std::move(buf).str();
    }
    return tmpl::file_to_string(file);
}

// ---- fetch ----------------------------------------------------------------

std::string param_line(const http::ResponseParam& param) {
    using namespace http;
    if (const auto* s = std::get_if<Status>(&param))
        return "status: " + std::to_string(s->code) + " " + s->phrase;
    if (const auto* p = std::get_if<Pragma>(&param)) return "pragma: " + p->data;
    if (const auto* d = std::get_if<MessageDate>(&param))
        return "message_date: " + format_http_date(d->date);
    if (const auto* l = std::get_if<Location>(&param)) return "location: " + l->url;
    if (const auto* s = std::get_if<HttpServer>(&param)) return "http_server: " + s->name;
    if (const auto* a = std::get_if<Allow>(&param)) {
        std::string out = "allow:";
        for (const auto& m : a->methods) out += " " + m;
        return out;
    }
    if (const auto* d = std::get_if<LastModified>(&param))
        return "last_modified: " + format_http_date(d->date);
    if (const auto* d = std::get_if<Expires>(&param))
        return "expires: " + format_http_date(d->date);
    if (const auto* t = std::get_if<ContentType>(&param)) {
        std::string out = "content_type: " + t->type + "/" + t->subtype;
        for (const auto& [k, v] : t->params) out += "; " + k + "=" + v;
        return out;
    }
    if (const auto* e = std::get_if<ContentEncoding>(&param))
        return "content_encoding: " + e->encoding;
    if (const auto* l = std::get_if<ContentLength>(&param))
        return "content_length: " + std::to_string(l->length);
    if (const auto* a = std::get_if<Authenticate>(&param)) {
        std::string out = "authenticate:";
        for (const auto& c : a->challenges) out += " " + c;
        return out;
    }
    if (const auto* f = std::get_if<ResponseField>(&param)) return f->name + ": " + f->value;
    return "";  // content is handled separately
}

int cmd_fetch(const std::string& url_text, bool head, int timeout,
              const std::string& if_modified_since, const std::string& user_agent,
              const std::string& out_file) {
    http::RequestOptions options;
    if (head) options.push_back(http::Head{});
    if (timeout > 0) options.push_back(http::TimeoutAfter{timeout});
    if (!if_modified_since.empty())
        options.push_back(http::IfModifiedSince{http::parse_http_date(if_modified_since)});
    if (!user_agent.empty()) options.push_back(http::UserAgent{user_agent});

    http::ResponseParams response = http::fetch(url::url_info(url_text), options);

    if (head) {
        for (const auto& param : response) {
            std::string line = param_line(param);
            if (!line.empty()) std::cout << line << "\n";
        }
    } else if (const auto* content = http::find_param<http::Content>(response)) {
        if (out_file.empty()) {
            std::cout << content->bytes;
        } else {
            std::ofstream out(out_file, std::ios::binary | std::ios::trunc);
            if (!out) throw Error("cannot write " + out_file);
            out << content->bytes;
        }
    }
    const auto* status = http::find_param<http::Status>(response);
    return status && status->cls == http::StatusClass::Success ? 0 : 1;
}

// ---- check-links ------------------------------------------------------------

void collect_anchor_targets(const markup::NodeList& terms, std::vector<std::string>& out) {
    for (const auto& node : terms) {
        if (!node.is<markup::Environment>()) continue;
        const auto& e = node.as<markup::Environment>();
        if (e.name == "a") {
            const std::string* href = nullptr;
            for (const auto& attr : e.attrs)
                if (attr.name == "href" && !attr.is_flag()) {
                    href = &*attr.value;
                    break;
                }
            if (href) {
                out.push_back(*href);
                continue;  // an anchor's own body is not scanned further
            }
        }
        collect_anchor_targets(e.body, out);
    }
}

int cmd_check_links(const std::string& url_text, int timeout, int jobs) {
    url::UrlInfo root = url::url_info(url_text);
    http::ResponseParams response = http::fetch(root, {http::TimeoutAfter{timeout}});
    const auto* status = http::find_param<http::Status>(response);
    if (!status || status->cls != http::StatusClass::Success)
        throw Error("document fetch failed: " +
                    (status ? std::to_string(status->code) + " " + status->phrase
                            : std::string("no status")));
    const auto* content_type = http::find_param<http::ContentType>(response);
    if (!content_type || content_type->type != "text" || content_type->subtype != "html")
        throw Error("document is not text/html");
    const auto* content = http::find_param<http::Content>(response);

    std::vector<std::string> links;
    collect_anchor_targets(codec::parse(content ? content->bytes : ""), links);

    // probe in parallel, report in document order
    std::vector<std::optional<std::string>> problems(links.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= links.size()) return;
            url::UrlInfo target;
            try {
                target = url::url_info_relative(links[i], root);
            } catch (const Error&) {
                continue;  // non-http or unparseable: not checked
            }
            try {
                http::ResponseParams probe =
                    http::fetch(target, {http::Head{}, http::TimeoutAfter{timeout}});
                const auto* s = http::find_param<http::Status>(probe);
                if (!s || s->cls != http::StatusClass::Success)
                    problems[i] = s ? s->phrase : "no status";
            } catch (const Timeout&) {
                problems[i] = "Timeout";
            } catch (const Error& e) {
                problems[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    int n = std::min<std::size_t>(jobs > 0 ? jobs : 1, std::max<std::size_t>(links.size(), 1));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    bool any = false;
    for (std::size_t i = 0; i < links.size(); ++i) {
        if (!problems[i]) continue;
        any = true;
        std::cout << "badlink " << links[i] << " " << *problems[i] << "\n";
    }
    return any ? 1 : 0;
}

// ---- parse / render / template ------------------------------------------------

[[noreturn]] void fail_in(const std::string& file, const Error& e) {
    throw Error((file.empty() || file == "-" ? "stdin" : file) + ": " + e.what());
}

int cmd_parse(const std::string& file, bool xml) {
    codec::Dialect dialect = xml ? codec::Dialect::Xml : codec::Dialect::Html;
    try {
        for (const auto& node : codec::parse(read_input(file), dialect))
            std::cout << term::to_text(markup::to_term(node)) << "\n";
    } catch (const codec::XmlSyntax& e) {
        fail_in(file, e);
    }
    return 0;
}

int cmd_render(const std::string& file, bool xml) {
    codec::Dialect dialect = xml ? codec::Dialect::Xml : codec::Dialect::Html;
    markup::NodeList nodes;
    try {
        for (const auto& t : term::parse_terms(read_input(file)))
            nodes.push_back(sugar::node_from_term(t));
    } catch (const Error& e) {
        fail_in(file, e);
    }
    codec::render_to_stream(nodes, dialect, std::cout);
    return 0;
}

std::pair<std::string, std::string> split_binding(const std::string& spec) {
    std::size_t eq = spec.find('=');
    if (eq == std::string::npos) throw Error("binding '" + spec + "' is not name=value");
    return {spec.substr(0, eq), spec.substr(eq + 1)};
}

int cmd_template(const std::string& template_file, const std::vector<std::string>& file_bindings,
                 const std::vector<std::string>& text_bindings) {
    tmpl::Template t = tmpl::parse_template(tmpl::file_to_string(template_file));
    std::vector<std::pair<std::string, markup::Node>> bindings;
    for (const auto& spec : file_bindings) {
        auto [name, file] = split_binding(spec);
        bindings.emplace_back(name, markup::seq(codec::parse(tmpl::file_to_string(file))));
    }
    for (const auto& spec : text_bindings) {
        auto [name, text] = split_binding(spec);
        bindings.emplace_back(name, markup::seq(codec::parse(text)));
    }
    tmpl::fill(t.dict, bindings);
    codec::render_to_stream(t.terms, codec::Dialect::Html, std::cout);
    return 0;
}

// ---- actmod -------------------------------------------------------------------

actmod::ModuleAddress parse_host_port(const std::string& spec) {
    std::size_t colon = spec.rfind(':');
    if (colon == std::string::npos) throw Error("expected HOST:PORT, got '" + spec + "'");
    return actmod::ModuleAddress{spec.substr(0, colon), std::stoi(spec.substr(colon + 1))};
}

actmod::Publisher make_publisher(const std::string& module, const std::string& spec) {
    if (spec.rfind("file:", 0) == 0)
        return actmod::filebased_publisher(module, spec.substr(5));
    if (spec.rfind("web:", 0) == 0) return actmod::webbased_publisher(module, spec.substr(4));
    if (spec.rfind("nameserver:", 0) == 0)
        return actmod::nameserver_publisher(module, parse_host_port(spec.substr(11)));
    throw Error("unknown publish strategy '" + spec + "'");
}

actmod::Locator make_locator(const std::string& spec) {
    if (spec.rfind("file:", 0) == 0) return actmod::filebased_locator(spec.substr(5));
    if (spec.rfind("web:", 0) == 0) return actmod::webbased_locator(spec.substr(4));
    if (spec.rfind("nameserver:", 0) == 0)
        return actmod::nameserver_locator(parse_host_port(spec.substr(11)));
    throw Error("unknown locate strategy '" + spec + "'");
}

void wait_for_signal() {
    while (!stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

int cmd_actmod_serve(const std::string& module, const std::string& publish, int port) {
    if (module != "phone_db") throw Error("no such module '" + module + "'");
    auto book = std::make_shared<phonedb::PhoneBook>();
    actmod::Server server(phonedb::make_registry(book), make_publisher(module, publish), port);
    std::cout << "serving " << module << " at " << server.address().host << ":"
              << server.address().port << std::endl;
    install_signal_handlers();
    wait_for_signal();
    server.shutdown();
    return 0;
}

int cmd_actmod_call(const std::string& module, const std::string& locate,
                    const std::string& operation, const std::vector<std::string>& arg_texts,
                    int timeout) {
    term::TermList args;
    for (const auto& text : arg_texts) args.push_back(term::parse_term(text));
    actmod::ModuleAddress address = make_locator(locate)(module);
    actmod::CallOutcome outcome =
        actmod::call_remote(address, actmod::GoalCall{operation, std::move(args)}, timeout);
    std::cout << actmod::outcome_text(outcome) << "\n";
    switch (outcome.kind) {
    case actmod::CallOutcome::Kind::Success: return 0;
    case actmod::CallOutcome::Kind::Failure: return 1;
    case actmod::CallOutcome::Kind::RemoteError: return 2;
    }
    return 2;
}

int cmd_actmod_nameserver(int port) {
    actmod::NameServer server(port);
    std::cout << "name server at " << server.address().host << ":" << server.address().port
              << std::endl;
    install_signal_handlers();
    wait_for_signal();
    server.shutdown();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"web toolkit: markup terms, templates, CGI forms, HTTP and active modules"};
    app.require_subcommand(1);

    // fetch
    std::string fetch_url_text, ims, ua, out_file;
    bool fetch_head = false;
    int fetch_timeout = 0;
    auto* fetch = app.add_subcommand("fetch", "fetch a document over HTTP/1.0");
    fetch->add_option("url", fetch_url_text)->required();
    fetch->add_flag("--head", fetch_head, "request the header only");
    fetch->add_option("--timeout", fetch_timeout, "seconds to wait");
    fetch->add_option("--if-modified-since", ims, "HTTP date");
    fetch->add_option("--user-agent", ua);
    fetch->add_option("--out", out_file, "write the body to a file");

    // check-links
    std::string check_url_text;
    int check_timeout = 20, check_jobs = 8;
    auto* check = app.add_subcommand("check-links", "probe every anchor in a page");
    check->add_option("url", check_url_text)->required();
    check->add_option("--timeout", check_timeout, "per-probe timeout in seconds");
    check->add_option("--jobs", check_jobs, "parallel probes");

    // parse / render
    std::string parse_file, render_file;
    bool parse_xml = false, render_xml = false;
    auto* parse = app.add_subcommand("parse", "markup text to canonical terms");
    parse->add_option("file", parse_file, "input file (stdin when omitted)");
    parse->add_flag("--xml", parse_xml);
    auto* render = app.add_subcommand("render", "canonical terms to markup text");
    render->add_option("file", render_file, "input file (stdin when omitted)");
    render->add_flag("--xml", render_xml);

    // template
    std::string template_file;
    std::vector<std::string> bind_files, bind_texts;
    auto* tpl = app.add_subcommand("template", "fill a slotted template");
    tpl->add_option("--template", template_file)->required();
    tpl->add_option("--bind", bind_files, "name=FILE (parsed markup)");
    tpl->add_option("--bind-text", bind_texts, "name=TEXT (parsed markup)");

    // actmod
    auto* actmod_cmd = app.add_subcommand("actmod", "active module runtime");
    actmod_cmd->require_subcommand(1);
    std::string serve_module = "phone_db", serve_publish;
    int serve_port = 0;
    auto* serve = actmod_cmd->add_subcommand("serve", "run a module");
    serve->add_option("--module", serve_module);
    serve->add_option("--publish", serve_publish, "file:DIR | web:DIR | nameserver:HOST:PORT")
        ->required();
    serve->add_option("--port", serve_port);

    std::string call_module, call_locate, call_operation;
    std::vector<std::string> call_args;
    int call_timeout = 60;
    auto* call = actmod_cmd->add_subcommand("call", "call a remote operation");
    call->add_option("--module", call_module)->required();
    call->add_option("--locate", call_locate, "file:DIR | web:URL | nameserver:HOST:PORT")
        ->required();
    call->add_option("--timeout", call_timeout);
    call->add_option("operation", call_operation)->required();
    call->add_option("args", call_args, "argument terms");

    int ns_port = 0;
    auto* ns = actmod_cmd->add_subcommand("nameserver", "run the name server");
    ns->add_option("--port", ns_port)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fetch)
            return cmd_fetch(fetch_url_text, fetch_head, fetch_timeout, ims, ua, out_file);
        if (*check) return cmd_check_links(check_url_text, check_timeout, check_jobs);
        if (*parse) return cmd_parse(parse_file, parse_xml);
        if (*render) return cmd_render(render_file, render_xml);
        if (*tpl) return cmd_template(template_file, bind_files, bind_texts);
        if (*serve) return cmd_actmod_serve(serve_module, serve_publish, serve_port);
        if (*call)
            return cmd_actmod_call(call_module, call_locate, call_operation, call_args,
                                   call_timeout);
        if (*ns) return cmd_actmod_nameserver(ns_port);
    } catch (const std::exception& e) {
        std::cerr << "termweb: " << e.what() << std::endl;
        return 2;
    }
    return 2;
}
