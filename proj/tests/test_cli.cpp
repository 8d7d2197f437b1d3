#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>

#include "support/fixture_http.hpp"
#include "support/subprocess.hpp"
#include "termweb/actmod.hpp"
#include "termweb/html_codec.hpp"
#include "termweb/phonedb.hpp"
#include "termweb/template.hpp"

using namespace termweb;

namespace {

const std::string kCli = TERMWEB_CLI_BIN;
const std::string kCgi = PHONE_DB_CGI_BIN;
const std::filesystem::path kCorpus = TERMWEB_CORPUS_DIR;

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() /
                ("termweb_cli_" + std::to_string(::getpid()) + "_" + name);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("parse | render round-trips corpus files through the CLI") {
    for (const char* name : {"phone_form.html", "lists.html", "malformed_unclosed.html"}) {
        auto file = (kCorpus / name).string();
        auto parsed = subprocess::run({kCli, "parse", file});
        REQUIRE(parsed.exit_code == 0);
        auto terms_file = temp_file("terms.txt", parsed.out);
        auto rendered = subprocess::run({kCli, "render", terms_file.string()});
        REQUIRE(rendered.exit_code == 0);
        auto reparsed = subprocess::run({kCli, "parse", temp_file("round.html", rendered.out).string()});
        CHECK(reparsed.out == parsed.out);
    }
}

TEST_CASE("parse reads stdin and --xml switches dialects") {
    auto r = subprocess::run({kCli, "parse"}, {}, "<b>x</b>");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "env(b,[],[text(\"x\")])\n");
    auto x = subprocess::run({kCli, "parse", "--xml"}, {}, "<A/>");
    CHECK(x.out == "element('A',[])\n");
    // xml errors exit nonzero with a one-line diagnostic
    auto bad = subprocess::run({kCli, "parse", "--xml"}, {}, "<a><b></a>");
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("termweb:") == 0);
    CHECK(std::count(bad.err.begin(), bad.err.end(), '\n') == 1);
}

TEST_CASE("render accepts sugar heads") {
    auto r = subprocess::run({kCli, "render"}, {},
                             "[start,image(\"phone.gif\"),heading(2,\"T\"),end]");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "<html><img src=\"phone.gif\"><h2>T</h2></html>");
}

TEST_CASE("template fill through the CLI") {
    auto template_path = kCorpus / "tlfdb_template.html";
    auto r = subprocess::run(
        {kCli, "template", "--template", template_path.string(), "--bind-text", "response=hi"});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("<hr>\nhi\n<form") != std::string::npos);

    auto missing = subprocess::run(
        {kCli, "template", "--template", template_path.string(), "--bind-text", "unknown=x"});
    CHECK(missing.exit_code == 2);
    CHECK(missing.err.find("unknown") != std::string::npos);
}

TEST_CASE("fetch: body to stdout, exit codes per status") {
    fixture::HttpServer server;
    server.route("/page", fixture::Route{.body = "<html>hello</html>"});
    server.route("/gone", fixture::Route{.status = 404, .phrase = "Not Found"});

    auto ok = subprocess::run({kCli, "fetch", server.url("/page")});
    CHECK(ok.exit_code == 0);
    CHECK(ok.out == "<html>hello</html>");

    auto head = subprocess::run({kCli, "fetch", "--head", server.url("/page")});
    CHECK(head.exit_code == 0);
    CHECK(head.out.find("status: 200 OK\n") == 0);
    CHECK(head.out.find("content_length: 18") != std::string::npos);
    CHECK(head.out.find("content_type: text/html") != std::string::npos);

    auto gone = subprocess::run({kCli, "fetch", server.url("/gone")});
    CHECK(gone.exit_code == 1);

    auto unreachable = subprocess::run({kCli, "fetch", "http://127.0.0.1:1/x"});
    CHECK(unreachable.exit_code == 2);
    CHECK_FALSE(unreachable.err.empty());

    auto not_http = subprocess::run({kCli, "fetch", "ftp://x/"});
    CHECK(not_http.exit_code == 2);

    auto out_path = temp_file("fetched.html", "");
    auto to_file = subprocess::run({kCli, "fetch", "--out", out_path.string(),
                                    server.url("/page")});
    CHECK(to_file.exit_code == 0);
    CHECK(to_file.out.empty());
    CHECK(tmpl::file_to_string(out_path) == "<html>hello</html>");
}

TEST_CASE("check-links reports bad anchors in document order") {
    fixture::HttpServer server;
    server.route("/ok.html", fixture::Route{.body = "fine"});
    server.route("/site.html",
                 fixture::Route{.body = "<html><body>"
                                        "<a href=\"/ok.html\">good</a>"
                                        "<a href=\"missing.html\">bad</a>"
                                        "<a href=\"ftp://other/x\">skipped</a>"
                                        "<div><a href=\"/ok.html\">nested good</a></div>"
                                        "</body></html>"});
    auto r = subprocess::run({kCli, "check-links", server.url("/site.html")});
    CHECK(r.exit_code == 1);
    CHECK(r.out == "badlink missing.html Not Found\n");

    // probing uses HEAD only
    int head_probes = 0, get_fetches = 0;
    for (const auto& req : server.log()) {
        if (req.method == "HEAD") ++head_probes;
        if (req.method == "GET") ++get_fetches;
    }
    CHECK(get_fetches == 1);  // the root document
    CHECK(head_probes == 3);  // ok, missing, nested ok

    auto clean = subprocess::run({kCli, "check-links", server.url("/ok.html")});
    CHECK(clean.exit_code == 0);  // no anchors, nothing bad
    CHECK(clean.out.empty());

    server.route("/data.json",
                 fixture::Route{.content_type = "application/json", .body = "{}"});
    auto not_html = subprocess::run({kCli, "check-links", server.url("/data.json")});
    CHECK(not_html.exit_code == 2);
    CHECK(not_html.err.find("text/html") != std::string::npos);
}

TEST_CASE("phone_db.cgi end to end") {
    auto run_cgi = [&](const std::string& query,
                       std::vector<std::string> extra = {}) -> subprocess::Result {
        std::vector<std::string> argv = {kCgi};
        argv.insert(argv.end(), extra.begin(), extra.end());
        return subprocess::run(argv, {{"REQUEST_METHOD", "GET"}, {"QUERY_STRING", query}});
    };

    auto manuel = run_cgi("person_name=manuel");
    REQUIRE(manuel.exit_code == 0);
    CHECK(manuel.out.find("Content-type: text/html\n\n") == 0);
    CHECK(manuel.out.find("Telephone number of <b>manuel</b>: 336-7435") != std::string::npos);

    auto zed = run_cgi("person_name=zed");
    CHECK(zed.out.find("No telephone number available for <b>zed</b>.") != std::string::npos);

    auto blank = run_cgi("person_name=");
    CHECK(blank.out.find("Telephone number") == std::string::npos);
    CHECK(blank.out.find("<form") != std::string::npos);

    // POST delivery reads the body from standard input
    auto posted = subprocess::run({kCgi},
                                  {{"REQUEST_METHOD", "POST"},
                                   {"CONTENT_TYPE", "application/x-www-form-urlencoded"},
                                   {"CONTENT_LENGTH", "18"}},
                                  "person_name=daniel");
    REQUIRE(posted.exit_code == 0);
    CHECK(posted.out.find("336-7448") != std::string::npos);

    // output parses back with exactly one form environment
    markup::NodeList terms = codec::parse(manuel.out);
    std::function<int(const markup::NodeList&)> count_forms =
        [&](const markup::NodeList& nodes) {
            int n = 0;
            for (const auto& node : nodes)
                if (node.is<markup::Environment>()) {
                    const auto& e = node.as<markup::Environment>();
                    n += (e.name == "form" ? 1 : 0) + count_forms(e.body);
                }
            return n;
        };
    CHECK(count_forms(terms) == 1);

    // the active-module backend answers byte-identically
    auto book = std::make_shared<phonedb::PhoneBook>();
    actmod::Server server(phonedb::make_registry(book), [](const actmod::ModuleAddress&) {});
    std::string backend =
        server.address().host + ":" + std::to_string(server.address().port);
    for (const char* q : {"person_name=manuel", "person_name=zed", "person_name=", ""}) {
        auto direct = run_cgi(q);
        auto proxied = run_cgi(q, {"--backend", backend});
        REQUIRE(proxied.exit_code == 0);
        CHECK(direct.out == proxied.out);
    }
}

TEST_CASE("actmod serve/call/nameserver CLI round trip") {
    auto dir = std::filesystem::temp_directory_path() /
               ("termweb_cli_addr_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    subprocess::Daemon server({kCli, "actmod", "serve", "--module", "phone_db", "--publish",
                               "file:" + dir.string()});
    server.wait_for_output("serving phone_db");

    auto call = subprocess::run({kCli, "actmod", "call", "--module", "phone_db", "--locate",
                                 "file:" + dir.string(), "response", "\"daniel\"", "_"});
    CHECK(call.exit_code == 0);
    CHECK(call.out.find("success([") == 0);
    CHECK(call.out.find("336-7448") != std::string::npos);

    auto bad_op = subprocess::run({kCli, "actmod", "call", "--module", "phone_db", "--locate",
                                   "file:" + dir.string(), "nonsense"});
    CHECK(bad_op.exit_code == 2);

    server.stop();
    std::filesystem::remove_all(dir);

    auto no_addr = subprocess::run({kCli, "actmod", "call", "--module", "phone_db", "--locate",
                                    "file:" + dir.string(), "response", "\"daniel\"", "_"});
    CHECK(no_addr.exit_code == 2);
    CHECK_FALSE(no_addr.err.empty());
}

TEST_CASE("name-server round through the CLI") {
    // a free port for the name server's fixed address
    int port;
    {
        net::Listener probe(0);
        port = probe.port();
    }
    std::string ns_spec = "nameserver:127.0.0.1:" + std::to_string(port);

    subprocess::Daemon ns({kCli, "actmod", "nameserver", "--port", std::to_string(port)});
    ns.wait_for_output("name server at");

    subprocess::Daemon server(
        {kCli, "actmod", "serve", "--module", "phone_db", "--publish", ns_spec});
    server.wait_for_output("serving phone_db");

    auto call = subprocess::run({kCli, "actmod", "call", "--module", "phone_db", "--locate",
                                 ns_spec, "response", "\"sacha\"", "_"});
    CHECK(call.exit_code == 0);
    CHECK(call.out.find("543-5316") != std::string::npos);

    auto ghost = subprocess::run(
        {kCli, "actmod", "call", "--module", "ghost", "--locate", ns_spec, "anything"});
    CHECK(ghost.exit_code == 2);
}
