#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/gen.hpp"
#include "termweb/html_codec.hpp"
#include "termweb/template.hpp"

using namespace termweb;
using namespace termweb::tmpl;

namespace {

const char* kTlfDb =
    "<HTML><HEAD><TITLE>Telephone database</TITLE></HEAD>\n"
    "<BODY background=\"bg.gif\">\n"
    "<IMG src=\"phone.gif\">\n"
    "<H2>Telephone database</H2>\n"
    "<HR>\n"
    "<V>response</V>\n"
    "<FORM method=\"POST\">\n"
    "Click here, enter name of clip member, and press Return:<BR>\n"
    "<INPUT type=\"text\" name=\"person_name\" size=\"20\"></FORM>\n"
    "</BODY>\n"
    "</HTML>\n";

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

}  // namespace

TEST_CASE("the demo template yields one slot named response") {
    Template t = parse_template(kTlfDb);
    REQUIRE(t.dict.size() == 1);
    CHECK(t.dict[0].first == "response");
    CHECK_FALSE(t.dict[0].second->bound());

    fill(t.dict, {{"response", markup::text("hi")}});
    std::string page = codec::render(t.terms);
    CHECK(page.find("<hr>\nhi\n<form") != std::string::npos);
}

TEST_CASE("repeated names share one slot") {
    Template t = parse_template("<b><V>x</V></b><i><V>x</V></i>");
    REQUIRE(t.dict.size() == 1);
    fill(t.dict, {{"x", markup::text("!")}});
    CHECK(codec::render(t.terms) == "<b>!</b><i>!</i>");
}

TEST_CASE("dictionary lists names in first-occurrence order") {
    Template t = parse_template("<V>b</V><V>a</V><V>b</V>");
    REQUIRE(t.dict.size() == 2);
    CHECK(t.dict[0].first == "b");
    CHECK(t.dict[1].first == "a");
}

TEST_CASE("slot-free templates parse exactly like documents") {
    const char* doc = "<html><body><b>x</b> y</body></html>";
    Template t = parse_template(doc);
    CHECK(t.dict.empty());
    CHECK(markup::term_equal(t.terms, codec::parse(doc)));
}

TEST_CASE("the V tag is case-insensitive") {
    Template t = parse_template("<v>slotname</v>");
    REQUIRE(t.dict.size() == 1);
    CHECK(t.dict[0].first == "slotname");
}

TEST_CASE("an unclosed V tag stays an ordinary environment") {
    Template t = parse_template("<b>a</b><V>name <i>rest</i>");
    CHECK(t.dict.empty());
    bool saw_env = false;
    for (const auto& node : t.terms)
        if (node.is<markup::Environment>() && node.as<markup::Environment>().name == "v")
            saw_env = true;
    CHECK(saw_env);
}

TEST_CASE("fill errors") {
    Template t = parse_template("<V>x</V>");
    CHECK_THROWS_AS(fill(t.dict, {{"xyz", markup::text("v")}}), UnknownName);
    fill(t.dict, {});  // no-op
    fill(t.dict, {{"x", markup::text("v")}});
    CHECK_THROWS_AS(fill(t.dict, {{"x", markup::text("again")}}), markup::AlreadyBound);
}

TEST_CASE("splice equivalence on the demo template") {
    Template t = parse_template(kTlfDb);
    markup::Node response = markup::seq({markup::text("Telephone number of "),
                                         markup::env("b", {}, {markup::text("sacha")}),
                                         markup::text(": 543-5316")});
    std::string spliced = replace_all(kTlfDb, "<V>response</V>", codec::render(response));
    fill(t.dict, {{"response", response}});
    CHECK(markup::term_equal(codec::parse(codec::render(t.terms)), codec::parse(spliced)));
}

TEST_CASE("splice equivalence over generated templates") {
    gen::Rng rng(20240920);
    for (int i = 0; i < 200; ++i) {
        // build a template with the slot in text position
        markup::NodeList before = gen::tree(rng, 2);
        markup::NodeList after = gen::tree(rng, 2);
        std::string name = "slot" + std::to_string(i % 7);
        std::string source =
            codec::render(before) + "<V>" + name + "</V>" + codec::render(after);

        markup::NodeList value = gen::tree(rng, 2);

        Template t = parse_template(source);
        REQUIRE(t.dict.size() == 1);
        fill(t.dict, {{name, markup::seq(value)}});
        std::string filled = codec::render(t.terms);

        std::string spliced = replace_all(source, "<V>" + name + "</V>", codec::render(value));
        CHECK(markup::term_equal(codec::parse(filled), codec::parse(spliced)));
        if (!markup::term_equal(codec::parse(filled), codec::parse(spliced))) {
            MESSAGE("template: ", source);
            break;
        }
    }
}

TEST_CASE("file_to_string reads bytes and reports missing files") {
    CHECK_THROWS_AS(file_to_string("/nonexistent/file.html"), Error);
}
