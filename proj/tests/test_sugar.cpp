#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/gen.hpp"
#include "termweb/html_codec.hpp"
#include "termweb/sugar.hpp"

using namespace termweb;
using namespace termweb::sugar;

namespace {
std::string html(const markup::Node& n) { return codec::render(n); }
}

TEST_CASE("document frame and breaks") {
    CHECK(html(start()) == "<html>");
    CHECK(html(end()) == "</html>");
    CHECK(html(hrule()) == "<hr>");
    CHECK(html(linebreak()) == "<br>");
    CHECK(html(parbreak()) == "<p>");
    CHECK(html(nl()) == "\n");
}

TEST_CASE("images and references") {
    CHECK(html(image("phone.gif")) == "<img src=\"phone.gif\">");
    CHECK(html(image("a.png", {{"alt", "A"}})) == "<img src=\"a.png\" alt=\"A\">");
    CHECK(html(ref("http://x/", markup::text("T"))) == "<a href=\"http://x/\">T</a>");
    CHECK(html(label("sec1", markup::text("T"))) == "<a name=\"sec1\">T</a>");
}

TEST_CASE("headings take levels 1..6") {
    CHECK(html(heading(2, markup::text("T"))) == "<h2>T</h2>");
    CHECK(html(heading(6, markup::text("T"))) == "<h6>T</h6>");
    CHECK_THROWS_AS(html(heading(0, markup::text("T"))), MalformedSugar);
    CHECK_THROWS_AS(html(heading(7, markup::text("T"))), MalformedSugar);
}

TEST_CASE("lists") {
    CHECK(html(itemize({markup::text("a"), markup::text("b")})) ==
          "<ul><li>a</li><li>b</li></ul>");
    CHECK(html(enumerate({markup::text("a")})) == "<ol><li>a</li></ol>");
    CHECK(html(description({{markup::text("term"), markup::text("def")},
                            {markup::text("only-def")}})) ==
          "<dl><dt>term</dt><dd>def</dd><dd>only-def</dd></dl>");
    CHECK(html(preformatted({markup::text("l1"), markup::text("l2")})) == "<pre>l1\nl2\n</pre>");
    CHECK(html(nice_itemize("dot.gif", {markup::text("x")})) ==
          "<img src=\"dot.gif\"> x<br>");
}

TEST_CASE("verbatim escapes the four specials") {
    CHECK(html(verbatim("a<b&c")) == "a&lt;b&amp;c");
    CHECK(html(verbatim("\"x\" > y")) == "&quot;x&quot; &gt; y");
    // no raw specials survive, regardless of input
    gen::Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        std::string content = rng.word(0, 20, "ab<>&\" ;x");
        std::string out = html(verbatim(content));
        CHECK(out.find('<') == std::string::npos);
        CHECK(out.find('>') == std::string::npos);
        CHECK(out.find('"') == std::string::npos);
        for (std::size_t p = out.find('&'); p != std::string::npos; p = out.find('&', p + 1)) {
            bool entity = out.compare(p, 5, "&amp;") == 0 || out.compare(p, 4, "&lt;") == 0 ||
                          out.compare(p, 4, "&gt;") == 0 || out.compare(p, 6, "&quot;") == 0;
            CHECK(entity);
        }
    }
}

TEST_CASE("comment and declaration sugar pass through the codec") {
    CHECK(html(markup::comment("note")) == "<!--note-->");
    CHECK(html(markup::declare("DOCTYPE html")) == "<!DOCTYPE html>");
}

TEST_CASE("entities and symbolic terms") {
    CHECK(html(entity("nbsp")) == "&nbsp;");
    CHECK(html(prolog_term(term::parse_term("f(1,g(2))"))) == "f(1,g(2))");
    CHECK(html(prolog_term(term::Term::placeholder())) == "_");
    CHECK(prolog_term_text(term::Term::atom("foo")) == "foo");
}

TEST_CASE("cgi reply header") {
    CHECK(html(cgi_reply()) == "Content-type: text/html\n\n");
}

TEST_CASE("raw begin/end fragments") {
    CHECK(html(begin_tag("pre")) == "<pre>");
    CHECK(html(begin_tag("table", {{"border", "1"}})) == "<table border=\"1\">");
    CHECK(html(end_tag("pre")) == "</pre>");
}

TEST_CASE("forms vocabulary") {
    CHECK(html(start_form()) == "<form method=\"POST\">");
    CHECK(html(start_form("URL")) == "<form method=\"POST\" action=\"URL\">");
    CHECK(html(start_form("URL", {{"method", "GET"}})) ==
          "<form action=\"URL\" method=\"GET\">");
    CHECK(html(end_form()) == "</form>");
    CHECK(html(checkbox("c", "on")) == "<input type=\"checkbox\" name=\"c\" checked>");
    CHECK(html(checkbox("c", "off")) == "<input type=\"checkbox\" name=\"c\">");
    CHECK(html(radio("r", "v1", "v1")) ==
          "<input type=\"radio\" name=\"r\" value=\"v1\" checked>");
    CHECK(html(radio("r", "v1", "v2")) == "<input type=\"radio\" name=\"r\" value=\"v1\">");
    CHECK(html(input("text", {{"name", "person_name"}, {"size", "20"}})) ==
          "<input type=\"text\" name=\"person_name\" size=\"20\">");
    CHECK(html(textinput("t", {{"rows", "2"}}, markup::text("hi"))) ==
          "<textarea name=\"t\" rows=\"2\">hi</textarea>");
}

TEST_CASE("selection menus") {
    CHECK(html(option("o", "b", {"a", "b"})) ==
          "<select name=\"o\"><option>a</option><option selected>b</option></select>");
    // a value not among the options selects the first one
    CHECK(html(option("o", "zz", {"a", "b"})) ==
          "<select name=\"o\"><option selected>a</option><option>b</option></select>");
    CHECK(html(menu("m", {{"size", "2"}},
                    {markup::text("one"), selected(markup::text("two"))})) ==
          "<select name=\"m\" size=\"2\"><option>one</option>"
          "<option selected>two</option></select>");
    CHECK_THROWS_AS(html(selected(markup::text("x"))), MalformedSugar);
}

TEST_CASE("expand leaves core terms alone") {
    gen::Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        markup::NodeList t = markup::normalize(gen::tree(rng, 3));
        CHECK(markup::term_equal(expand(t), t));
    }
}

TEST_CASE("expand commutes with sequence flattening") {
    markup::Node nested = markup::seq({image("x.gif"), markup::seq({hrule()})});
    markup::NodeList left = markup::normalize(expand(nested));
    markup::NodeList right =
        markup::normalize(markup::NodeList{expand(image("x.gif")), expand(hrule())});
    CHECK(markup::term_equal(left, right));
}

TEST_CASE("user expansions") {
    ExpansionRegistry registry;

    SUBCASE("registered rules fire and can produce more sugar") {
        registry.register_expansion("mytable", 1, [](const markup::SugarNode& s) {
            return markup::env("table", {}, {std::get<markup::Node>(s.args[0])});
        });
        markup::Node t(std::make_shared<markup::SugarNode>(
            markup::SugarNode{"mytable", {markup::text("x")}}));
        CHECK(codec::render(registry.expand_normalize(t)) == "<table>x</table>");

        registry.register_expansion("fancy", 1, [](const markup::SugarNode& s) {
            return heading(2, std::get<markup::Node>(s.args[0]));
        });
        markup::Node f(std::make_shared<markup::SugarNode>(
            markup::SugarNode{"fancy", {markup::text("T")}}));
        CHECK(codec::render(registry.expand_normalize(f)) == "<h2>T</h2>");
    }

    SUBCASE("last registration wins") {
        registry.register_expansion("thing", 0,
                                    [](const markup::SugarNode&) { return markup::text("v1"); });
        registry.register_expansion("thing", 0,
                                    [](const markup::SugarNode&) { return markup::text("v2"); });
        markup::Node t(std::make_shared<markup::SugarNode>(markup::SugarNode{"thing", {}}));
        CHECK(codec::render(registry.expand_normalize(t)) == "v2");
    }

    SUBCASE("user rules shadow built-ins") {
        registry.register_expansion("hrule", 0,
                                    [](const markup::SugarNode&) { return markup::text("===="); });
        CHECK(codec::render(registry.expand_normalize(hrule())) == "====");
        // the global registry still has the built-in
        CHECK(html(hrule()) == "<hr>");
    }

    SUBCASE("core heads are reserved") {
        CHECK_THROWS_AS(registry.register_expansion(
                            "text", 1, [](const markup::SugarNode&) { return markup::text(""); }),
                        ReservedHead);
        CHECK_THROWS_AS(registry.register_expansion(
                            "env", 3, [](const markup::SugarNode&) { return markup::text(""); }),
                        ReservedHead);
    }

    SUBCASE("runaway recursion is cut off") {
        registry.register_expansion("loop", 0, [](const markup::SugarNode&) {
            return markup::Node(
                std::make_shared<markup::SugarNode>(markup::SugarNode{"loop", {}}));
        });
        markup::Node t(std::make_shared<markup::SugarNode>(markup::SugarNode{"loop", {}}));
        CHECK_THROWS_AS(registry.expand_normalize(t), ExpansionDepthExceeded);
    }
}

TEST_CASE("malformed sugar names the constructor") {
    markup::Node wrong_shape(std::make_shared<markup::SugarNode>(
        markup::SugarNode{"image", {std::int64_t(42)}}));
    try {
        expand(wrong_shape);
        FAIL("expected MalformedSugar");
    } catch (const MalformedSugar& e) {
        CHECK(std::string(e.what()).find("image/1") != std::string::npos);
    }
    markup::Node unknown(std::make_shared<markup::SugarNode>(markup::SugarNode{"nope", {}}));
    CHECK_THROWS_AS(expand(unknown), MalformedSugar);
}

TEST_CASE("term text round-trips through sugar heads") {
    CHECK(html(node_from_term(term::parse_term("image(\"phone.gif\")"))) ==
          "<img src=\"phone.gif\">");
    CHECK(html(node_from_term(term::parse_term("ref(\"a\",\"T\")"))) == "<a href=\"a\">T</a>");
    CHECK(html(node_from_term(term::parse_term("heading(2,\"T\")"))) == "<h2>T</h2>");
    CHECK(html(node_from_term(term::parse_term("[start,hrule,end]"))) == "<html><hr></html>");
    // general environment reading
    CHECK(html(node_from_term(term::parse_term("b(\"daniel\")"))) == "<b>daniel</b>");
    CHECK(html(node_from_term(term::parse_term("a([href=\"x\"],\"T\")"))) ==
          "<a href=\"x\">T</a>");
    // core constructors
    CHECK(html(node_from_term(term::parse_term("element(img,[src=\"p\",ismap])"))) ==
          "<img src=\"p\" ismap>");
    CHECK(html(node_from_term(term::parse_term("menu(m,[],[one,selected(two)])"))) ==
          "<select name=\"m\"><option>one</option><option selected>two</option></select>");
    CHECK_THROWS_AS(node_from_term(term::parse_term("_")), Error);
}
