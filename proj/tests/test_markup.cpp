#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <thread>

#include "support/gen.hpp"
#include "termweb/html_codec.hpp"
#include "termweb/markup.hpp"

using namespace termweb;
using namespace termweb::markup;

TEST_CASE("fresh slots are distinct and unbound") {
    SlotRef s1 = new_slot();
    SlotRef s2 = new_slot();
    CHECK(s1 != s2);
    CHECK_FALSE(s1->bound());
    CHECK_FALSE(s2->bound());
    bind_slot(s1, text("x"));
    CHECK(s1->bound());
    CHECK_FALSE(s2->bound());
}

TEST_CASE("binding is write-once") {
    SlotRef s = new_slot();
    bind_slot(s, text("Hello"));
    CHECK(codec::render(slot(s)) == "Hello");
    CHECK_THROWS_AS(bind_slot(s, text("again")), AlreadyBound);
}

TEST_CASE("two occurrences of one slot render identically") {
    SlotRef s = new_slot();
    NodeList doc = {slot(s), text("-"), slot(s)};
    bind_slot(s, env("b", {}, {text("x")}));
    CHECK(codec::render(doc) == "<b>x</b>-<b>x</b>");
}

TEST_CASE("normalize flattens nested sequences") {
    NodeList flat = normalize(seq({text("a"), seq({text("b")})}));
    REQUIRE(flat.size() == 2);
    CHECK(flat[0].as<Text>().content == "a");
    CHECK(flat[1].as<Text>().content == "b");
}

TEST_CASE("normalize substitutes bound slots") {
    SlotRef s = new_slot();
    bind_slot(s, elem("hr"));
    NodeList flat = normalize(slot(s));
    REQUIRE(flat.size() == 1);
    CHECK(flat[0].as<Element>().name == "hr");
}

TEST_CASE("normalize names the first unbound slot") {
    SlotRef s = new_slot("greeting");
    try {
        normalize(seq({text("x"), slot(s)}));
        FAIL("expected UnboundSlot");
    } catch (const UnboundSlot& e) {
        CHECK(std::string(e.what()).find("greeting") != std::string::npos);
    }
}

TEST_CASE("normalize is idempotent on generated trees") {
    gen::Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        NodeList t = gen::tree(rng, 3);
        NodeList once = normalize(t);
        CHECK(term_equal(normalize(once), once));
    }
}

TEST_CASE("normalize preserves rendering") {
    gen::Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        NodeList t = gen::tree(rng, 3);
        CHECK(codec::render(t) == codec::render(normalize(t)));
    }
}

TEST_CASE("term_equal basics") {
    CHECK(term_equal(text("x"), text("x")));
    CHECK_FALSE(term_equal(elem("img", {{"src", "a"}}), elem("img", {{"src", "b"}})));
    SlotRef s = new_slot();
    CHECK(term_equal(slot(s), slot(s)));
    CHECK_FALSE(term_equal(slot(s), slot(new_slot())));
    // bound slots compare by binding
    SlotRef a = new_slot(), b = new_slot();
    bind_slot(a, text("v"));
    bind_slot(b, text("v"));
    CHECK(term_equal(slot(a), slot(b)));
    CHECK(term_equal(slot(a), text("v")));
}

TEST_CASE("binding order does not matter") {
    gen::Rng rng(9);
    for (int round = 0; round < 50; ++round) {
        SlotRef s1 = new_slot(), s2 = new_slot(), s3 = new_slot();
        SlotRef t1 = new_slot(), t2 = new_slot(), t3 = new_slot();
        auto doc = [](SlotRef a, SlotRef b, SlotRef c) {
            return NodeList{env("div", {}, {slot(a), slot(b)}), slot(c)};
        };
        NodeList left = doc(s1, s2, s3), right = doc(t1, t2, t3);
        NodeList values = gen::tree(rng, 2);
        values.resize(3, text("pad"));
        bind_slot(s1, values[0]);
        bind_slot(s2, values[1]);
        bind_slot(s3, values[2]);
        bind_slot(t3, values[2]);
        bind_slot(t1, values[0]);
        bind_slot(t2, values[1]);
        CHECK(term_equal(normalize(left), normalize(right)));
    }
}

TEST_CASE("concurrent binding has one winner") {
    for (int round = 0; round < 20; ++round) {
        SlotRef s = new_slot();
        std::atomic<int> winners{0}, losers{0};
        std::vector<std::thread> threads;
        for (int i = 0; i < 8; ++i) {
            threads.emplace_back([&, i] {
                try {
                    bind_slot(s, text("t" + std::to_string(i)));
                    ++winners;
                } catch (const AlreadyBound&) {
                    ++losers;
                }
            });
        }
        for (auto& t : threads) t.join();
        CHECK(winners == 1);
        CHECK(losers == 7);
        CHECK(s->bound());
    }
}

TEST_CASE("element names reject whitespace and markup characters") {
    CHECK_THROWS_AS(elem(""), std::invalid_argument);
    CHECK_THROWS_AS(elem("a b"), std::invalid_argument);
    CHECK_THROWS_AS(env("a<b", {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(Attr(""), std::invalid_argument);
}

TEST_CASE("canonical term text of core nodes") {
    Node n = env("a", {{"href", "x"}}, {text("Clip"), elem("br")});
    CHECK(term::to_text(to_term(n)) == "env(a,[href=\"x\"],[text(\"Clip\"),element(br,[])])");
    CHECK(term::to_text(to_term(comment("c"))) == "comment(\"c\")");
    CHECK(term::to_text(to_term(declare("d"))) == "declare(\"d\")");
}
