#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/gen.hpp"
#include "termweb/term.hpp"

using namespace termweb::term;

TEST_CASE("functional notation") {
    Term t = Term::compound("f", {Term::integer(1), Term::compound("g", {Term::integer(2)})});
    CHECK(to_text(t) == "f(1,g(2))");
    CHECK(to_text(Term::placeholder()) == "_");
    CHECK(to_text(Term::atom("foo")) == "foo");
    CHECK(to_text(Term::str("hi")) == "\"hi\"");
    CHECK(to_text(Term::list({Term::atom("a"), Term::integer(-2)})) == "[a,-2]");
}

TEST_CASE("pairs print infix") {
    Term pair = Term::compound("=", {Term::atom("src"), Term::str("phone.gif")});
    CHECK(to_text(pair) == "src=\"phone.gif\"");
    CHECK(parse_term("src=\"phone.gif\"") == pair);
}

TEST_CASE("quoting") {
    CHECK(to_text(Term::atom("has space")) == "'has space'");
    CHECK(to_text(Term::atom("Cap")) == "'Cap'");
    CHECK(to_text(Term::str("a\"b\\c\nd")) == "\"a\\\"b\\\\c\\nd\"");
    CHECK(parse_term("'has space'") == Term::atom("has space"));
}

TEST_CASE("floats keep their kind") {
    CHECK(to_text(Term::real(1.0)) == "1.0");
    CHECK(parse_term("1.0").kind() == Term::Kind::Float);
    CHECK(parse_term("1").kind() == Term::Kind::Int);
    CHECK(parse_term("-3.25") == Term::real(-3.25));
}

TEST_CASE("parse errors carry an offset") {
    CHECK_THROWS_AS(parse_term("f(1,"), TermSyntax);
    CHECK_THROWS_AS(parse_term("f()"), TermSyntax);
    CHECK_THROWS_AS(parse_term("\"unterminated"), TermSyntax);
    CHECK_THROWS_AS(parse_term("foo extra"), TermSyntax);
    CHECK_THROWS_AS(parse_term("_var"), TermSyntax);
}

TEST_CASE("several terms in sequence") {
    TermList terms = parse_terms("foo  bar(1)\n[a]\n");
    REQUIRE(terms.size() == 3);
    CHECK(terms[0] == Term::atom("foo"));
    CHECK(terms[1] == Term::compound("bar", {Term::integer(1)}));
    CHECK(terms[2] == Term::list({Term::atom("a")}));
}

TEST_CASE("text round-trip over random terms") {
    gen::Rng rng(20240915);
    for (int i = 0; i < 500; ++i) {
        Term t = gen::term_value(rng, 4);
        Term back = parse_term(to_text(t));
        CHECK(back == t);
    }
}
