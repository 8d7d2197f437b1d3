#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "termweb/error.hpp"

namespace termweb::term {

class Term;
using TermList = std::vector<Term>;

/// Raised when term text cannot be parsed.
class TermSyntax : public Error {
public:
    TermSyntax(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset(offset) {}
    std::size_t offset;
};

struct Compound {
    std::string name;
    TermList args;
};

struct Placeholder {};

/// A symbolic value: integers, floats, atoms (bare tokens), strings,
/// lists, compounds and the `_` placeholder.  This is the universe both
/// the functional-notation printer and the RPC wire format speak.
class Term {
public:
    using Variant = std::variant<std::int64_t, double, std::string, Compound, TermList, Placeholder>;

    // std::string alone is ambiguous between atom and string, so keep a tag.
    enum class Kind { Int, Float, Atom, String, List, Compound, Placeholder };

    static Term integer(std::int64_t v);
    static Term real(double v);
    static Term atom(std::string name);
    static Term str(std::string text);
    static Term list(TermList items);
    static Term compound(std::string name, TermList args);
    static Term placeholder();

    Kind kind() const { return kind_; }
    bool is_atom() const { return kind_ == Kind::Atom; }
    bool is_string() const { return kind_ == Kind::String; }
    bool is_list() const { return kind_ == Kind::List; }
    bool is_compound() const { return kind_ == Kind::Compound; }
    bool is_placeholder() const { return kind_ == Kind::Placeholder; }
    bool is_number() const { return kind_ == Kind::Int || kind_ == Kind::Float; }

    std::int64_t int_value() const { return std::get<std::int64_t>(v_); }
    double float_value() const { return std::get<double>(v_); }
    /// Atom name or string content depending on kind.
    const std::string& text() const { return std::get<std::string>(v_); }
    const TermList& items() const { return std::get<TermList>(v_); }
    const std::string& name() const { return std::get<Compound>(v_).name; }
    const TermList& args() const { return std::get<Compound>(v_).args; }

    bool operator==(const Term& other) const;
    bool operator!=(const Term& other) const { return !(*this == other); }

private:
    Term(Kind kind, Variant v) : kind_(kind), v_(std::move(v)) {}
    Kind kind_;
    Variant v_;
};

/// Renders a term in canonical functional notation: `f(1,g(2))`,
/// strings double-quoted, placeholders as `_`, `=(a,b)` printed infix.
std::string to_text(const Term& t);

/// Parses one term from `text` starting at `pos`; advances `pos` past it.
Term parse_term(const std::string& text, std::size_t& pos);

/// Parses exactly one term; trailing non-space input is an error.
Term parse_term(const std::string& text);

/// Parses a whitespace-separated sequence of terms until end of input.
TermList parse_terms(const std::string& text);

}  // namespace termweb::term
