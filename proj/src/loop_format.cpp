#include "elrf/loop_format.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <vector>

#include "elrf/errors.hpp"

namespace elrf {

namespace {

struct Cursor {
    const std::string& text;
    int line;
    std::size_t pos = 0;

    int column() const { return static_cast<int>(pos) + 1; }
    bool done() const { return pos >= text.size(); }
    char peek() const { return done() ? '\0' : text[pos]; }
    void skip_ws() {
        while (!done() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, column(), msg); }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Identifier with an optional single prime.
VarId parse_var(Cursor& c) {
    std::string name;
    if (!ident_start(c.peek())) c.fail("expected a variable name");
    while (ident_char(c.peek())) name.push_back(c.text[c.pos++]);
    if (c.peek() == '\'') {
        name.push_back('\'');
        ++c.pos;
        if (c.peek() == '\'') c.fail("unexpected second prime");
    }
    return name;
}

Rational parse_number(Cursor& c) {
    std::string digits;
    if (c.peek() == '-') {
        digits.push_back('-');
        ++c.pos;
    }
    if (!std::isdigit(static_cast<unsigned char>(c.peek()))) c.fail("expected a number");
    while (std::isdigit(static_cast<unsigned char>(c.peek()))) digits.push_back(c.text[c.pos++]);
    if (c.peek() == '/') {
        ++c.pos;
        digits.push_back('/');
        if (!std::isdigit(static_cast<unsigned char>(c.peek())))
            c.fail("expected a denominator");
        while (std::isdigit(static_cast<unsigned char>(c.peek())))
            digits.push_back(c.text[c.pos++]);
    }
    return Rational::parse(digits);
}

// term := number ['*' var] | var
void parse_term(Cursor& c, const Rational& sign, LinExpr& into) {
    if (ident_start(c.peek())) {
        into.add_term(parse_var(c), sign);
        return;
    }
    const Rational q = sign * parse_number(c);
    c.skip_ws();
    if (c.peek() == '*') {
        ++c.pos;
        c.skip_ws();
        into.add_term(parse_var(c), q);
    } else {
        into += LinExpr(q);
    }
}

// expr := ['-'] term (('+'|'-') term)*
LinExpr parse_expr(Cursor& c) {
    LinExpr e;
    c.skip_ws();
    Rational sign(1);
    if (c.peek() == '-') {
        sign = Rational(-1);
        ++c.pos;
        c.skip_ws();
    }
    parse_term(c, sign, e);
    for (;;) {
        c.skip_ws();
        if (c.peek() == '+')
            sign = Rational(1);
        else if (c.peek() == '-')
            sign = Rational(-1);
        else
            return e;
        ++c.pos;
        c.skip_ws();
        parse_term(c, sign, e);
    }
}

RawRel parse_relation(Cursor& c) {
    c.skip_ws();
    const char a = c.peek();
    if (a == '=') {
        ++c.pos;
        return RawRel::Eq;
    }
    if (a == '<' || a == '>') {
        ++c.pos;
        if (c.peek() == '=') {
            ++c.pos;
            return a == '<' ? RawRel::Le : RawRel::Ge;
        }
        return a == '<' ? RawRel::Lt : RawRel::Gt;
    }
    c.fail("expected a relation (<=, >=, =)");
}

void expect_end(Cursor& c) {
    c.skip_ws();
    if (!c.done()) c.fail("unexpected trailing input");
}

std::string strip_comment(const std::string& line) {
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

CandidateFn expr_to_candidate(const LinExpr& e, const std::set<VarId>& unprimed, Cursor& c) {
    CandidateFn fn;
    fn.constant = e.constant();
    for (const auto& [v, q] : e.terms()) {
        if (!unprimed.count(v))
            c.fail(v.back() == '\'' ? "primed variable not allowed here: " + v
                                    : "undeclared variable: " + v);
        fn.coeffs.emplace(v, q);
    }
    return fn;
}

}  // namespace

LoopFile parse_loop_file(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) lines.push_back(strip_comment(line));
    }

    std::vector<VarId> vars;
    std::set<VarId> declared;         // vars plus primes
    std::set<VarId> unprimed;
    std::vector<RawConstraint> body_rows;
    std::optional<CandidateFn> increasing;
    std::optional<CandidateFn> candidate;
    bool seen_vars = false, seen_body = false, in_body = false;

    for (int ln = 1; ln <= static_cast<int>(lines.size()); ++ln) {
        Cursor c{lines[static_cast<std::size_t>(ln - 1)], ln};
        c.skip_ws();
        if (c.done()) continue;

        auto section = [&](const char* name) {
            const std::string& s = c.text;
            const std::string key = std::string(name) + ":";
            if (s.compare(c.pos, key.size(), key) != 0) return false;
            c.pos += key.size();
            return true;
        };

        if (section("vars")) {
            if (seen_vars) c.fail("duplicate vars section");
            seen_vars = true;
            for (;;) {
                c.skip_ws();
                const VarId v = parse_var(c);
                if (v.back() == '\'') c.fail("declare unprimed variables only");
                if (!unprimed.insert(v).second) c.fail("duplicate variable " + v);
                vars.push_back(v);
                declared.insert(v);
                declared.insert(primed(v));
                c.skip_ws();
                if (c.peek() == ',') {
                    ++c.pos;
                    continue;
                }
                expect_end(c);
                break;
            }
            continue;
        }
        if (section("body")) {
            if (seen_body) c.fail("duplicate body section");
            if (!seen_vars) c.fail("body before vars");
            seen_body = true;
            in_body = true;
            expect_end(c);
            continue;
        }
        if (section("increasing")) {
            if (increasing) c.fail("duplicate increasing section");
            if (!seen_body) c.fail("increasing before body");
            in_body = false;
            increasing = expr_to_candidate(parse_expr(c), unprimed, c);
            expect_end(c);
            continue;
        }
        if (section("candidate")) {
            if (candidate) c.fail("duplicate candidate section");
            if (!seen_body) c.fail("candidate before body");
            in_body = false;
            candidate = expr_to_candidate(parse_expr(c), unprimed, c);
            expect_end(c);
            continue;
        }
        if (!in_body) c.fail(seen_vars ? "constraint outside the body section"
                                       : "expected 'vars:' first");

        RawConstraint rc;
        rc.lhs = parse_expr(c);
        c.skip_ws();
        const int rel_col = c.column();
        rc.rel = parse_relation(c);
        if (rc.rel == RawRel::Lt || rc.rel == RawRel::Gt)
            throw ParseError(ln, rel_col, "strict relation in a loop body; use <=, >= or =");
        rc.rhs = parse_expr(c);
        expect_end(c);
        for (const auto* side : {&rc.lhs, &rc.rhs})
            for (const auto& [v, q] : side->terms())
                if (!declared.count(v)) c.fail("undeclared variable: " + v);
        body_rows.push_back(std::move(rc));
    }

    if (!seen_vars) throw ParseError(1, 1, "missing vars section");
    if (!seen_body) throw ParseError(1, 1, "missing body section");

    LoopFile file;
    file.loop = canonicalize(body_rows, vars);
    file.increasing = std::move(increasing);
    file.candidate = std::move(candidate);
    return file;
}

std::string human_constraint(const Constraint& row) {
    LinExpr terms_only;
    for (const auto& [v, q] : row.expr.terms()) terms_only.add_term(v, q);
    Rational rhs = -row.expr.constant();
    const char* rel = row.rel == Rel::Geq0 ? ">=" : row.rel == Rel::Gt0 ? ">" : "=";
    if (!terms_only.terms().empty() && terms_only.terms().begin()->second.sign() < 0 &&
        row.rel != Rel::Eq0) {
        terms_only *= Rational(-1);
        rhs = -rhs;
        rel = row.rel == Rel::Geq0 ? "<=" : "<";
    }
    return terms_only.str() + " " + rel + " " + rhs.str();
}

std::string print_loop_file(const LoopFile& file) {
    std::ostringstream os;
    os << "vars: ";
    for (std::size_t i = 0; i < file.loop.vars.size(); ++i)
        os << (i ? ", " : "") << file.loop.vars[i];
    os << "\nbody:\n";
    for (const auto& row : file.loop.body.rows) os << "  " << human_constraint(row) << "\n";
    if (file.increasing)
        os << "increasing: " << file.increasing->str(file.loop.vars) << "\n";
    if (file.candidate) os << "candidate: " << file.candidate->str(file.loop.vars) << "\n";
    return os.str();
}

}  // namespace elrf
