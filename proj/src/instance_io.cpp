#include "gmmcsp/instance_io.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>

namespace gmmcsp {

namespace {

class Lexer {
public:
    explicit Lexer(const std::string & text) : text_(text) {}

    /// Next whitespace-delimited token, skipping '#' comments.
    std::optional<std::string> next()
    {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    ++pos_;
            } else {
                break;
            }
        }
        if (pos_ >= text_.size())
            return std::nullopt;
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
            !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '#')
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    /// Peeks without consuming.
    std::optional<std::string> peek()
    {
        const std::size_t pos = pos_;
        const int line = line_;
        auto token = next();
        pos_ = pos;
        line_ = line;
        return token;
    }

    int line() const { return line_; }

private:
    const std::string & text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

int parse_int(Lexer & lex, const char * what)
{
    auto token = lex.next();
    if (!token)
        throw ParseError(lex.line(), std::string("expected ") + what + ", found end of file");
    int value = 0;
    auto [ptr, ec] = std::from_chars(token->data(), token->data() + token->size(), value);
    if (ec != std::errc{} || ptr != token->data() + token->size())
        throw ParseError(lex.line(), std::string("expected ") + what + ", found '" + *token + "'");
    return value;
}

void expect_keyword(Lexer & lex, const char * keyword)
{
    auto token = lex.next();
    if (!token)
        throw ParseError(lex.line(), std::string("expected '") + keyword + "', found end of file");
    if (*token != keyword)
        throw ParseError(lex.line(), std::string("expected '") + keyword + "', found '" + *token + "'");
}

bool looks_like_int(const std::string & token)
{
    std::size_t start = (token[0] == '-' || token[0] == '+') ? 1 : 0;
    if (start >= token.size())
        return false;
    for (std::size_t i = start; i < token.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(token[i])))
            return false;
    return true;
}

struct OpBlock {
    OperationTable op;
};

OpBlock parse_op_block(Lexer & lex)
{
    expect_keyword(lex, "gmmcsp");
    const int version = parse_int(lex, "format version");
    if (version != 1)
        throw SemanticError("unsupported format version " + std::to_string(version));

    expect_keyword(lex, "domain");
    const int q = parse_int(lex, "domain size");
    if (q < 1)
        throw SemanticError("domain size must be positive");

    expect_keyword(lex, "op");
    const int k = parse_int(lex, "operation arity");

    expect_keyword(lex, "table");
    std::vector<int> values;
    while (true) {
        auto token = lex.peek();
        if (!token || !looks_like_int(*token))
            break;
        values.push_back(parse_int(lex, "table entry"));
    }

    try {
        return OpBlock{build_operation(q, k, values)};
    } catch (const Error & e) {
        throw SemanticError(e.what());
    }
}

} // namespace

ParsedInstance parse_instance(const std::string & text)
{
    Lexer lex(text);
    OpBlock block = parse_op_block(lex);
    const int q = block.op.domain_size();

    expect_keyword(lex, "vars");
    const int n = parse_int(lex, "variable count");
    if (n < 1)
        throw SemanticError("instance must have at least one variable");

    expect_keyword(lex, "constraints");
    const int m = parse_int(lex, "constraint count");
    if (m < 0)
        throw SemanticError("constraint count cannot be negative");

    ParsedInstance parsed{std::move(block.op), Instance{n, q, {}}, {}};
    for (int l = 1; l <= m; ++l) {
        expect_keyword(lex, "scope");
        const int arity = parse_int(lex, "scope length");
        if (arity < 1)
            throw SemanticError("constraint " + std::to_string(l) + " has an empty scope");
        std::vector<int> scope;
        for (int j = 0; j < arity; ++j) {
            const int var = parse_int(lex, "variable index");
            if (var < 1 || var > n)
                throw SemanticError("constraint " + std::to_string(l) +
                    " references variable " + std::to_string(var) + " outside 1.." +
                    std::to_string(n));
            scope.push_back(var);
        }

        expect_keyword(lex, "tuples");
        const int count = parse_int(lex, "tuple count");
        if (count < 0)
            throw SemanticError("tuple count cannot be negative");
        std::vector<Tuple> tuples;
        for (int t = 0; t < count; ++t) {
            Tuple tuple;
            for (int j = 0; j < arity; ++j) {
                const int v = parse_int(lex, "tuple value");
                if (v < 0 || v >= q)
                    throw SemanticError("constraint " + std::to_string(l) +
                        " contains value " + std::to_string(v) + " outside 0.." +
                        std::to_string(q - 1));
                tuple.push_back(static_cast<Value>(v));
            }
            tuples.push_back(std::move(tuple));
        }

        Relation relation(arity, std::move(tuples));
        if (relation.size() != static_cast<std::size_t>(count))
            parsed.warnings.push_back("constraint " + std::to_string(l) +
                ": dropped " + std::to_string(count - relation.size()) +
                " duplicate tuple(s)");
        parsed.instance.constraints.push_back(Constraint{std::move(scope), std::move(relation)});
    }

    if (auto stray = lex.next())
        throw ParseError(lex.line(), "unexpected trailing '" + *stray + "'");
    return parsed;
}

OperationTable parse_operation(const std::string & text)
{
    Lexer probe(text);
    OpBlock block = parse_op_block(probe);
    if (!probe.peek())
        return std::move(block.op); // operation-only file
    return parse_instance(text).op;
}

std::string serialize_instance(const OperationTable & op, const Instance & instance)
{
    std::ostringstream out;
    out << "gmmcsp 1\n";
    out << "domain " << op.domain_size() << "\n";
    out << "op " << op.arity() << "\n";
    out << "table";
    for (Value v : op.values())
        out << ' ' << static_cast<int>(v);
    out << "\n";
    out << "vars " << instance.num_vars << "\n";
    out << "constraints " << instance.constraints.size() << "\n";
    for (const Constraint & c : instance.constraints) {
        out << "scope " << c.scope.size();
        for (int v : c.scope)
            out << ' ' << v;
        out << "\n";
        out << "tuples " << c.relation.size() << "\n";
        for (const Tuple & t : c.relation.tuples()) {
            for (std::size_t j = 0; j < t.size(); ++j)
                out << (j ? " " : "") << static_cast<int>(t[j]);
            out << "\n";
        }
    }
    return out.str();
}

} // namespace gmmcsp
