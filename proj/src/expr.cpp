#include "sgpdt/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <utility>

#include "sgpdt/error.hpp"

namespace sgpdt {

namespace {

struct OpSpelling {
    Op op;
    std::string_view name;
};

constexpr OpSpelling kSpellings[] = {
    {Op::Add, "add"}, {Op::Sub, "sub"}, {Op::Mul, "mul"},
    {Op::Div, "div"}, {Op::Min, "min"}, {Op::Max, "max"},
};

std::string format_double(double value)
{
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, end);
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    std::vector<Node> parse_all()
    {
        std::vector<Node> out;
        parse_expr(out);
        skip_space();
        if (pos_ != text_.size()) {
            fail("trailing characters");
        }
        return out;
    }

private:
    void parse_expr(std::vector<Node>& out)
    {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        if (text_[pos_] == '(') {
            ++pos_;
            const std::string_view head = atom();
            auto it = std::find_if(std::begin(kSpellings), std::end(kSpellings),
                                   [&](const OpSpelling& s) { return s.name == head; });
            if (it == std::end(kSpellings)) {
                fail("unknown function '" + std::string(head) + "'");
            }
            parse_expr(out);
            parse_expr(out);
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] != ')') {
                fail("expected ')'");
            }
            ++pos_;
            out.push_back(Node::function(it->op));
            return;
        }
        const std::string_view token = atom();
        if (token.size() > 1 && token[0] == 'x' && std::isdigit(static_cast<unsigned char>(token[1]))) {
            std::uint32_t feature = 0;
            auto [ptr, ec] = std::from_chars(token.data() + 1, token.data() + token.size(), feature);
            if (ec != std::errc{} || ptr != token.data() + token.size()) {
                fail("bad variable '" + std::string(token) + "'");
            }
            out.push_back(Node::var(feature));
            return;
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
            fail("bad token '" + std::string(token) + "'");
        }
        out.push_back(Node::constant(value));
    }

    std::string_view atom()
    {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
               !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected a token");
        }
        return text_.substr(start, pos_ - start);
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw DataError("expression parse error at offset " + std::to_string(pos_) + ": " + what);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void print_prefix(const ExprTree& tree, std::size_t i, std::string& out)
{
    const Node& n = tree.nodes()[i];
    switch (n.op) {
    case Op::Var:
        out += 'x';
        out += std::to_string(n.feature);
        return;
    case Op::Const:
        out += format_double(n.value);
        return;
    default:
        out += '(';
        out += op_name(n.op);
        out += ' ';
        print_prefix(tree, tree.left_child(i), out);
        out += ' ';
        print_prefix(tree, tree.right_child(i), out);
        out += ')';
    }
}

} // namespace

std::string_view op_name(Op op)
{
    switch (op) {
    case Op::Var: return "var";
    case Op::Const: return "const";
    default:
        for (const auto& s : kSpellings) {
            if (s.op == op) {
                return s.name;
            }
        }
    }
    return "?";
}

ExprTree ExprTree::from_postfix(std::vector<Node> nodes)
{
    struct Frame {
        std::uint32_t length;
        std::size_t depth;
    };
    std::vector<Frame> stack;
    stack.reserve(nodes.size());
    for (Node& n : nodes) {
        if (is_terminal(n.op)) {
            n.length = 1;
            stack.push_back({1, 0});
            continue;
        }
        require(stack.size() >= 2, "ExprTree: function node is missing operands");
        const Frame right = stack.back();
        stack.pop_back();
        const Frame left = stack.back();
        stack.pop_back();
        n.length = 1 + left.length + right.length;
        stack.push_back({n.length, 1 + std::max(left.depth, right.depth)});
    }
    require(stack.size() == 1, "ExprTree: postfix sequence is not a single tree");

    ExprTree tree;
    tree.nodes_ = std::move(nodes);
    tree.depth_ = stack.front().depth;
    return tree;
}

ExprTree ExprTree::constant(double value)
{
    return from_postfix({Node::constant(value)});
}

ExprTree ExprTree::variable(std::uint32_t feature)
{
    return from_postfix({Node::var(feature)});
}

ExprTree ExprTree::binary(Op op, const ExprTree& left, const ExprTree& right)
{
    require(!is_terminal(op), "ExprTree::binary: op must be a function");
    std::vector<Node> nodes;
    nodes.reserve(left.size() + right.size() + 1);
    nodes.insert(nodes.end(), left.nodes_.begin(), left.nodes_.end());
    nodes.insert(nodes.end(), right.nodes_.begin(), right.nodes_.end());
    nodes.push_back(Node::function(op));
    return from_postfix(std::move(nodes));
}

ExprTree ExprTree::parse(std::string_view text)
{
    return from_postfix(Parser(text).parse_all());
}

std::string ExprTree::to_string() const
{
    std::string out;
    if (!nodes_.empty()) {
        print_prefix(*this, root(), out);
    }
    return out;
}

bool ExprTree::contains(Op op) const
{
    return std::any_of(nodes_.begin(), nodes_.end(), [op](const Node& n) { return n.op == op; });
}

std::uint32_t ExprTree::max_feature() const
{
    std::uint32_t result = 0;
    for (const Node& n : nodes_) {
        if (n.op == Op::Var) {
            result = std::max(result, n.feature);
        }
    }
    return result;
}

bool ExprTree::has_variables() const
{
    return contains(Op::Var);
}

PrimitiveSet PrimitiveSet::standard(std::size_t feature_count, bool with_min_max)
{
    PrimitiveSet set;
    set.functions = {Op::Add, Op::Sub, Op::Mul, Op::Div};
    if (with_min_max) {
        set.functions.push_back(Op::Min);
        set.functions.push_back(Op::Max);
    }
    set.feature_count = feature_count;
    return set;
}

void EvalCounter::record(const ExprTree& tree, std::size_t cases)
{
    add(static_cast<std::uint64_t>(tree.size()) * cases);
    if (observer_) {
        std::lock_guard lock(observer_mutex_);
        observer_(tree, cases);
    }
}

} // namespace sgpdt
