#include <algorithm>
#include <cmath>

#include "sgpdt/error.hpp"
#include "sgpdt/expr.hpp"

namespace sgpdt {

namespace {

inline double clamp_overflow(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return v > 0.0 ? kOverflowClamp : -kOverflowClamp;
}

inline double protected_div(double num, double den)
{
    return std::fabs(den) < kDivisionEpsilon ? 1.0 : num / den;
}

template <typename F>
void apply_binary(const double* lhs, const double* rhs, double* out, std::size_t m, F f)
{
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = clamp_overflow(f(lhs[i], rhs[i]));
    }
}

} // namespace

std::span<double> EvalScratch::slot(std::size_t level, std::size_t cases)
{
    if (buffers_.size() <= level) {
        buffers_.resize(level + 1);
    }
    auto& buffer = buffers_[level];
    if (buffer.size() < cases) {
        buffer.resize(cases);
    }
    return {buffer.data(), cases};
}

void evaluate_into(const ExprTree& tree, const FeatureMatrix& cases, std::span<double> out,
                   EvalScratch& scratch, EvalCounter& counter)
{
    const std::size_t m = cases.rows();
    require(!tree.empty(), "evaluate: empty tree");
    require(m >= 1, "evaluate: case matrix has no rows");
    require(out.size() == m, "evaluate: output length differs from case count");
    if (tree.has_variables()) {
        require(tree.max_feature() < cases.cols(),
                "evaluate: variable x" + std::to_string(tree.max_feature()) + " out of range for " +
                    std::to_string(cases.cols()) + " features");
    }

    // Stack of operand pointers. Variables point straight into the matrix;
    // everything else lives in the scratch slot of its stack level.
    std::vector<const double*> stack;
    stack.reserve(tree.depth() + 2);

    for (const Node& n : tree.nodes()) {
        const std::size_t level = stack.size();
        switch (n.op) {
        case Op::Var:
            stack.push_back(cases.column(n.feature).data());
            continue;
        case Op::Const: {
            auto buf = scratch.slot(level, m);
            std::fill(buf.begin(), buf.end(), n.value);
            stack.push_back(buf.data());
            continue;
        }
        default:
            break;
        }

        const double* rhs = stack.back();
        stack.pop_back();
        const double* lhs = stack.back();
        stack.pop_back();
        double* dst = scratch.slot(level - 2, m).data();
        switch (n.op) {
        case Op::Add: apply_binary(lhs, rhs, dst, m, [](double a, double b) { return a + b; }); break;
        case Op::Sub: apply_binary(lhs, rhs, dst, m, [](double a, double b) { return a - b; }); break;
        case Op::Mul: apply_binary(lhs, rhs, dst, m, [](double a, double b) { return a * b; }); break;
        case Op::Div: apply_binary(lhs, rhs, dst, m, protected_div); break;
        case Op::Min: apply_binary(lhs, rhs, dst, m, [](double a, double b) { return std::min(a, b); }); break;
        case Op::Max: apply_binary(lhs, rhs, dst, m, [](double a, double b) { return std::max(a, b); }); break;
        default: break;
        }
        stack.push_back(dst);
    }

    std::copy_n(stack.back(), m, out.data());
    counter.record(tree, m);
}

SemanticVector evaluate(const ExprTree& tree, const FeatureMatrix& cases, EvalCounter& counter)
{
    SemanticVector out(cases.rows());
    EvalScratch scratch;
    evaluate_into(tree, cases, out, scratch, counter);
    return out;
}

} // namespace sgpdt
