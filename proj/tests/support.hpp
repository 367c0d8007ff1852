#ifndef SGPDT_TESTS_SUPPORT_HPP
#define SGPDT_TESTS_SUPPORT_HPP

// Test-only oracles. Nothing here calls into the code paths they check.

#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "sgpdt/expr.hpp"

namespace sgpdt::test {

// Least squares for y ~ a + b x by Cramer's rule on the normal equations.
struct LineFit {
    double a;
    double b;
};

inline LineFit normal_equations(const std::vector<double>& x, const std::vector<double>& y)
{
    long double n = static_cast<long double>(x.size());
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double det = n * sxx - sx * sx;
    const long double a = (sy * sxx - sx * sxy) / det;
    const long double b = (n * sxy - sx * sy) / det;
    return {static_cast<double>(a), static_cast<double>(b)};
}

inline double mse_of(const std::vector<double>& pred, const std::vector<double>& truth)
{
    long double s = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const long double d = static_cast<long double>(pred[i]) - truth[i];
        s += d * d;
    }
    return static_cast<double>(s / pred.size());
}

inline double population_variance(const std::vector<double>& v)
{
    long double mu = 0;
    for (double x : v) mu += x;
    mu /= v.size();
    long double s = 0;
    for (double x : v) s += (x - mu) * (x - mu);
    return static_cast<double>(s / v.size());
}

// Node count from the printed prefix form: one token per node.
inline std::size_t count_tokens(const std::string& prefix)
{
    std::size_t tokens = 0;
    bool in_token = false;
    for (char c : prefix) {
        const bool sep = c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c));
        if (!sep && !in_token) {
            ++tokens;
        }
        in_token = !sep;
    }
    return tokens;
}

// Brute-force trailing rolling-mean argmin: window over the last `w` points
// (fewer at the start), first index wins ties.
inline std::size_t brute_force_rolling_argmin(const std::vector<double>& mse, std::size_t w)
{
    std::size_t best = 0;
    double best_value = INFINITY;
    for (std::size_t k = 0; k < mse.size(); ++k) {
        double sum = 0;
        std::size_t count = 0;
        for (std::size_t j = 0; j < mse.size(); ++j) {
            if (j <= k && k - j < w) {
                sum += mse[j];
                ++count;
            }
        }
        const double value = sum / count;
        if (value < best_value) {
            best_value = value;
            best = k;
        }
    }
    return best;
}

// Reference recursive interpreter over the printed form.
inline double interpret(const ExprTree& tree, std::size_t node, const std::vector<double>& row)
{
    const Node& n = tree.nodes()[node];
    switch (n.op) {
    case Op::Var: return row[n.feature];
    case Op::Const: return n.value;
    default: break;
    }
    const double l = interpret(tree, tree.left_child(node), row);
    const double r = interpret(tree, tree.right_child(node), row);
    double v = 0;
    switch (n.op) {
    case Op::Add: v = l + r; break;
    case Op::Sub: v = l - r; break;
    case Op::Mul: v = l * r; break;
    case Op::Div: v = std::fabs(r) < 1e-9 ? 1.0 : l / r; break;
    case Op::Min: v = l < r ? l : r; break;
    case Op::Max: v = l > r ? l : r; break;
    default: break;
    }
    if (!std::isfinite(v)) {
        v = v > 0 ? 1e150 : -1e150;
    }
    return v;
}

} // namespace sgpdt::test

#endif
