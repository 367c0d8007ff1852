#include <algorithm>

#include "sgpdt/error.hpp"
#include "sgpdt/expr.hpp"

namespace sgpdt {

namespace {

// Min depth for ramped initialization so initial trees are never bare terminals.
constexpr std::size_t kRampedMinDepth = 2;

constexpr double kErcLow = -1.0;
constexpr double kErcHigh = 1.0;

void check_terminals(const PrimitiveSet& primitives)
{
    if (primitives.terminal_count() == 0) {
        throw ConfigError("tree construction needs at least one feature or the constant terminal");
    }
}

// Each variable and the ERC class are equally likely.
Node random_terminal(Rng& rng, const PrimitiveSet& primitives)
{
    const std::size_t pick = uniform_index(rng, primitives.terminal_count());
    if (pick < primitives.feature_count) {
        return Node::var(static_cast<std::uint32_t>(pick));
    }
    return Node::constant(uniform_real(rng, kErcLow, kErcHigh));
}

Node random_function(Rng& rng, const PrimitiveSet& primitives)
{
    return Node::function(primitives.functions[uniform_index(rng, primitives.functions.size())]);
}

void build(Rng& rng, const PrimitiveSet& primitives, std::size_t depth, std::size_t min_depth,
           std::size_t max_depth, bool full, std::vector<Node>& out)
{
    bool function = false;
    if (depth >= max_depth || primitives.functions.empty()) {
        function = false;
    } else if (full || depth < min_depth) {
        function = true;
    } else {
        const std::size_t n_fun = primitives.functions.size();
        function = uniform_index(rng, n_fun + primitives.terminal_count()) < n_fun;
    }

    if (!function) {
        out.push_back(random_terminal(rng, primitives));
        return;
    }
    const Node fn = random_function(rng, primitives);
    build(rng, primitives, depth + 1, min_depth, max_depth, full, out);
    build(rng, primitives, depth + 1, min_depth, max_depth, full, out);
    out.push_back(fn);
}

std::vector<Node> build_nodes(Rng& rng, const PrimitiveSet& primitives, std::size_t min_depth,
                              std::size_t max_depth, bool full)
{
    check_terminals(primitives);
    std::vector<Node> nodes;
    build(rng, primitives, 0, min_depth, max_depth, full, nodes);
    return nodes;
}

} // namespace

ExprTree full_tree(Rng& rng, const PrimitiveSet& primitives, std::size_t depth)
{
    return ExprTree::from_postfix(build_nodes(rng, primitives, depth, depth, true));
}

ExprTree grow_tree(Rng& rng, const PrimitiveSet& primitives, std::size_t min_depth, std::size_t max_depth)
{
    require(min_depth <= max_depth, "grow_tree: min_depth exceeds max_depth");
    return ExprTree::from_postfix(build_nodes(rng, primitives, min_depth, max_depth, false));
}

std::vector<RampedSlot> ramped_plan(std::size_t pop_size, std::size_t max_depth)
{
    const std::size_t min_depth = std::min(kRampedMinDepth, max_depth);
    const std::size_t depths = max_depth - min_depth + 1;
    std::vector<RampedSlot> plan;
    plan.reserve(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
        const std::size_t stratum = i % (2 * depths);
        plan.push_back({min_depth + stratum / 2, stratum % 2 == 0 ? InitMethod::Full : InitMethod::Grow});
    }
    return plan;
}

std::vector<ExprTree> ramped_half_and_half(std::size_t pop_size, std::size_t max_depth, Rng& rng,
                                           const PrimitiveSet& primitives)
{
    check_terminals(primitives);
    const std::size_t min_depth = std::min(kRampedMinDepth, max_depth);
    std::vector<ExprTree> population;
    population.reserve(pop_size);
    for (const RampedSlot& slot : ramped_plan(pop_size, max_depth)) {
        if (slot.method == InitMethod::Full) {
            population.push_back(full_tree(rng, primitives, slot.depth));
        } else {
            population.push_back(grow_tree(rng, primitives, min_depth, slot.depth));
        }
    }
    return population;
}

MutationOutcome mutate_traced(const ExprTree& parent, Rng& rng, const PrimitiveSet& primitives,
                              const MutationParams& params)
{
    require(!parent.empty(), "mutate: empty parent");
    const auto nodes = parent.nodes();

    std::vector<std::size_t> leaves;
    std::vector<std::size_t> internal;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        (is_terminal(nodes[i].op) ? leaves : internal).push_back(i);
    }

    const bool leaf_site = internal.empty() || bernoulli(rng, params.leaf_bias);
    const auto& candidates = leaf_site ? leaves : internal;
    const std::size_t site = candidates[uniform_index(rng, candidates.size())];

    std::vector<Node> replacement = build_nodes(rng, primitives, 0, params.max_depth, false);

    const std::size_t begin = site + 1 - nodes[site].length;
    std::vector<Node> child;
    child.reserve(nodes.size() - nodes[site].length + replacement.size());
    child.insert(child.end(), nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(begin));
    child.insert(child.end(), replacement.begin(), replacement.end());
    child.insert(child.end(), nodes.begin() + static_cast<std::ptrdiff_t>(site + 1), nodes.end());

    MutationOutcome outcome;
    outcome.site = site;
    outcome.leaf_site = leaf_site;
    outcome.replaced_length = nodes[site].length;
    outcome.inserted_length = replacement.size();
    outcome.tree = ExprTree::from_postfix(std::move(child));
    return outcome;
}

ExprTree mutate(const ExprTree& parent, Rng& rng, const PrimitiveSet& primitives, const MutationParams& params)
{
    return mutate_traced(parent, rng, primitives, params).tree;
}

} // namespace sgpdt
