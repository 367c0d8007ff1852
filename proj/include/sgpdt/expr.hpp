#ifndef SGPDT_EXPR_HPP
#define SGPDT_EXPR_HPP

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgpdt/matrix.hpp"
#include "sgpdt/rng.hpp"

namespace sgpdt {

enum class Op : std::uint8_t { Add, Sub, Mul, Div, Min, Max, Var, Const };

constexpr bool is_terminal(Op op) noexcept { return op == Op::Var || op == Op::Const; }
constexpr std::size_t arity(Op op) noexcept { return is_terminal(op) ? 0 : 2; }

std::string_view op_name(Op op);

// Denominators smaller than this in magnitude make division return 1.
inline constexpr double kDivisionEpsilon = 1e-9;
// Non-finite intermediate values are clamped to +/- this magnitude.
inline constexpr double kOverflowClamp = 1e150;

struct Node {
    Op op = Op::Const;
    std::uint32_t feature = 0; // Var only
    double value = 0.0;        // Const only
    std::uint32_t length = 1;  // nodes in the subtree rooted here, self included

    static Node var(std::uint32_t feature) { return {Op::Var, feature, 0.0, 1}; }
    static Node constant(double value) { return {Op::Const, 0, value, 1}; }
    static Node function(Op op) { return {op, 0, 0.0, 1}; }

    bool operator==(const Node&) const = default;
};

// Immutable expression tree stored in postfix order: children precede their
// parent and the root is the last node. The subtree rooted at index i spans
// [i + 1 - length, i].
class ExprTree {
public:
    ExprTree() = default;

    // Throws ContractViolation if the sequence is not a single well-formed tree.
    static ExprTree from_postfix(std::vector<Node> nodes);

    static ExprTree constant(double value);
    static ExprTree variable(std::uint32_t feature);
    static ExprTree binary(Op op, const ExprTree& left, const ExprTree& right);

    // Prefix s-expression such as "(max (add x0 0.25) x3)".
    static ExprTree parse(std::string_view text);
    std::string to_string() const;

    std::span<const Node> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t depth() const noexcept { return depth_; }
    std::size_t root() const noexcept { return nodes_.size() - 1; }
    bool empty() const noexcept { return nodes_.empty(); }

    std::size_t right_child(std::size_t i) const { return i - 1; }
    std::size_t left_child(std::size_t i) const { return i - 1 - nodes_[i - 1].length; }
    std::size_t subtree_begin(std::size_t i) const { return i + 1 - nodes_[i].length; }

    bool contains(Op op) const;
    std::uint32_t max_feature() const; // 0 when the tree has no variables
    bool has_variables() const;

    bool operator==(const ExprTree& other) const { return nodes_ == other.nodes_; }

private:
    std::vector<Node> nodes_;
    std::size_t depth_ = 0;
};

// Function and terminal sets available to tree construction.
struct PrimitiveSet {
    std::vector<Op> functions;
    std::size_t feature_count = 0;
    bool constants = true;

    static PrimitiveSet standard(std::size_t feature_count, bool with_min_max = true);

    std::size_t terminal_count() const noexcept { return feature_count + (constants ? 1 : 0); }
};

using SemanticVector = std::vector<double>;

// Counts node operations: one per node per case evaluated. Accumulation is
// atomic, so a counter may be shared by parallel evaluation workers.
class EvalCounter {
public:
    using Observer = std::function<void(const ExprTree&, std::size_t cases)>;

    EvalCounter() = default;
    EvalCounter(const EvalCounter&) = delete;
    EvalCounter& operator=(const EvalCounter&) = delete;

    std::uint64_t total() const noexcept { return total_.load(std::memory_order_relaxed); }

    void record(const ExprTree& tree, std::size_t cases);
    void add(std::uint64_t node_ops) noexcept { total_.fetch_add(node_ops, std::memory_order_relaxed); }

    // Invoked once per evaluation event (serialized). Used by tests to keep an
    // independent shadow count.
    void set_observer(Observer observer) { observer_ = std::move(observer); }

private:
    std::atomic<std::uint64_t> total_{0};
    Observer observer_;
    std::mutex observer_mutex_;
};

// Reusable stack buffers for batch evaluation. One per worker thread.
class EvalScratch {
public:
    std::span<double> slot(std::size_t level, std::size_t cases);

private:
    std::vector<std::vector<double>> buffers_;
};

// Evaluates the tree over every row of the matrix. Throws ContractViolation
// when a variable refers to a missing column or the matrix has no rows.
SemanticVector evaluate(const ExprTree& tree, const FeatureMatrix& cases, EvalCounter& counter);
void evaluate_into(const ExprTree& tree, const FeatureMatrix& cases, std::span<double> out,
                   EvalScratch& scratch, EvalCounter& counter);

// Random construction

ExprTree full_tree(Rng& rng, const PrimitiveSet& primitives, std::size_t depth);
ExprTree grow_tree(Rng& rng, const PrimitiveSet& primitives, std::size_t min_depth, std::size_t max_depth);

enum class InitMethod { Full, Grow };

struct RampedSlot {
    std::size_t depth;
    InitMethod method;
};

// Depth/method assignment of each individual in a ramped half-and-half
// population. Depths run from min(2, max_depth) to max_depth, and the
// individuals are dealt round-robin over the (depth, method) strata.
std::vector<RampedSlot> ramped_plan(std::size_t pop_size, std::size_t max_depth);

std::vector<ExprTree> ramped_half_and_half(std::size_t pop_size, std::size_t max_depth, Rng& rng,
                                           const PrimitiveSet& primitives);

struct MutationParams {
    double leaf_bias = 0.7;
    std::size_t max_depth = 5;
};

struct MutationOutcome {
    ExprTree tree;
    std::size_t site = 0;      // postfix index of the replaced node in the parent
    bool leaf_site = false;
    std::size_t replaced_length = 0;
    std::size_t inserted_length = 0;
};

// Subtree mutation. The site is a leaf with probability leaf_bias (uniform
// among leaves) and otherwise an internal node (uniform among internal
// nodes); the replacement is grown with depth in [0, max_depth].
MutationOutcome mutate_traced(const ExprTree& parent, Rng& rng, const PrimitiveSet& primitives,
                              const MutationParams& params = {});
ExprTree mutate(const ExprTree& parent, Rng& rng, const PrimitiveSet& primitives,
                const MutationParams& params = {});

} // namespace sgpdt

#endif
