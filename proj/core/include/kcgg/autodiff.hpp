#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <vector>

#include "kcgg/tensor.hpp"

namespace kcgg::ad {

class Graph;

/// Lightweight handle to a node inside a Graph. Copyable; valid as long as
/// the owning graph lives.
class Value {
public:
    Value() = default;

    const Tensor& tensor() const;
    /// Value of a size-1 node.
    double scalar() const;
    const std::vector<std::size_t>& shape() const { return tensor().shape(); }

    Graph* graph() const { return graph_; }
    int id() const { return id_; }
    bool valid() const { return graph_ != nullptr; }

private:
    friend class Graph;
    Value(Graph* g, int id) : graph_(g), id_(id) {}

    Graph* graph_ = nullptr;
    int id_ = -1;
};

/// Append-only computation graph for reverse-mode differentiation. Nodes are
/// created in topological order by construction, so the backward pass is a
/// single reverse sweep over the node array. Graphs are single-use: build a
/// fresh graph per forward pass; calling backward() twice is an error.
///
/// Thread model: one graph per thread. Distinct graphs may be built and
/// differentiated concurrently; tensors placed in a graph are never mutated.
class Graph {
public:
    Graph() = default;
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    /// Differentiable leaf (network parameter, sampler state, ...).
    Value input(Tensor v);
    /// Non-differentiable leaf. Gradients still accumulate into it so that
    /// querying grad() on a reachable constant is well-defined (zero if the
    /// node never participates in the backward sweep).
    Value constant(Tensor v);

    /// Reverse accumulation from a scalar root. Gradients of multiply-used
    /// nodes sum over all uses. Single use: a second call throws.
    void backward(const Value& root);

    /// Gradient of the backward root w.r.t. this node. Zero tensor of the
    /// node's shape if the node was unreachable from the root.
    const Tensor& grad(const Value& v) const;

    bool backward_done() const { return backward_done_; }
    std::size_t node_count() const { return nodes_.size(); }

    const Tensor& value_of(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }

private:
    friend class Value;

    friend Value add(Value a, Value b);
    friend Value sub(Value a, Value b);
    friend Value mul(Value a, Value b);
    friend Value matmul(Value a, Value b);
    friend Value sum(Value a);
    friend Value scale(Value a, double k);
    friend Value silu(Value a);
    friend Value clamp(Value a, double lo, double hi);
    friend Value sin(Value a);
    friend Value cos(Value a);
    friend Value concat_cols(Value a, Value b);
    friend Value add_rowvec(Value m, Value v);
    friend Value gather_rows(Value m, const std::vector<std::size_t>& rows);
    friend Value row(Value m, std::size_t r);
    friend Value segment(Value v, std::size_t start, std::size_t len);
    friend Value element(Value v, std::size_t i);

    // Backward rule: reads this node's accumulated gradient and adds each
    // parent's contribution through grad_buf().
    using BackwardFn = std::function<void(Graph&, int self)>;

    struct Node {
        Tensor value;
        BackwardFn backward;
    };

    Value emplace(Tensor value, BackwardFn backward);

    /// Gradient accumulation buffer for a node; allocates lazily and marks
    /// the node live so its own backward rule will run.
    double* grad_buf(int id);
    const Tensor& grad_by_id(int id) const;

    // Deque keeps references to node tensors stable while the graph grows.
    std::deque<Node> nodes_;
    std::vector<Tensor> grads_;
    std::vector<char> live_;
    bool backward_done_ = false;
};

// ---- Op set -----------------------------------------------------------

/// Elementwise sum; equal shapes, or one operand is a size-1 scalar.
Value add(Value a, Value b);
/// Elementwise difference with the same conformability rule as add().
Value sub(Value a, Value b);
/// Elementwise product; equal shapes or scalar broadcast.
Value mul(Value a, Value b);
/// (m x k) * (k x n) -> (m x n); the right operand may be a rank-1 vector
/// of length k, giving a rank-1 result of length m.
Value matmul(Value a, Value b);
/// Sum of all entries -> scalar.
Value sum(Value a);
/// Multiplication by a compile-time-known scalar constant.
Value scale(Value a, double k);
/// Smooth sigmoid-weighted linear unit u * sigma(u).
Value silu(Value a);
/// Elementwise clamp into [lo, hi]; gradient passes through inside the
/// range and is zero where the bound is active.
Value clamp(Value a, double lo, double hi);
Value sin(Value a);
Value cos(Value a);
/// Column-wise concatenation: rank-1 (p)+(q) -> (p+q); rank-2 with equal
/// row counts (m x p)+(m x q) -> (m x (p+q)).
Value concat_cols(Value a, Value b);
/// Adds a length-n vector to every row of an (m x n) matrix.
Value add_rowvec(Value m, Value v);
/// Selects rows of a matrix by index (with repetition); gradient
/// scatter-adds back into the source rows.
Value gather_rows(Value m, const std::vector<std::size_t>& rows);
/// Single row of a rank-2 tensor as a rank-1 node.
Value row(Value m, std::size_t r);
/// Contiguous slice of a rank-1 tensor.
Value segment(Value v, std::size_t start, std::size_t len);
/// Single entry of a rank-1 tensor as a scalar node.
Value element(Value v, std::size_t i);

} // namespace kcgg::ad
