#include "kcgg/autodiff.hpp"

#include <cmath>
#include <sstream>

#include "kcgg/errors.hpp"

namespace kcgg::ad {

namespace {

[[noreturn]] void shape_mismatch(const char* op, const Tensor& a, const Tensor& b) {
    std::ostringstream os;
    os << op << ": shapes do not conform: " << a.shape_str() << " vs " << b.shape_str();
    throw ShapeError(os.str());
}

void require_same_graph(const char* op, const Value& a, const Value& b) {
    if (a.graph() == nullptr || b.graph() == nullptr) {
        throw ContractError(std::string(op) + ": operand not bound to a graph");
    }
    if (a.graph() != b.graph()) {
        throw ContractError(std::string(op) + ": operands belong to different graphs");
    }
}

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

} // namespace

const Tensor& Value::tensor() const {
    if (!graph_) throw ContractError("Value::tensor: empty handle");
    return graph_->value_of(id_);
}

double Value::scalar() const {
    const Tensor& t = tensor();
    if (!t.is_scalar()) {
        throw ContractError("Value::scalar: node is not scalar-valued, shape " + t.shape_str());
    }
    return t[0];
}

Value Graph::emplace(Tensor value, BackwardFn backward) {
    nodes_.push_back(Node{std::move(value), std::move(backward)});
    return Value(this, static_cast<int>(nodes_.size()) - 1);
}

Value Graph::input(Tensor v) { return emplace(std::move(v), nullptr); }

Value Graph::constant(Tensor v) { return emplace(std::move(v), nullptr); }

double* Graph::grad_buf(int id) {
    auto idx = static_cast<std::size_t>(id);
    if (grads_[idx].empty()) {
        grads_[idx] = Tensor::zeros(nodes_[idx].value.shape());
    }
    live_[idx] = 1;
    return grads_[idx].data();
}

const Tensor& Graph::grad_by_id(int id) const { return grads_[static_cast<std::size_t>(id)]; }

void Graph::backward(const Value& root) {
    if (root.graph() != this) {
        throw ContractError("Graph::backward: root belongs to a different graph");
    }
    if (backward_done_) {
        throw ContractError("Graph::backward: graph already differentiated; graphs are single-use");
    }
    const Tensor& rv = value_of(root.id());
    if (!rv.is_scalar()) {
        throw ContractError("Graph::backward: root must be scalar-valued, shape " + rv.shape_str());
    }
    backward_done_ = true;

    grads_.assign(nodes_.size(), Tensor());
    live_.assign(nodes_.size(), 0);
    grad_buf(root.id())[0] = 1.0;

    for (int i = root.id(); i >= 0; --i) {
        auto idx = static_cast<std::size_t>(i);
        if (!live_[idx]) continue;
        if (nodes_[idx].backward) nodes_[idx].backward(*this, i);
    }

    // Materialize zero gradients for leaves that were never reached so that
    // grad() has a uniform contract.
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (grads_[i].empty()) grads_[i] = Tensor::zeros(nodes_[i].value.shape());
    }
}

const Tensor& Graph::grad(const Value& v) const {
    if (v.graph() != this) throw ContractError("Graph::grad: value belongs to a different graph");
    if (!backward_done_) throw ContractError("Graph::grad: backward() has not run");
    return grads_[static_cast<std::size_t>(v.id())];
}

// ---- Elementwise binary ops --------------------------------------------

namespace {

enum class Broadcast { None, LeftScalar, RightScalar };

Broadcast classify(const char* op, const Tensor& a, const Tensor& b) {
    if (a.same_shape(b)) return Broadcast::None;
    if (a.is_scalar()) return Broadcast::LeftScalar;
    if (b.is_scalar()) return Broadcast::RightScalar;
    shape_mismatch(op, a, b);
}

} // namespace

Value add(Value a, Value b) {
    require_same_graph("add", a, b);
    Graph& g = *a.graph();
    const Tensor& av = a.tensor();
    const Tensor& bv = b.tensor();
    Broadcast bc = classify("add", av, bv);

    Tensor out = Tensor::zeros(bc == Broadcast::LeftScalar ? bv.shape() : av.shape());
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        double x = bc == Broadcast::LeftScalar ? av[0] : av[i];
        double y = bc == Broadcast::RightScalar ? bv[0] : bv[i];
        out[i] = x + y;
    }
    int pa = a.id(), pb = b.id();
    return g.emplace(std::move(out), [pa, pb, bc, n](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        double* ga = gr.grad_buf(pa);
        double* gb = gr.grad_buf(pb);
        for (std::size_t i = 0; i < n; ++i) {
            ga[bc == Broadcast::LeftScalar ? 0 : i] += go[i];
            gb[bc == Broadcast::RightScalar ? 0 : i] += go[i];
        }
    });
}

Value sub(Value a, Value b) {
    require_same_graph("sub", a, b);
    Graph& g = *a.graph();
    const Tensor& av = a.tensor();
    const Tensor& bv = b.tensor();
    Broadcast bc = classify("sub", av, bv);

    Tensor out = Tensor::zeros(bc == Broadcast::LeftScalar ? bv.shape() : av.shape());
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        double x = bc == Broadcast::LeftScalar ? av[0] : av[i];
        double y = bc == Broadcast::RightScalar ? bv[0] : bv[i];
        out[i] = x - y;
    }
    int pa = a.id(), pb = b.id();
    return g.emplace(std::move(out), [pa, pb, bc, n](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        double* ga = gr.grad_buf(pa);
        double* gb = gr.grad_buf(pb);
        for (std::size_t i = 0; i < n; ++i) {
            ga[bc == Broadcast::LeftScalar ? 0 : i] += go[i];
            gb[bc == Broadcast::RightScalar ? 0 : i] -= go[i];
        }
    });
}

Value mul(Value a, Value b) {
    require_same_graph("mul", a, b);
    Graph& g = *a.graph();
    const Tensor& av = a.tensor();
    const Tensor& bv = b.tensor();
    Broadcast bc = classify("mul", av, bv);

    Tensor out = Tensor::zeros(bc == Broadcast::LeftScalar ? bv.shape() : av.shape());
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        double x = bc == Broadcast::LeftScalar ? av[0] : av[i];
        double y = bc == Broadcast::RightScalar ? bv[0] : bv[i];
        out[i] = x * y;
    }
    int pa = a.id(), pb = b.id();
    return g.emplace(std::move(out), [pa, pb, bc, n](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        const Tensor& av2 = gr.value_of(pa);
        const Tensor& bv2 = gr.value_of(pb);
        double* ga = gr.grad_buf(pa);
        double* gb = gr.grad_buf(pb);
        for (std::size_t i = 0; i < n; ++i) {
            double x = bc == Broadcast::LeftScalar ? av2[0] : av2[i];
            double y = bc == Broadcast::RightScalar ? bv2[0] : bv2[i];
            ga[bc == Broadcast::LeftScalar ? 0 : i] += go[i] * y;
            gb[bc == Broadcast::RightScalar ? 0 : i] += go[i] * x;
        }
    });
}

// ---- Matmul -------------------------------------------------------------

Value matmul(Value a, Value b) {
    require_same_graph("matmul", a, b);
    Graph& g = *a.graph();
    const Tensor& av = a.tensor();
    const Tensor& bv = b.tensor();

    if (av.rank() != 2) shape_mismatch("matmul (left operand must be rank 2)", av, bv);
    const bool vec_rhs = bv.rank() == 1;
    if (!vec_rhs && bv.rank() != 2) shape_mismatch("matmul", av, bv);

    const std::size_t m = av.shape()[0];
    const std::size_t k = av.shape()[1];
    const std::size_t kb = bv.shape()[0];
    const std::size_t n = vec_rhs ? 1 : bv.shape()[1];
    if (k != kb) shape_mismatch("matmul (inner dimensions)", av, bv);

    Tensor out = vec_rhs ? Tensor::zeros({m}) : Tensor::zeros({m, n});
    // ikj loop order keeps the inner loop contiguous in both b and out.
    const double* ap = av.data();
    const double* bp = bv.data();
    double* op = out.data();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t kk = 0; kk < k; ++kk) {
            double aik = ap[i * k + kk];
            if (aik == 0.0) continue;
            const double* brow = bp + kk * n;
            double* orow = op + i * n;
            for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
        }
    }

    int pa = a.id(), pb = b.id();
    return g.emplace(std::move(out), [pa, pb, m, k, n](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        const Tensor& av2 = gr.value_of(pa);
        const Tensor& bv2 = gr.value_of(pb);
        double* ga = gr.grad_buf(pa);
        double* gb = gr.grad_buf(pb);
        const double* gp = go.data();
        const double* ap2 = av2.data();
        const double* bp2 = bv2.data();
        // dA = G * B^T
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t kk = 0; kk < k; ++kk) {
                double acc = 0.0;
                const double* grow = gp + i * n;
                const double* brow = bp2 + kk * n;
                for (std::size_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
                ga[i * k + kk] += acc;
            }
        }
        // dB = A^T * G
        for (std::size_t i = 0; i < m; ++i) {
            const double* grow = gp + i * n;
            for (std::size_t kk = 0; kk < k; ++kk) {
                double aik = ap2[i * k + kk];
                if (aik == 0.0) continue;
                double* gbrow = gb + kk * n;
                for (std::size_t j = 0; j < n; ++j) gbrow[j] += aik * grow[j];
            }
        }
    });
}

// ---- Reductions and unary ops -------------------------------------------

Value sum(Value a) {
    const Tensor& av = a.tensor();
    Graph& g = *a.graph();
    double acc = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) acc += av[i];
    int pa = a.id();
    std::size_t n = av.size();
    return g.emplace(Tensor::from_raw({1}, {acc}), [pa, n](Graph& gr, int self) {
        double go = gr.grad_by_id(self)[0];
        double* ga = gr.grad_buf(pa);
        for (std::size_t i = 0; i < n; ++i) ga[i] += go;
    });
}

Value scale(Value a, double k) {
    const Tensor& av = a.tensor();
    Graph& g = *a.graph();
    Tensor out = Tensor::zeros(av.shape());
    for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] * k;
    int pa = a.id();
    std::size_t n = av.size();
    return g.emplace(std::move(out), [pa, k, n](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        double* ga = gr.grad_buf(pa);
        for (std::size_t i = 0; i < n; ++i) ga[i] += go[i] * k;
    });
}

Value silu(Value a) {
    const Tensor& av = a.tensor();
    Graph& g = *a.graph();
    Tensor out = Tensor::zeros(av.shape());
    for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] * sigmoid(av[i]);
    int pa = a.id();
    std::size_t n = av.size();
    return g.emplace(std::move(out), [pa, n](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        const Tensor& av2 = gr.value_of(pa);
        double* ga = gr.grad_buf(pa);
        for (std::size_t i = 0; i < n; ++i) {
            double s = sigmoid(av2[i]);
            ga[i] += go[i] * (s + av2[i] * s * (1.0 - s));
        }
    });
}

Value clamp(Value a, double lo, double hi) {
    const Tensor& av = a.tensor();
    Graph& g = *a.graph();
    Tensor out = Tensor::zeros(av.shape());
    for (std::size_t i = 0; i < av.size(); ++i) {
        out[i] = av[i] < lo ? lo : (av[i] > hi ? hi : av[i]);
    }
    int pa = a.id();
    std::size_t n = av.size();
    return g.emplace(std::move(out), [pa, lo, hi, n](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        const Tensor& av2 = gr.value_of(pa);
        double* ga = gr.grad_buf(pa);
        for (std::size_t i = 0; i < n; ++i) {
            if (av2[i] >= lo && av2[i] <= hi) ga[i] += go[i];
        }
    });
}

Value sin(Value a) {
    const Tensor& av = a.tensor();
    Graph& g = *a.graph();
    Tensor out = Tensor::zeros(av.shape());
    for (std::size_t i = 0; i < av.size(); ++i) out[i] = std::sin(av[i]);
    int pa = a.id();
    std::size_t n = av.size();
    return g.emplace(std::move(out), [pa, n](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        const Tensor& av2 = gr.value_of(pa);
        double* ga = gr.grad_buf(pa);
        for (std::size_t i = 0; i < n; ++i) ga[i] += go[i] * std::cos(av2[i]);
    });
}

Value cos(Value a) {
    const Tensor& av = a.tensor();
    Graph& g = *a.graph();
    Tensor out = Tensor::zeros(av.shape());
    for (std::size_t i = 0; i < av.size(); ++i) out[i] = std::cos(av[i]);
    int pa = a.id();
    std::size_t n = av.size();
    return g.emplace(std::move(out), [pa, n](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        const Tensor& av2 = gr.value_of(pa);
        double* ga = gr.grad_buf(pa);
        for (std::size_t i = 0; i < n; ++i) ga[i] -= go[i] * std::sin(av2[i]);
    });
}

// ---- Structural ops -------------------------------------------------------

Value concat_cols(Value a, Value b) {
    require_same_graph("concat_cols", a, b);
    Graph& g = *a.graph();
    const Tensor& av = a.tensor();
    const Tensor& bv = b.tensor();
    if (av.rank() != bv.rank() || av.rank() > 2) shape_mismatch("concat_cols", av, bv);

    if (av.rank() == 1) {
        std::size_t p = av.size(), q = bv.size();
        Tensor out = Tensor::zeros({p + q});
        for (std::size_t i = 0; i < p; ++i) out[i] = av[i];
        for (std::size_t i = 0; i < q; ++i) out[p + i] = bv[i];
        int pa = a.id(), pb = b.id();
        return g.emplace(std::move(out), [pa, pb, p, q](Graph& gr, int self) {
            const Tensor& go = gr.grad_by_id(self);
            double* ga = gr.grad_buf(pa);
            double* gb = gr.grad_buf(pb);
            for (std::size_t i = 0; i < p; ++i) ga[i] += go[i];
            for (std::size_t i = 0; i < q; ++i) gb[i] += go[p + i];
        });
    }

    if (av.shape()[0] != bv.shape()[0]) shape_mismatch("concat_cols (row counts)", av, bv);
    const std::size_t m = av.shape()[0];
    const std::size_t p = av.shape()[1];
    const std::size_t q = bv.shape()[1];
    Tensor out = Tensor::zeros({m, p + q});
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < p; ++c) out.at(r, c) = av.at(r, c);
        for (std::size_t c = 0; c < q; ++c) out.at(r, p + c) = bv.at(r, c);
    }
    int pa = a.id(), pb = b.id();
    return g.emplace(std::move(out), [pa, pb, m, p, q](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        double* ga = gr.grad_buf(pa);
        double* gb = gr.grad_buf(pb);
        for (std::size_t r = 0; r < m; ++r) {
            const double* grow = go.data() + r * (p + q);
            for (std::size_t c = 0; c < p; ++c) ga[r * p + c] += grow[c];
            for (std::size_t c = 0; c < q; ++c) gb[r * q + c] += grow[p + c];
        }
    });
}

Value add_rowvec(Value m, Value v) {
    require_same_graph("add_rowvec", m, v);
    Graph& g = *m.graph();
    const Tensor& mv = m.tensor();
    const Tensor& vv = v.tensor();
    if (mv.rank() != 2 || vv.rank() != 1 || mv.shape()[1] != vv.shape()[0]) {
        shape_mismatch("add_rowvec", mv, vv);
    }
    const std::size_t rows_n = mv.shape()[0];
    const std::size_t cols_n = mv.shape()[1];
    Tensor out = Tensor::zeros(mv.shape());
    for (std::size_t r = 0; r < rows_n; ++r) {
        for (std::size_t c = 0; c < cols_n; ++c) out.at(r, c) = mv.at(r, c) + vv[c];
    }
    int pm = m.id(), pv = v.id();
    return g.emplace(std::move(out), [pm, pv, rows_n, cols_n](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        double* gm = gr.grad_buf(pm);
        double* gv = gr.grad_buf(pv);
        for (std::size_t r = 0; r < rows_n; ++r) {
            const double* grow = go.data() + r * cols_n;
            double* mrow = gm + r * cols_n;
            for (std::size_t c = 0; c < cols_n; ++c) {
                mrow[c] += grow[c];
                gv[c] += grow[c];
            }
        }
    });
}

Value gather_rows(Value m, const std::vector<std::size_t>& rows) {
    const Tensor& mv = m.tensor();
    Graph& g = *m.graph();
    if (mv.rank() != 2) throw ShapeError("gather_rows: source must be rank 2, got " + mv.shape_str());
    const std::size_t cols_n = mv.shape()[1];
    for (std::size_t r : rows) {
        if (r >= mv.shape()[0]) {
            throw ShapeError("gather_rows: row index " + std::to_string(r) + " out of range for " +
                             mv.shape_str());
        }
    }
    Tensor out = Tensor::zeros({rows.size(), cols_n});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < cols_n; ++c) out.at(i, c) = mv.at(rows[i], c);
    }
    int pm = m.id();
    std::vector<std::size_t> idx = rows;
    return g.emplace(std::move(out), [pm, idx, cols_n](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        double* gm = gr.grad_buf(pm);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const double* grow = go.data() + i * cols_n;
            double* mrow = gm + idx[i] * cols_n;
            for (std::size_t c = 0; c < cols_n; ++c) mrow[c] += grow[c];
        }
    });
}

Value row(Value m, std::size_t r) {
    const Tensor& mv = m.tensor();
    Graph& g = *m.graph();
    if (mv.rank() != 2 || r >= mv.shape()[0]) {
        throw ShapeError("row: index " + std::to_string(r) + " invalid for " + mv.shape_str());
    }
    const std::size_t cols_n = mv.shape()[1];
    Tensor out = Tensor::zeros({cols_n});
    for (std::size_t c = 0; c < cols_n; ++c) out[c] = mv.at(r, c);
    int pm = m.id();
    return g.emplace(std::move(out), [pm, r, cols_n](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        double* gm = gr.grad_buf(pm);
        for (std::size_t c = 0; c < cols_n; ++c) gm[r * cols_n + c] += go[c];
    });
}

Value segment(Value v, std::size_t start, std::size_t len) {
    const Tensor& vv = v.tensor();
    Graph& g = *v.graph();
    if (vv.rank() != 1 || start + len > vv.size()) {
        throw ShapeError("segment: [" + std::to_string(start) + ", " + std::to_string(start + len) +
                         ") invalid for " + vv.shape_str());
    }
    Tensor out = Tensor::zeros({len});
    for (std::size_t i = 0; i < len; ++i) out[i] = vv[start + i];
    int pv = v.id();
    return g.emplace(std::move(out), [pv, start, len](Graph& gr, int self) {
        const Tensor& go = gr.grad_by_id(self);
        double* gv = gr.grad_buf(pv);
        for (std::size_t i = 0; i < len; ++i) gv[start + i] += go[i];
    });
}

Value element(Value v, std::size_t i) {
    const Tensor& vv = v.tensor();
    Graph& g = *v.graph();
    if (i >= vv.size()) {
        throw ShapeError("element: index " + std::to_string(i) + " out of range for " + vv.shape_str());
    }
    int pv = v.id();
    return g.emplace(Tensor::from_raw({1}, {vv[i]}), [pv, i](Graph& gr, int self) {
        double go = gr.grad_by_id(self)[0];
        gr.grad_buf(pv)[i] += go;
    });
}

} // namespace kcgg::ad
