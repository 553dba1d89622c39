#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "molembed/nn/tensor.hpp"

namespace molembed::nn {

// A learnable tensor plus its gradient accumulator. Parameters live outside
// the tape; tape leaves reference them so backward() deposits gradients here.
template <typename T>
struct ParamT {
    std::string name;
    TensorT<T> value;
    TensorT<T> grad;

    ParamT() = default;
    ParamT(std::string n, TensorT<T> v)
        : name(std::move(n)), value(std::move(v)), grad(value.rows(), value.cols()) {}

    void zero_grad() { grad.fill(T(0)); }

    template <typename U>
    ParamT<U> cast() const {
        ParamT<U> out;
        out.name = name;
        out.value = value.template cast<U>();
        out.grad = TensorT<U>(value.rows(), value.cols());
        return out;
    }
};

using Param = ParamT<float>;
using Param64 = ParamT<double>;

// Reverse-mode tape (define-by-run). Nodes are appended in execution order,
// so parents always have smaller indices and a single descending sweep in
// backward() visits every node exactly once.
template <typename T>
class TapeT {
public:
    using BackwardFn = std::function<void(TapeT&, const TensorT<T>&)>;

    int constant(TensorT<T> value) { return push_node(std::move(value), nullptr, nullptr); }

    int parameter(ParamT<T>& p) {
        TensorT<T> copy = p.value;
        return push_node(std::move(copy), nullptr, &p);
    }

    int push(TensorT<T> value, BackwardFn backward) {
        return push_node(std::move(value), std::move(backward), nullptr);
    }

    const TensorT<T>& value(int id) const { return nodes_[static_cast<size_t>(id)].value; }

    // Adds g into the gradient buffer of node `id` (allocated on first use).
    void accumulate(int id, const TensorT<T>& g) {
        Node& n = nodes_[static_cast<size_t>(id)];
        if (!n.value.same_shape(g)) {
            throw ShapeError("tape: gradient shape " + g.shape_str() +
                             " does not match value shape " + n.value.shape_str());
        }
        if (!n.grad_live) {
            n.grad = TensorT<T>(n.value.rows(), n.value.cols());
            n.grad_live = true;
        }
        for (size_t i = 0; i < g.size(); ++i) n.grad[i] += g[i];
    }

    const TensorT<T>& grad(int id) const {
        const Node& n = nodes_[static_cast<size_t>(id)];
        return n.grad;
    }

    bool has_grad(int id) const { return nodes_[static_cast<size_t>(id)].grad_live; }

    // Seeds the scalar root with 1 and propagates. Parameter leaves add their
    // gradient into the external ParamT::grad buffer.
    void backward(int root) {
        Node& r = nodes_[static_cast<size_t>(root)];
        if (r.value.rows() != 1 || r.value.cols() != 1) {
            throw ShapeError("backward: root must be a 1x1 scalar, got " + r.value.shape_str());
        }
        accumulate(root, TensorT<T>::full(1, 1, T(1)));
        for (int id = root; id >= 0; --id) {
            Node& n = nodes_[static_cast<size_t>(id)];
            if (!n.grad_live) continue;
            if (n.backward) {
                n.backward(*this, n.grad);
            } else if (n.param != nullptr) {
                ParamT<T>& p = *n.param;
                for (size_t i = 0; i < n.grad.size(); ++i) p.grad[i] += n.grad[i];
            }
        }
    }

    size_t size() const noexcept { return nodes_.size(); }

private:
    struct Node {
        TensorT<T> value;
        TensorT<T> grad;
        bool grad_live = false;
        BackwardFn backward;
        ParamT<T>* param = nullptr;
    };

    int push_node(TensorT<T> value, BackwardFn backward, ParamT<T>* param) {
        Node n;
        n.value = std::move(value);
        n.backward = std::move(backward);
        n.param = param;
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }

    std::vector<Node> nodes_;
};

using Tape = TapeT<float>;
using Tape64 = TapeT<double>;

} // namespace molembed::nn
