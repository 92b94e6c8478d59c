#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dbf/common.hpp"

namespace dbf::diff {

class Graph;

// Handle to a node in a Graph. Values are dense 64-bit matrices; vectors are
// 1 x N or N x 1, scalars 1 x 1. A sequence of frames is a T x C matrix or a
// std::vector of row Vars, depending on the consumer.
class Var {
public:
    Var() = default;

    const Eigen::MatrixXd& value() const;
    Eigen::Index rows() const { return value().rows(); }
    Eigen::Index cols() const { return value().cols(); }
    int id() const { return id_; }
    Graph* graph() const { return g_; }
    explicit operator bool() const { return g_ != nullptr; }

private:
    friend class Graph;
    Var(Graph* g, int id) : g_(g), id_(id) {}
    Graph* g_ = nullptr;
    int id_ = -1;
};

// One forward/backward computation. Creation order is a topological order, so
// the backward pass is a single reverse sweep. A Graph instance is confined
// to one thread.
class Graph {
public:
    Graph() = default;
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    // Leaf with no gradient (observations, constants, scatter matrices).
    Var input(Eigen::MatrixXd value);
    Var scalar(double v) { return input(Eigen::MatrixXd::Constant(1, 1, v)); }

    // Leaf that accumulates a gradient; `name` keys the result in param_grads().
    Var param(Eigen::MatrixXd value, std::string name);

    // Op-internal node constructor. `backward` reads grad(node) and accumulates
    // into parents via accum_grad; it may be empty when no parent needs grads.
    Var make(Eigen::MatrixXd value, std::initializer_list<Var> parents,
             std::function<void(Graph&, int)> backward);
    Var make(Eigen::MatrixXd value, const std::vector<Var>& parents,
             std::function<void(Graph&, int)> backward);

    const Eigen::MatrixXd& value(int id) const { return nodes_[id].value; }
    bool requires_grad(int id) const { return nodes_[id].requires_grad; }
    bool requires_grad(const Var& v) const { return requires_grad(v.id()); }

    // Gradient of node `id`; zero-materialized on first touch.
    Eigen::MatrixXd& grad(int id);
    bool has_grad(int id) const { return nodes_[id].grad.size() != 0; }

    template <typename Expr>
    void accum_grad(const Var& v, const Expr& e) {
        if (nodes_[v.id()].requires_grad) grad(v.id()) += e;
    }

    // Reverse sweep from a 1x1 output. May be called once per graph.
    void backward(const Var& output);

    // Named parameter gradients after backward(); zero matrices for params
    // whose gradient was never touched.
    std::map<std::string, Eigen::MatrixXd> param_grads() const;

    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Eigen::MatrixXd value;
        Eigen::MatrixXd grad;
        std::function<void(Graph&, int)> backward;
        bool requires_grad = false;
    };
    std::vector<Node> nodes_;
    std::vector<std::pair<std::string, int>> params_;
};

// ---- primitive operations ----

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);  // elementwise
Var matmul(const Var& a, const Var& b);
Var scale(const Var& a, double s);
Var add_rowvec(const Var& a, const Var& row);  // broadcasts a 1 x C row over rows of a

Var sigmoid(const Var& a);
Var tanh_(const Var& a);
Var leaky_relu(const Var& a, double negative_slope = 0.01);
Var relu(const Var& a);

Var softmax_rows(const Var& a);

Var concat_cols(const std::vector<Var>& parts);
Var concat_rows(const std::vector<Var>& parts);
Var slice_rows(const Var& a, int first, int count);
Var slice_cols(const Var& a, int first, int count);
Var transpose(const Var& a);

Var sum_all(const Var& a);
Var mean_all(const Var& a);

// Mean of squared differences over mask-true entries. target/mask carry no
// gradient. Throws NoDataError when the mask selects nothing.
Var masked_mse(const Var& pred, const Eigen::MatrixXd& target, const Eigen::MatrixXd& mask);

// Row-wise layer normalization with learnable gain/bias (1 x C each).
Var layernorm_rows(const Var& x, const Var& gamma, const Var& beta, double eps = 1e-5);

}  // namespace dbf::diff
