#include "dbf/diff/graph.hpp"

namespace dbf::diff {

const Eigen::MatrixXd& Var::value() const {
    return g_->value(id_);
}

Var Graph::input(Eigen::MatrixXd value) {
    Node n;
    n.value = std::move(value);
    nodes_.push_back(std::move(n));
    return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Graph::param(Eigen::MatrixXd value, std::string name) {
    Node n;
    n.value = std::move(value);
    n.requires_grad = true;
    nodes_.push_back(std::move(n));
    const int id = static_cast<int>(nodes_.size()) - 1;
    params_.emplace_back(std::move(name), id);
    return Var(this, id);
}

Var Graph::make(Eigen::MatrixXd value, std::initializer_list<Var> parents,
                std::function<void(Graph&, int)> backward) {
    return make(std::move(value), std::vector<Var>(parents), std::move(backward));
}

Var Graph::make(Eigen::MatrixXd value, const std::vector<Var>& parents,
                std::function<void(Graph&, int)> backward) {
    Node n;
    n.value = std::move(value);
    for (const Var& p : parents) {
        if (p.graph() != this) throw DataError("diff: mixing nodes from different graphs");
        n.requires_grad = n.requires_grad || nodes_[p.id()].requires_grad;
    }
    if (n.requires_grad) n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Eigen::MatrixXd& Graph::grad(int id) {
    Node& n = nodes_[id];
    if (n.grad.size() == 0) n.grad = Eigen::MatrixXd::Zero(n.value.rows(), n.value.cols());
    return n.grad;
}

void Graph::backward(const Var& output) {
    if (output.graph() != this) throw DataError("diff: backward on foreign node");
    if (output.rows() != 1 || output.cols() != 1)
        throw DataError("diff: backward requires a 1x1 output");
    grad(output.id())(0, 0) = 1.0;
    for (int id = output.id(); id >= 0; --id) {
        Node& n = nodes_[id];
        if (!n.requires_grad || n.grad.size() == 0 || !n.backward) continue;
        n.backward(*this, id);
    }
}

std::map<std::string, Eigen::MatrixXd> Graph::param_grads() const {
    std::map<std::string, Eigen::MatrixXd> out;
    for (const auto& [name, id] : params_) {
        const Node& n = nodes_[id];
        Eigen::MatrixXd g = n.grad.size() != 0
                                ? n.grad
                                : Eigen::MatrixXd::Zero(n.value.rows(), n.value.cols());
        auto [it, inserted] = out.emplace(name, std::move(g));
        if (!inserted) throw DataError("diff: duplicate parameter name " + name);
    }
    return out;
}

namespace {

Graph& graph_of(const Var& a) {
    if (!a) throw DataError("diff: empty Var");
    return *a.graph();
}

void check_same_shape(const Var& a, const Var& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DataError(std::string("diff: shape mismatch in ") + op);
}

}  // namespace

Var add(const Var& a, const Var& b) {
    Graph& g = graph_of(a);
    check_same_shape(a, b, "add");
    return g.make(a.value() + b.value(), {a, b}, [a, b](Graph& g, int id) {
        g.accum_grad(a, g.grad(id));
        g.accum_grad(b, g.grad(id));
    });
}

Var sub(const Var& a, const Var& b) {
    Graph& g = graph_of(a);
    check_same_shape(a, b, "sub");
    return g.make(a.value() - b.value(), {a, b}, [a, b](Graph& g, int id) {
        g.accum_grad(a, g.grad(id));
        g.accum_grad(b, -g.grad(id));
    });
}

Var mul(const Var& a, const Var& b) {
    Graph& g = graph_of(a);
    check_same_shape(a, b, "mul");
    return g.make(a.value().cwiseProduct(b.value()), {a, b}, [a, b](Graph& g, int id) {
        g.accum_grad(a, g.grad(id).cwiseProduct(b.value()));
        g.accum_grad(b, g.grad(id).cwiseProduct(a.value()));
    });
}

Var matmul(const Var& a, const Var& b) {
    Graph& g = graph_of(a);
    if (a.cols() != b.rows()) throw DataError("diff: inner dimension mismatch in matmul");
    return g.make(a.value() * b.value(), {a, b}, [a, b](Graph& g, int id) {
        g.accum_grad(a, g.grad(id) * b.value().transpose());
        g.accum_grad(b, a.value().transpose() * g.grad(id));
    });
}

Var scale(const Var& a, double s) {
    Graph& g = graph_of(a);
    return g.make(s * a.value(), {a}, [a, s](Graph& g, int id) {
        g.accum_grad(a, s * g.grad(id));
    });
}

Var add_rowvec(const Var& a, const Var& row) {
    Graph& g = graph_of(a);
    if (row.rows() != 1 || row.cols() != a.cols())
        throw DataError("diff: add_rowvec expects a 1 x C row matching a's columns");
    return g.make(a.value().rowwise() + row.value().row(0), {a, row}, [a, row](Graph& g, int id) {
        g.accum_grad(a, g.grad(id));
        g.accum_grad(row, g.grad(id).colwise().sum());
    });
}

Var sigmoid(const Var& a) {
    Graph& g = graph_of(a);
    Eigen::MatrixXd y = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
    return g.make(std::move(y), {a}, [a](Graph& g, int id) {
        const auto& y = g.value(id).array();
        g.accum_grad(a, (g.grad(id).array() * y * (1.0 - y)).matrix());
    });
}

Var tanh_(const Var& a) {
    Graph& g = graph_of(a);
    return g.make(a.value().array().tanh().matrix(), {a}, [a](Graph& g, int id) {
        const auto& y = g.value(id).array();
        g.accum_grad(a, (g.grad(id).array() * (1.0 - y * y)).matrix());
    });
}

Var leaky_relu(const Var& a, double negative_slope) {
    Graph& g = graph_of(a);
    Eigen::MatrixXd y =
        a.value().array().max(0.0).matrix() + negative_slope * a.value().array().min(0.0).matrix();
    return g.make(std::move(y), {a}, [a, negative_slope](Graph& g, int id) {
        const auto& x = a.value().array();
        // Slope at exactly 0 follows the x >= 0 branch (derivative 1).
        g.accum_grad(
            a, (g.grad(id).array() * (x >= 0.0).cast<double>().max(negative_slope)).matrix());
    });
}

Var relu(const Var& a) {
    Graph& g = graph_of(a);
    return g.make(a.value().array().max(0.0).matrix(), {a}, [a](Graph& g, int id) {
        const auto& x = a.value().array();
        g.accum_grad(a, (g.grad(id).array() * (x > 0.0).cast<double>()).matrix());
    });
}

Var softmax_rows(const Var& a) {
    Graph& g = graph_of(a);
    Eigen::MatrixXd y = a.value();
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        Eigen::ArrayXd row = y.row(i).array();
        row -= row.maxCoeff();
        row = row.exp();
        y.row(i) = (row / row.sum()).matrix();
    }
    return g.make(std::move(y), {a}, [a](Graph& g, int id) {
        const Eigen::MatrixXd& y = g.value(id);
        const Eigen::MatrixXd& dy = g.grad(id);
        Eigen::MatrixXd dx(y.rows(), y.cols());
        for (Eigen::Index i = 0; i < y.rows(); ++i) {
            const double dot = y.row(i).dot(dy.row(i));
            dx.row(i) = (dy.row(i).array() - dot) * y.row(i).array();
        }
        g.accum_grad(a, dx);
    });
}

Var concat_cols(const std::vector<Var>& parts) {
    if (parts.empty()) throw DataError("diff: concat_cols of nothing");
    Graph& g = graph_of(parts[0]);
    const Eigen::Index rows = parts[0].rows();
    Eigen::Index cols = 0;
    for (const Var& p : parts) {
        if (p.rows() != rows) throw DataError("diff: concat_cols row mismatch");
        cols += p.cols();
    }
    Eigen::MatrixXd y(rows, cols);
    Eigen::Index c = 0;
    for (const Var& p : parts) {
        y.middleCols(c, p.cols()) = p.value();
        c += p.cols();
    }
    std::vector<Var> kept = parts;
    return g.make(std::move(y), parts, [kept](Graph& g, int id) {
        Eigen::Index c = 0;
        for (const Var& p : kept) {
            if (g.requires_grad(p)) g.grad(p.id()) += g.grad(id).middleCols(c, p.cols());
            c += p.cols();
        }
    });
}

Var concat_rows(const std::vector<Var>& parts) {
    if (parts.empty()) throw DataError("diff: concat_rows of nothing");
    Graph& g = graph_of(parts[0]);
    const Eigen::Index cols = parts[0].cols();
    Eigen::Index rows = 0;
    for (const Var& p : parts) {
        if (p.cols() != cols) throw DataError("diff: concat_rows column mismatch");
        rows += p.rows();
    }
    Eigen::MatrixXd y(rows, cols);
    Eigen::Index r = 0;
    for (const Var& p : parts) {
        y.middleRows(r, p.rows()) = p.value();
        r += p.rows();
    }
    std::vector<Var> kept = parts;
    return g.make(std::move(y), parts, [kept](Graph& g, int id) {
        Eigen::Index r = 0;
        for (const Var& p : kept) {
            if (g.requires_grad(p)) g.grad(p.id()) += g.grad(id).middleRows(r, p.rows());
            r += p.rows();
        }
    });
}

Var slice_rows(const Var& a, int first, int count) {
    Graph& g = graph_of(a);
    if (first < 0 || first + count > a.rows()) throw DataError("diff: slice_rows out of range");
    return g.make(a.value().middleRows(first, count), {a}, [a, first, count](Graph& g, int id) {
        if (g.requires_grad(a)) g.grad(a.id()).middleRows(first, count) += g.grad(id);
    });
}

Var slice_cols(const Var& a, int first, int count) {
    Graph& g = graph_of(a);
    if (first < 0 || first + count > a.cols()) throw DataError("diff: slice_cols out of range");
    return g.make(a.value().middleCols(first, count), {a}, [a, first, count](Graph& g, int id) {
        if (g.requires_grad(a)) g.grad(a.id()).middleCols(first, count) += g.grad(id);
    });
}

Var transpose(const Var& a) {
    Graph& g = graph_of(a);
    return g.make(a.value().transpose(), {a}, [a](Graph& g, int id) {
        g.accum_grad(a, g.grad(id).transpose());
    });
}

Var sum_all(const Var& a) {
    Graph& g = graph_of(a);
    return g.make(Eigen::MatrixXd::Constant(1, 1, a.value().sum()), {a}, [a](Graph& g, int id) {
        g.accum_grad(a, Eigen::MatrixXd::Constant(a.rows(), a.cols(), g.grad(id)(0, 0)));
    });
}

Var mean_all(const Var& a) {
    return scale(sum_all(a), 1.0 / static_cast<double>(a.rows() * a.cols()));
}

Var masked_mse(const Var& pred, const Eigen::MatrixXd& target, const Eigen::MatrixXd& mask) {
    Graph& g = graph_of(pred);
    if (pred.rows() != target.rows() || pred.cols() != target.cols() ||
        pred.rows() != mask.rows() || pred.cols() != mask.cols())
        throw DataError("diff: masked_mse shape mismatch");
    const double n = mask.sum();
    if (n <= 0.0) throw NoDataError("masked_mse: empty mask");
    const Eigen::MatrixXd diff = (pred.value() - target).cwiseProduct(mask);
    const double loss = diff.array().square().sum() / n;
    return g.make(Eigen::MatrixXd::Constant(1, 1, loss), {pred},
                  [pred, diff, n](Graph& g, int id) {
                      g.accum_grad(pred, (2.0 / n) * g.grad(id)(0, 0) * diff);
                  });
}

Var layernorm_rows(const Var& x, const Var& gamma, const Var& beta, double eps) {
    Graph& g = graph_of(x);
    const Eigen::Index C = x.cols();
    if (gamma.rows() != 1 || gamma.cols() != C || beta.rows() != 1 || beta.cols() != C)
        throw DataError("diff: layernorm gain/bias must be 1 x C");
    const Eigen::MatrixXd& xv = x.value();
    Eigen::MatrixXd xhat(xv.rows(), C);
    Eigen::VectorXd inv_std(xv.rows());
    for (Eigen::Index i = 0; i < xv.rows(); ++i) {
        const double m = xv.row(i).mean();
        const double var = (xv.row(i).array() - m).square().mean();
        inv_std[i] = 1.0 / std::sqrt(var + eps);
        xhat.row(i) = (xv.row(i).array() - m) * inv_std[i];
    }
    Eigen::MatrixXd y =
        (xhat.array().rowwise() * gamma.value().row(0).array()).rowwise() +
        beta.value().row(0).array();
    return g.make(std::move(y), {x, gamma, beta},
                  [x, gamma, beta, xhat, inv_std](Graph& g, int id) {
                      const Eigen::MatrixXd& dy = g.grad(id);
                      g.accum_grad(beta, dy.colwise().sum());
                      g.accum_grad(gamma, (dy.array() * xhat.array()).colwise().sum().matrix());
                      if (!g.requires_grad(x)) return;
                      const Eigen::Index C = dy.cols();
                      Eigen::MatrixXd dx(dy.rows(), C);
                      for (Eigen::Index i = 0; i < dy.rows(); ++i) {
                          const Eigen::ArrayXd dxhat =
                              dy.row(i).array() * gamma.value().row(0).array();
                          const double s1 = dxhat.sum();
                          const double s2 = (dxhat * xhat.row(i).transpose().array()).sum();
                          dx.row(i) = (inv_std[i] / static_cast<double>(C)) *
                                      (static_cast<double>(C) * dxhat - s1 -
                                       xhat.row(i).transpose().array() * s2)
                                          .matrix()
                                          .transpose();
                      }
                      g.accum_grad(x, dx);
                  });
}

}  // namespace dbf::diff
