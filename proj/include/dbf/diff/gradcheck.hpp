#pragma once

#include <functional>

#include "dbf/diff/graph.hpp"
#include "dbf/diff/optim.hpp"

namespace dbf::diff {

// Builds a 1x1 loss from graph-bound copies of `inputs`.
using Computation = std::function<Var(Graph&, const std::vector<Var>&)>;

// Compares the reverse-mode gradient of `fn` against central differences for
// every input coordinate. Returns the maximum relative error, defined as
// |a - f| / max(1, |a| + |f|) so near-zero gradients are judged absolutely.
double grad_check(const Computation& fn, std::vector<Eigen::MatrixXd> inputs, double eps = 1e-4);

// Same check over every parameter of a store; `fn` binds parameters itself
// (the way a model forward pass does).
double grad_check_store(const std::function<Var(Graph&)>& fn, ParameterStore& store,
                        double eps = 1e-4);

}  // namespace dbf::diff
