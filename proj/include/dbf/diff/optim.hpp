#pragma once

#include <map>
#include <string>

#include "dbf/diff/graph.hpp"

namespace dbf::diff {

// Named parameters with AMSGrad moment state. Map order fixes the update and
// serialization order, so runs are reproducible.
class ParameterStore {
public:
    struct Entry {
        Eigen::MatrixXd value;
        Eigen::MatrixXd m;     // first moment
        Eigen::MatrixXd v;     // second moment
        Eigen::MatrixXd vhat;  // per-coordinate running max of v
    };

    // Registers a parameter; throws on duplicates.
    void create(const std::string& name, Eigen::MatrixXd value);
    bool contains(const std::string& name) const { return entries_.count(name) != 0; }

    Eigen::MatrixXd& value(const std::string& name);
    const Eigen::MatrixXd& value(const std::string& name) const;
    const Entry& entry(const std::string& name) const;

    // Binds the parameter into a graph for one forward pass.
    Var bind(Graph& g, const std::string& name) const;

    std::map<std::string, Entry>& entries() { return entries_; }
    const std::map<std::string, Entry>& entries() const { return entries_; }

    long step_count() const { return step_; }
    long& step_count() { return step_; }

    std::size_t total_coefficients() const;

private:
    std::map<std::string, Entry> entries_;
    long step_ = 0;
};

struct AmsgradConfig {
    double lr = 1e-4;
    double weight_decay = 1e-3;  // coupled: added to the gradient as an L2 term
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// One AMSGrad update over every parameter. `grads` must align with the store
// by name and shape. Bias-corrected moments; vhat is the running elementwise
// max of v, so the effective step size never grows.
void amsgrad_step(ParameterStore& store, const std::map<std::string, Eigen::MatrixXd>& grads,
                  const AmsgradConfig& cfg);

// Checkpoint: JSON {"format": "dbf-checkpoint", "version": 1,
//   "config": <arbitrary>, "params": {name: {"shape": [r, c], "data": [row-major]}}}
void save_checkpoint(const std::string& path, const ParameterStore& store,
                     const std::string& config_json);
// Returns the embedded config JSON string; fills `store`.
std::string load_checkpoint(const std::string& path, ParameterStore& store);

}  // namespace dbf::diff
