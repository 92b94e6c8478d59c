#include "dbf/diff/gradcheck.hpp"

namespace dbf::diff {

namespace {

double rel_err(double analytic, double numeric) {
    return std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic) + std::abs(numeric));
}

}  // namespace

double grad_check(const Computation& fn, std::vector<Eigen::MatrixXd> inputs, double eps) {
    // Analytic pass: every input is a named parameter.
    std::vector<Eigen::MatrixXd> analytic;
    {
        Graph g;
        std::vector<Var> vars;
        vars.reserve(inputs.size());
        for (std::size_t i = 0; i < inputs.size(); ++i)
            vars.push_back(g.param(inputs[i], "in" + std::to_string(i)));
        Var loss = fn(g, vars);
        g.backward(loss);
        auto grads = g.param_grads();
        for (std::size_t i = 0; i < inputs.size(); ++i)
            analytic.push_back(grads.at("in" + std::to_string(i)));
    }

    auto eval = [&](const std::vector<Eigen::MatrixXd>& xs) {
        Graph g;
        std::vector<Var> vars;
        vars.reserve(xs.size());
        for (const auto& x : xs) vars.push_back(g.input(x));
        return fn(g, vars).value()(0, 0);
    };

    double worst = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        for (Eigen::Index r = 0; r < inputs[i].rows(); ++r) {
            for (Eigen::Index c = 0; c < inputs[i].cols(); ++c) {
                const double saved = inputs[i](r, c);
                inputs[i](r, c) = saved + eps;
                const double fp = eval(inputs);
                inputs[i](r, c) = saved - eps;
                const double fm = eval(inputs);
                inputs[i](r, c) = saved;
                const double numeric = (fp - fm) / (2.0 * eps);
                worst = std::max(worst, rel_err(analytic[i](r, c), numeric));
            }
        }
    }
    return worst;
}

double grad_check_store(const std::function<Var(Graph&)>& fn, ParameterStore& store, double eps) {
    std::map<std::string, Eigen::MatrixXd> analytic;
    {
        Graph g;
        Var loss = fn(g);
        g.backward(loss);
        analytic = g.param_grads();
    }

    auto eval = [&]() {
        Graph g;
        return fn(g).value()(0, 0);
    };

    double worst = 0.0;
    for (auto& [name, e] : store.entries()) {
        auto it = analytic.find(name);
        if (it == analytic.end()) throw DataError("grad_check_store: parameter unused: " + name);
        for (Eigen::Index r = 0; r < e.value.rows(); ++r) {
            for (Eigen::Index c = 0; c < e.value.cols(); ++c) {
                const double saved = e.value(r, c);
                e.value(r, c) = saved + eps;
                const double fp = eval();
                e.value(r, c) = saved - eps;
                const double fm = eval();
                e.value(r, c) = saved;
                const double numeric = (fp - fm) / (2.0 * eps);
                worst = std::max(worst, rel_err(it->second(r, c), numeric));
            }
        }
    }
    return worst;
}

}  // namespace dbf::diff
