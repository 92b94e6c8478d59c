#include "dbf/diff/optim.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

namespace dbf::diff {

void ParameterStore::create(const std::string& name, Eigen::MatrixXd value) {
    if (contains(name)) throw DataError("parameter already exists: " + name);
    Entry e;
    e.m = Eigen::MatrixXd::Zero(value.rows(), value.cols());
    e.v = e.m;
    e.vhat = e.m;
    e.value = std::move(value);
    entries_.emplace(name, std::move(e));
}

Eigen::MatrixXd& ParameterStore::value(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw DataError("unknown parameter: " + name);
    return it->second.value;
}

const Eigen::MatrixXd& ParameterStore::value(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw DataError("unknown parameter: " + name);
    return it->second.value;
}

const ParameterStore::Entry& ParameterStore::entry(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw DataError("unknown parameter: " + name);
    return it->second;
}

Var ParameterStore::bind(Graph& g, const std::string& name) const {
    return g.param(value(name), name);
}

std::size_t ParameterStore::total_coefficients() const {
    std::size_t n = 0;
    for (const auto& [name, e] : entries_) n += static_cast<std::size_t>(e.value.size());
    return n;
}

void amsgrad_step(ParameterStore& store, const std::map<std::string, Eigen::MatrixXd>& grads,
                  const AmsgradConfig& cfg) {
    for (const auto& [name, g] : grads)
        if (!store.contains(name)) throw DataError("amsgrad: gradient for unknown parameter " + name);

    const long t = ++store.step_count();
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));

    for (auto& [name, e] : store.entries()) {
        auto it = grads.find(name);
        if (it == grads.end()) throw DataError("amsgrad: missing gradient for " + name);
        const Eigen::MatrixXd& g_raw = it->second;
        if (g_raw.rows() != e.value.rows() || g_raw.cols() != e.value.cols())
            throw DataError("amsgrad: gradient shape mismatch for " + name);

        const Eigen::MatrixXd g = g_raw + cfg.weight_decay * e.value;
        e.m = cfg.beta1 * e.m + (1.0 - cfg.beta1) * g;
        e.v = cfg.beta2 * e.v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
        e.vhat = e.vhat.cwiseMax(e.v);
        const Eigen::ArrayXXd mhat = e.m.array() / bc1;
        const Eigen::ArrayXXd denom = (e.vhat.array() / bc2).sqrt() + cfg.eps;
        e.value.array() -= cfg.lr * mhat / denom;
    }
}

using nlohmann::json;

void save_checkpoint(const std::string& path, const ParameterStore& store,
                     const std::string& config_json) {
    json j;
    j["format"] = "dbf-checkpoint";
    j["version"] = 1;
    j["config"] = config_json.empty() ? json(nullptr) : json::parse(config_json);
    json params = json::object();
    for (const auto& [name, e] : store.entries()) {
        json p;
        p["shape"] = {e.value.rows(), e.value.cols()};
        std::vector<double> data;
        data.reserve(static_cast<std::size_t>(e.value.size()));
        for (Eigen::Index r = 0; r < e.value.rows(); ++r)
            for (Eigen::Index c = 0; c < e.value.cols(); ++c) data.push_back(e.value(r, c));
        p["data"] = std::move(data);
        params[name] = std::move(p);
    }
    j["params"] = std::move(params);
    std::ofstream os(path);
    if (!os) throw DataError("cannot write checkpoint: " + path);
    os << j.dump() << '\n';
}

std::string load_checkpoint(const std::string& path, ParameterStore& store) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open checkpoint: " + path);
    json j;
    try {
        is >> j;
    } catch (const json::parse_error& e) {
        throw DataError(std::string("bad checkpoint JSON: ") + e.what());
    }
    if (j.value("format", "") != "dbf-checkpoint" || j.value("version", 0) != 1)
        throw DataError("unrecognized checkpoint format: " + path);
    for (const auto& [name, p] : j.at("params").items()) {
        const auto shape = p.at("shape");
        const Eigen::Index rows = shape.at(0).get<Eigen::Index>();
        const Eigen::Index cols = shape.at(1).get<Eigen::Index>();
        const auto& data = p.at("data");
        if (static_cast<Eigen::Index>(data.size()) != rows * cols)
            throw DataError("checkpoint data length mismatch for " + name);
        Eigen::MatrixXd m(rows, cols);
        std::size_t i = 0;
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data.at(i++).get<double>();
        if (store.contains(name))
            store.value(name) = std::move(m);
        else
            store.create(name, std::move(m));
    }
    const json& cfg = j.at("config");
    return cfg.is_null() ? std::string() : cfg.dump();
}

}  // namespace dbf::diff
