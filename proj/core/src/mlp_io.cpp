#include "pat/model/mlp.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pat::model {

namespace {

// 17 significant digits: enough to reproduce any double bit-exactly.
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse17(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

}  // namespace

std::string to_json(const Mlp& model) {
    nlohmann::json j;
    j["format"] = "pat-mlp-v1";
    j["layer_dims"] = model.layer_dims();
    j["activation"] = ad::activation_name(model.activation());
    nlohmann::json weights = nlohmann::json::array();
    nlohmann::json biases = nlohmann::json::array();
    for (const auto& w : model.weights()) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index jx = 0; jx < w.cols(); ++jx) row.push_back(fmt17(w(i, jx)));
            rows.push_back(std::move(row));
        }
        weights.push_back(std::move(rows));
    }
    for (const auto& b : model.biases()) {
        nlohmann::json vec = nlohmann::json::array();
        for (Eigen::Index i = 0; i < b.size(); ++i) vec.push_back(fmt17(b[i]));
        biases.push_back(std::move(vec));
    }
    j["weights"] = std::move(weights);
    j["biases"] = std::move(biases);
    j["fit_report"] = {{"train_mse", fmt17(model.report.train_mse)},
                       {"val_mse", fmt17(model.report.val_mse)},
                       {"n_samples", model.report.n_samples},
                       {"epochs_run", model.report.epochs_run},
                       {"seed", model.report.seed}};
    return j.dump(2) + "\n";
}

Mlp mlp_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("mlp json: ") + e.what(), -1);
    }
    if (!j.contains("format") || j["format"] != "pat-mlp-v1") {
        throw ParseError("mlp json: unknown or missing format tag", -1);
    }
    std::vector<int> dims = j.at("layer_dims").get<std::vector<int>>();
    const ad::Activation act = ad::activation_from_name(j.at("activation").get<std::string>());
    Mlp m(dims, act, 0);
    const auto& weights = j.at("weights");
    const auto& biases = j.at("biases");
    if (weights.size() != m.weights().size() || biases.size() != m.biases().size()) {
        throw ParseError("mlp json: layer count mismatch", -1);
    }
    for (std::size_t l = 0; l < m.weights().size(); ++l) {
        RealMatrix& w = m.weights()[l];
        const auto& rows = weights[l];
        if (static_cast<Eigen::Index>(rows.size()) != w.rows()) {
            throw ParseError("mlp json: weight row count mismatch", -1);
        }
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            const auto& row = rows[i];
            if (static_cast<Eigen::Index>(row.size()) != w.cols()) {
                throw ParseError("mlp json: weight col count mismatch", -1);
            }
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(i, c) = parse17(row[c].get<std::string>());
            }
        }
        RealVector& b = m.biases()[l];
        const auto& vec = biases[l];
        if (static_cast<Eigen::Index>(vec.size()) != b.size()) {
            throw ParseError("mlp json: bias length mismatch", -1);
        }
        for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = parse17(vec[i].get<std::string>());
    }
    if (j.contains("fit_report")) {
        const auto& r = j["fit_report"];
        m.report.train_mse = parse17(r.at("train_mse").get<std::string>());
        m.report.val_mse = parse17(r.at("val_mse").get<std::string>());
        m.report.n_samples = r.at("n_samples").get<int>();
        m.report.epochs_run = r.at("epochs_run").get<int>();
        m.report.seed = r.at("seed").get<std::uint64_t>();
    }
    return m;
}

void save_mlp(const Mlp& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_mlp: cannot open " + path);
    out << to_json(model);
    if (!out) throw IoError("save_mlp: write failed for " + path);
}

Mlp load_mlp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_mlp: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return mlp_from_json(ss.str());
}

}  // namespace pat::model
