#include "run_config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace pat::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) {
            throw ConfigError("config: unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void RunConfig::validate() const {
    static const std::set<std::string> tasks = {"vowel-numerical", "shg-vowel", "plate-mnist",
                                                "synthetic"};
    if (!tasks.contains(task)) throw ConfigError("config: unknown task '" + task + "'");
    if (algorithms.empty()) throw ConfigError("config: no algorithms listed");
    for (const auto& a : algorithms) {
        if (a != "pat" && a != "insilico" && a != "ideal") {
            throw ConfigError("config: unknown algorithm '" + a + "'");
        }
    }
    if (optimizer.kind != "sgd" && optimizer.kind != "adam" && optimizer.kind != "adadelta") {
        throw ConfigError("config: unknown optimizer '" + optimizer.kind + "'");
    }
    if (epochs < 1 || batch_size < 0 || eval_every < 1) {
        throw ConfigError("config: epochs/batch_size/eval_every out of range");
    }
    if (arch.n_layers < 1) throw ConfigError("config: arch.n_layers must be >= 1");
    if (arch.plate_dim < 61) throw ConfigError("config: arch.plate_dim too small");
    if (optimizer.lr <= 0.0) throw ConfigError("config: optimizer.lr must be positive");
    if (out_dir.empty()) throw ConfigError("config: out_dir must be set");
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("config: cannot open " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what(), -1);
    }

    RunConfig cfg;
    reject_unknown(j, {"task", "algorithms", "arch", "optimizer", "epochs", "batch_size",
                       "eval_every", "seed", "data", "model", "out_dir"},
                   "top level");
    get_if(j, "task", cfg.task);
    get_if(j, "algorithms", cfg.algorithms);
    get_if(j, "epochs", cfg.epochs);
    get_if(j, "batch_size", cfg.batch_size);
    get_if(j, "eval_every", cfg.eval_every);
    get_if(j, "seed", cfg.seed);
    get_if(j, "out_dir", cfg.out_dir);
    if (j.contains("arch")) {
        const auto& a = j["arch"];
        reject_unknown(a, {"n_layers", "trainable_scale", "plate_dim", "plate_decay", "plate_omega"},
                       "arch");
        get_if(a, "n_layers", cfg.arch.n_layers);
        get_if(a, "trainable_scale", cfg.arch.trainable_scale);
        get_if(a, "plate_dim", cfg.arch.plate_dim);
        get_if(a, "plate_decay", cfg.arch.plate_decay);
        get_if(a, "plate_omega", cfg.arch.plate_omega);
    }
    if (j.contains("optimizer")) {
        const auto& o = j["optimizer"];
        reject_unknown(o, {"kind", "lr", "halve_every"}, "optimizer");
        get_if(o, "kind", cfg.optimizer.kind);
        get_if(o, "lr", cfg.optimizer.lr);
        get_if(o, "halve_every", cfg.optimizer.halve_every);
    }
    if (j.contains("data")) {
        const auto& d = j["data"];
        reject_unknown(d, {"vowel_csv", "mnist_images", "mnist_labels", "mnist_limit"}, "data");
        get_if(d, "vowel_csv", cfg.data.vowel_csv);
        get_if(d, "mnist_images", cfg.data.mnist_images);
        get_if(d, "mnist_labels", cfg.data.mnist_labels);
        get_if(d, "mnist_limit", cfg.data.mnist_limit);
    }
    if (j.contains("model")) {
        const auto& m = j["model"];
        reject_unknown(m, {"file", "fit_if_missing", "samples", "hidden", "fit_epochs", "fit_lr",
                           "fit_weight_decay", "fit_lr_halve_every", "fit_batch", "fit_seed"},
                       "model");
        get_if(m, "file", cfg.model.file);
        get_if(m, "fit_if_missing", cfg.model.fit_if_missing);
        get_if(m, "samples", cfg.model.samples);
        get_if(m, "hidden", cfg.model.hidden);
        get_if(m, "fit_epochs", cfg.model.fit_epochs);
        get_if(m, "fit_lr", cfg.model.fit_lr);
        get_if(m, "fit_weight_decay", cfg.model.fit_weight_decay);
        get_if(m, "fit_lr_halve_every", cfg.model.fit_lr_halve_every);
        get_if(m, "fit_batch", cfg.model.fit_batch);
        get_if(m, "fit_seed", cfg.model.fit_seed);
    }
    return cfg;
}

std::string to_canonical_json(const RunConfig& cfg) {
    json j;
    j["task"] = cfg.task;
    j["algorithms"] = cfg.algorithms;
    j["arch"] = {{"n_layers", cfg.arch.n_layers},
                 {"trainable_scale", cfg.arch.trainable_scale},
                 {"plate_dim", cfg.arch.plate_dim},
                 {"plate_decay", cfg.arch.plate_decay},
                 {"plate_omega", cfg.arch.plate_omega}};
    j["optimizer"] = {{"kind", cfg.optimizer.kind},
                      {"lr", cfg.optimizer.lr},
                      {"halve_every", cfg.optimizer.halve_every}};
    j["epochs"] = cfg.epochs;
    j["batch_size"] = cfg.batch_size;
    j["eval_every"] = cfg.eval_every;
    j["seed"] = cfg.seed;
    j["data"] = {{"vowel_csv", cfg.data.vowel_csv},
                 {"mnist_images", cfg.data.mnist_images},
                 {"mnist_labels", cfg.data.mnist_labels},
                 {"mnist_limit", cfg.data.mnist_limit}};
    j["model"] = {{"file", cfg.model.file},       {"fit_if_missing", cfg.model.fit_if_missing},
                  {"samples", cfg.model.samples}, {"hidden", cfg.model.hidden},
                  {"fit_epochs", cfg.model.fit_epochs}, {"fit_lr", cfg.model.fit_lr},
                  {"fit_weight_decay", cfg.model.fit_weight_decay},
                  {"fit_lr_halve_every", cfg.model.fit_lr_halve_every},
                  {"fit_batch", cfg.model.fit_batch},   {"fit_seed", cfg.model.fit_seed}};
    j["out_dir"] = cfg.out_dir;
    return j.dump();  // nlohmann objects already order keys canonically
}

}  // namespace pat::cli
