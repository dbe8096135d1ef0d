#pragma once

// Run configuration for the pat tool. JSON documents with a fixed schema;
// unknown keys are rejected so typos fail before any compute. Command-line
// flags override scalar fields after the file loads.

#include "pat/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pat::cli {

struct ArchConfig {
    int n_layers = 3;        // physical stages (vowel tasks)
    bool trainable_scale = true;  // vowel-numerical: train per-stage [a, c]
    int plate_dim = 196;     // plate task vector length
    double plate_decay = 60.0;
    double plate_omega = 0.12;
};

struct OptimizerConfig {
    std::string kind = "adam";
    double lr = 0.01;
    int halve_every = 0;
};

struct DataConfig {
    std::string vowel_csv;     // empty: $PAT_DATA_DIR/vowels.csv, else synthesize
    std::string mnist_images;  // empty: $PAT_DATA_DIR/train-images-idx3-ubyte, else synthesize
    std::string mnist_labels;
    int mnist_limit = 10000;
};

struct ModelConfig {
    std::string file;            // fitted digital model; empty + fit_if_missing -> fit now
    bool fit_if_missing = true;
    int samples = 2000;
    std::vector<int> hidden = {256, 128, 64};
    int fit_epochs = 400;
    double fit_lr = 1e-3;
    int fit_lr_halve_every = 0;
    double fit_weight_decay = 1e-5;
    int fit_batch = 64;
    std::uint64_t fit_seed = 1;
};

struct RunConfig {
    std::string task = "vowel-numerical";  // vowel-numerical | shg-vowel | plate-mnist | synthetic
    std::vector<std::string> algorithms = {"pat"};
    ArchConfig arch;
    OptimizerConfig optimizer;
    int epochs = 1000;
    int batch_size = 32;
    int eval_every = 10;
    std::uint64_t seed = 0;
    DataConfig data;
    ModelConfig model;
    std::string out_dir = "out";

    void validate() const;
};

RunConfig load_run_config(const std::string& path);
// Canonical resolved form (sorted keys); the hash of this string is the run's
// reproducibility fingerprint.
std::string to_canonical_json(const RunConfig& cfg);

}  // namespace pat::cli
