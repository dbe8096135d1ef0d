#pragma once

// Desk-scale MNIST ingestion: standard big-endian IDX containers, 2x2 average
// pooling down to 196-d vectors, and a deterministic synthetic digit
// generator for environments without the real files.

#include "pat/train/trainer.hpp"
#include "pat/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pat::data {

struct MnistData {
    std::vector<RealVector> images;  // row-major, pixels scaled into [0, 1]
    std::vector<int> labels;
    int rows = 0;
    int cols = 0;
};

// IDX magic numbers 0x00000803 (images) / 0x00000801 (labels); pixel bytes
// scale by 1/255. limit < 0 loads everything.
MnistData load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                         int limit = -1);

// Mean over each 2x2 block; 28x28 -> 14x14, flattened row-major.
RealVector avg_pool_2x2(const RealVector& image, int rows = 28, int cols = 28);

// Seven-segment style 28x28 glyphs with per-sample shift, scale and noise.
// Classes are balanced (n total, round-robin over digits 0..9).
MnistData synth_digits(std::uint64_t seed, int n);

// Pools images to 196-d, splits train/test stratified, returns a Dataset.
train::Dataset make_mnist_dataset(const MnistData& raw, double test_fraction, std::uint64_t seed);

}  // namespace pat::data
