#pragma once

// Vowel formant dataset handling. CSV schema: header
// `speaker,vowel,f1,...,f12`, UTF-8, comma-separated, decimal point. The full
// converted set carries 259 records (7 vowels x 37 speakers); a synthetic
// generator with the same shape covers environments without the real data.

#include "pat/train/trainer.hpp"
#include "pat/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace pat::data {

inline constexpr int kFormantDims = 12;
inline constexpr int kVowelClasses = 7;

struct VowelRecord {
    std::string speaker;
    std::string vowel;
    std::array<double, kFormantDims> formants{};
};

// Throws ParseError (with the line number) on malformed rows; formants must
// be positive and finite. An empty file yields an empty list.
std::vector<VowelRecord> load_vowels_csv(const std::string& path);

// Asserts the full-set shape: 259 records, 7 distinct vowels, 37 speakers.
void validate_full_vowel_set(const std::vector<VowelRecord>& records);

struct NormalizationStats {
    RealVector min;  // per-dimension minima over the full set
    RealVector max;
};

struct NormalizedVowels {
    std::vector<RealVector> features;  // in [0,1]^12
    std::vector<int> labels;
    std::vector<std::string> class_names;  // sorted; labels index into this
    NormalizationStats stats;
};

// Element-wise min-max feature scaling over all records. A constant dimension
// is degenerate and rejected.
NormalizedVowels minmax_normalize(const std::vector<VowelRecord>& records);

RealVector apply_stats(const NormalizationStats& stats, const RealVector& x);
RealVector denormalize(const NormalizationStats& stats, const RealVector& x_norm);

// Seven Gaussian clusters in 12-D with fixed trigonometric means, sigma 60 Hz
// around formant-scale centers; linearly separable at this spread.
std::vector<VowelRecord> synth_vowels(std::uint64_t seed, int n_per_class = 37);

// Stratified split: every class appears in both splits. Returns the is_test mask.
std::vector<bool> stratified_split(const std::vector<int>& labels, double test_fraction,
                                   std::uint64_t seed);

// Loads (or synthesizes) and normalizes the vowel set into a Dataset with a
// stratified 80/20 split. Empty path means synthesize.
train::Dataset make_vowel_dataset(const std::string& csv_path, std::uint64_t seed);

}  // namespace pat::data
