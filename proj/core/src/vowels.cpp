#include "pat/data/vowels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace pat::data {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::vector<VowelRecord> load_vowels_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("load_vowels_csv: cannot open " + path);

    std::vector<VowelRecord> records;
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (!header_seen) {
            header_seen = true;
            if (fields.size() != 2 + kFormantDims || fields[0] != "speaker" || fields[1] != "vowel") {
                throw ParseError("load_vowels_csv: bad header (want speaker,vowel,f1..f12)", line_no);
            }
            continue;
        }
        if (fields.size() != 2 + kFormantDims) {
            throw ParseError("load_vowels_csv: expected " + std::to_string(2 + kFormantDims) +
                                 " columns, got " + std::to_string(fields.size()),
                             line_no);
        }
        VowelRecord r;
        r.speaker = fields[0];
        r.vowel = fields[1];
        for (int i = 0; i < kFormantDims; ++i) {
            char* end = nullptr;
            const std::string& s = fields[2 + i];
            const double v = std::strtod(s.c_str(), &end);
            if (end == s.c_str() || *end != '\0' || !std::isfinite(v) || v <= 0.0) {
                throw ParseError("load_vowels_csv: bad formant value '" + s + "'", line_no);
            }
            r.formants[i] = v;
        }
        records.push_back(std::move(r));
    }
    return records;
}

void validate_full_vowel_set(const std::vector<VowelRecord>& records) {
    std::map<std::string, int> vowels, speakers;
    for (const auto& r : records) {
        ++vowels[r.vowel];
        ++speakers[r.speaker];
    }
    if (records.size() != 259 || vowels.size() != kVowelClasses || speakers.size() != 37) {
        throw DomainError("vowel set: expected 259 records over 7 vowels and 37 speakers, got " +
                          std::to_string(records.size()) + " records, " +
                          std::to_string(vowels.size()) + " vowels, " +
                          std::to_string(speakers.size()) + " speakers");
    }
}

NormalizedVowels minmax_normalize(const std::vector<VowelRecord>& records) {
    if (records.size() < 2) throw InsufficientDataError("minmax_normalize: need >= 2 records");

    NormalizedVowels out;
    out.stats.min = RealVector::Constant(kFormantDims, std::numeric_limits<double>::infinity());
    out.stats.max = RealVector::Constant(kFormantDims, -std::numeric_limits<double>::infinity());
    for (const auto& r : records) {
        for (int i = 0; i < kFormantDims; ++i) {
            out.stats.min[i] = std::min(out.stats.min[i], r.formants[i]);
            out.stats.max[i] = std::max(out.stats.max[i], r.formants[i]);
        }
    }
    for (int i = 0; i < kFormantDims; ++i) {
        if (!(out.stats.max[i] > out.stats.min[i])) {
            throw DomainError("minmax_normalize: dimension " + std::to_string(i) +
                              " is constant over the dataset");
        }
    }

    std::map<std::string, int> class_index;
    for (const auto& r : records) class_index.emplace(r.vowel, 0);
    int next = 0;
    for (auto& [name, idx] : class_index) {
        idx = next++;
        out.class_names.push_back(name);
    }

    for (const auto& r : records) {
        RealVector x(kFormantDims);
        for (int i = 0; i < kFormantDims; ++i) x[i] = r.formants[i];
        out.features.push_back(apply_stats(out.stats, x));
        out.labels.push_back(class_index.at(r.vowel));
    }
    return out;
}

RealVector apply_stats(const NormalizationStats& stats, const RealVector& x) {
    return (x - stats.min).cwiseQuotient(stats.max - stats.min);
}

RealVector denormalize(const NormalizationStats& stats, const RealVector& x_norm) {
    return stats.min + x_norm.cwiseProduct(stats.max - stats.min);
}

std::vector<VowelRecord> synth_vowels(std::uint64_t seed, int n_per_class) {
    static const char* kNames[kVowelClasses] = {"ae", "ah", "aw", "eh", "er", "ih", "iy"};

    // Class centers on a formant-like manifold (F1/F2/F3 in Hz, female-voice
    // ballpark). Layout: steady state then the 20%/50%/80% temporal slices,
    // three formants each. Slices drift a few percent around the steady state.
    static constexpr double kF[kVowelClasses][3] = {
        {860, 2050, 2850},  // ae
        {850, 1220, 2810},  // ah
        {590, 920, 2710},   // aw
        {730, 2060, 2960},  // eh
        {500, 1590, 1820},  // er
        {480, 2370, 3060},  // ih
        {440, 2760, 3370},  // iy
    };
    static constexpr double kSliceDrift[4] = {1.0, 0.96, 1.0, 1.05};

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> speaker_scale(1.0, 0.04);
    std::normal_distribution<double> jitter(0.0, 0.02);
    std::vector<VowelRecord> records;
    records.reserve(static_cast<std::size_t>(n_per_class) * kVowelClasses);
    for (int s = 0; s < n_per_class; ++s) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "syn%02d", s + 1);
        // one vocal-tract scale per speaker, shared across that speaker's vowels
        const double tract = speaker_scale(rng);
        for (int c = 0; c < kVowelClasses; ++c) {
            VowelRecord r;
            r.speaker = buf;
            r.vowel = kNames[c];
            for (int slice = 0; slice < 4; ++slice) {
                for (int f = 0; f < 3; ++f) {
                    double v = kF[c][f] * kSliceDrift[slice] * tract * (1.0 + jitter(rng));
                    while (v <= 0.0) v = kF[c][f] * tract;
                    r.formants[slice * 3 + f] = v;
                }
            }
            records.push_back(std::move(r));
        }
    }
    return records;
}

std::vector<bool> stratified_split(const std::vector<int>& labels, double test_fraction,
                                   std::uint64_t seed) {
    if (test_fraction <= 0.0 || test_fraction >= 1.0) {
        throw ConfigError("stratified_split: test_fraction must lie in (0, 1)");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    std::mt19937_64 rng(seed);
    std::vector<bool> is_test(labels.size(), false);
    for (auto& [cls, idx] : by_class) {
        if (idx.size() < 2) {
            throw InsufficientDataError("stratified_split: class " + std::to_string(cls) +
                                        " has fewer than 2 examples");
        }
        std::shuffle(idx.begin(), idx.end(), rng);
        // at least one test and one train example per class
        std::size_t n_test = static_cast<std::size_t>(std::round(idx.size() * test_fraction));
        n_test = std::max<std::size_t>(1, std::min(n_test, idx.size() - 1));
        for (std::size_t k = 0; k < n_test; ++k) is_test[idx[k]] = true;
    }
    return is_test;
}

train::Dataset make_vowel_dataset(const std::string& csv_path, std::uint64_t seed) {
    const std::vector<VowelRecord> records =
        csv_path.empty() ? synth_vowels(seed) : load_vowels_csv(csv_path);
    const NormalizedVowels nv = minmax_normalize(records);

    train::Dataset ds;
    ds.x = nv.features;
    ds.label = nv.labels;
    ds.n_classes = static_cast<int>(nv.class_names.size());
    ds.is_test = stratified_split(nv.labels, 0.2, seed ^ 0xa5a5a5a5ull);
    ds.validate();
    return ds;
}

}  // namespace pat::data
