#pragma once

// The three training loops over a network: ideal backpropagation (true system
// on both passes), in-silico (digital model on both passes, parameters
// transferred to the true system for evaluation), and physics-aware training
// (true system forward, digital model backward).

#include "pat/nn/pnn.hpp"
#include "pat/train/optimizer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pat::train {

enum class Algorithm { IdealBP, InSilico, PAT };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

// Function assignment applied uniformly to every physical layer.
ad::ExecContext exec_context(Algorithm a);

struct Dataset {
    std::vector<RealVector> x;
    std::vector<int> label;
    std::vector<bool> is_test;
    int n_classes = 0;

    std::size_t size() const { return x.size(); }
    std::vector<std::size_t> train_indices() const;
    std::vector<std::size_t> test_indices() const;
    void validate() const;  // finite features, labels in range, both splits nonempty
};

struct TrainOptions {
    int epochs = 1000;
    int batch_size = 32;   // <= 0 means full batch
    int eval_every = 10;   // evaluation cadence in epochs
    std::uint64_t seed = 0;
};

struct TraceRow {
    int epoch = 0;
    double true_loss = 0.0;  // primary loss on the test split, true system forward
    double true_acc = 0.0;
    std::optional<double> model_loss;  // in-silico only: predicted loss via the model
    double lr = 0.0;
    double wall_s = 0.0;  // in-memory only; never serialized (outputs stay byte-reproducible)
};

struct TrainingTrace {
    Algorithm algorithm = Algorithm::IdealBP;
    std::uint64_t seed = 0;
    std::vector<TraceRow> rows;

    const TraceRow& final_row() const;
    double min_true_loss() const;
};

struct Evaluation {
    double loss = 0.0;  // mean primary loss (constraint terms excluded)
    double accuracy = 0.0;
    Eigen::MatrixXi confusion;  // [true class x predicted class]
};

// Mean gradient and loss of one batch of samples under the given context.
struct BatchGradient {
    ad::GradientSet grads;
    double mean_loss = 0.0;
};
BatchGradient batch_gradient(const nn::PnnModel& model, const Dataset& data,
                             const std::vector<std::size_t>& sample_indices,
                             const ad::ExecContext& ctx);

// Argmax accuracy and mean primary loss over a split.
Evaluation evaluate(const nn::PnnModel& model, const Dataset& data, bool test_split,
                    ad::ExecContext::Fn use);

// Mini-batch gradient descent; deterministic given the seed. Aborts with
// NumericError naming the epoch/batch on NaN loss or degenerate surrogate
// output. The trace's true metrics come from the test split with the true
// system forward at every evaluation epoch.
TrainingTrace train(nn::PnnModel& model, const Dataset& data, Algorithm alg, Optimizer& opt,
                    const TrainOptions& opts);

}  // namespace pat::train
