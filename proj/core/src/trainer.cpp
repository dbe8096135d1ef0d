#include "pat/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

namespace pat::train {

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::IdealBP: return "ideal";
        case Algorithm::InSilico: return "insilico";
        case Algorithm::PAT: return "pat";
    }
    throw UsageError("algorithm_name: bad enum");
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "ideal" || name == "idealbp") return Algorithm::IdealBP;
    if (name == "insilico" || name == "in-silico") return Algorithm::InSilico;
    if (name == "pat") return Algorithm::PAT;
    throw ConfigError("unknown algorithm: " + name);
}

ad::ExecContext exec_context(Algorithm a) {
    using Fn = ad::ExecContext::Fn;
    switch (a) {
        case Algorithm::IdealBP: return {Fn::True, Fn::True};
        case Algorithm::InSilico: return {Fn::Model, Fn::Model};
        case Algorithm::PAT: return {Fn::True, Fn::Model};
    }
    throw UsageError("exec_context: bad enum");
}

std::vector<std::size_t> Dataset::train_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (!is_test[i]) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> Dataset::test_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (is_test[i]) out.push_back(i);
    }
    return out;
}

void Dataset::validate() const {
    if (x.size() != label.size() || x.size() != is_test.size()) {
        throw DimensionError("Dataset: field lengths disagree");
    }
    if (n_classes < 2) throw ConfigError("Dataset: need at least 2 classes");
    bool any_train = false, any_test = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x[i].allFinite()) throw NumericError("Dataset: non-finite feature in example " + std::to_string(i));
        if (label[i] < 0 || label[i] >= n_classes) {
            throw DomainError("Dataset: label out of range in example " + std::to_string(i));
        }
        (is_test[i] ? any_test : any_train) = true;
    }
    if (!any_train || !any_test) throw ConfigError("Dataset: both splits must be nonempty");
}

const TraceRow& TrainingTrace::final_row() const {
    if (rows.empty()) throw UsageError("TrainingTrace: empty trace");
    return rows.back();
}

double TrainingTrace::min_true_loss() const {
    if (rows.empty()) throw UsageError("TrainingTrace: empty trace");
    double m = rows.front().true_loss;
    for (const auto& r : rows) m = std::min(m, r.true_loss);
    return m;
}

BatchGradient batch_gradient(const nn::PnnModel& model, const Dataset& data,
                             const std::vector<std::size_t>& sample_indices,
                             const ad::ExecContext& ctx) {
    if (sample_indices.empty()) throw UsageError("batch_gradient: empty batch");
    BatchGradient out;
    out.grads = ad::GradientSet::zeros_like(model.registry());
    for (std::size_t k : sample_indices) {
        const auto fwd = model.forward(data.x[k], ctx);
        const auto lr = nn::loss_and_error_vector(model.loss, fwd.output,
                                                  nn::LossTarget::cls(data.label[k]), fwd.controls);
        out.mean_loss += lr.value;
        out.grads.add_scaled(model.backward(fwd, lr.g_output, ctx).grads, 1.0);
    }
    const double inv = 1.0 / static_cast<double>(sample_indices.size());
    out.mean_loss *= inv;
    out.grads.scale(inv);
    return out;
}

Evaluation evaluate(const nn::PnnModel& model, const Dataset& data, bool test_split,
                    ad::ExecContext::Fn use) {
    const auto idx = test_split ? data.test_indices() : data.train_indices();
    if (idx.empty()) throw UsageError("evaluate: empty split");
    ad::ExecContext ctx{use, use};
    Evaluation ev;
    ev.confusion = Eigen::MatrixXi::Zero(data.n_classes, data.n_classes);
    for (std::size_t k : idx) {
        const auto fwd = model.forward(data.x[k], ctx);
        ev.loss += (model.loss.primary == nn::PrimaryLoss::CrossEntropy)
                       ? nn::cross_entropy_from_logits(fwd.output, data.label[k])
                       : (fwd.output - RealVector::Unit(fwd.output.size(), data.label[k]))
                             .squaredNorm();
        Eigen::Index pred = 0;
        fwd.output.maxCoeff(&pred);
        ev.confusion(data.label[k], static_cast<int>(pred)) += 1;
        if (static_cast<int>(pred) == data.label[k]) ev.accuracy += 1.0;
    }
    ev.loss /= static_cast<double>(idx.size());
    ev.accuracy /= static_cast<double>(idx.size());
    return ev;
}

TrainingTrace train(nn::PnnModel& model, const Dataset& data, Algorithm alg, Optimizer& opt,
                    const TrainOptions& opts) {
    data.validate();
    if (opts.epochs < 1) throw ConfigError("train: epochs must be >= 1");
    if (opts.eval_every < 1) throw ConfigError("train: eval_every must be >= 1");

    const ad::ExecContext ctx = exec_context(alg);
    opt.bind(model.registry());
    opt.set_epoch(0);

    TrainingTrace trace;
    trace.algorithm = alg;
    trace.seed = opts.seed;

    std::mt19937_64 rng(opts.seed);
    std::vector<std::size_t> train_idx = data.train_indices();
    const int batch = opts.batch_size <= 0 ? static_cast<int>(train_idx.size()) : opts.batch_size;

    const auto t0 = std::chrono::steady_clock::now();
    for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
        std::shuffle(train_idx.begin(), train_idx.end(), rng);
        for (std::size_t at = 0, b = 0; at < train_idx.size(); at += batch, ++b) {
            const std::size_t n = std::min<std::size_t>(batch, train_idx.size() - at);
            std::vector<std::size_t> batch_idx(train_idx.begin() + at, train_idx.begin() + at + n);
            BatchGradient bg;
            try {
                bg = batch_gradient(model, data, batch_idx, ctx);
            } catch (const DegenerateMaxError& e) {
                throw NumericError("train: degenerate surrogate output at epoch " +
                                   std::to_string(epoch) + " batch " + std::to_string(b) + ": " +
                                   e.what());
            }
            if (!std::isfinite(bg.mean_loss)) {
                throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                                   " batch " + std::to_string(b));
            }
            opt.step(bg.grads);
        }
        opt.set_epoch(epoch);

        if (epoch % opts.eval_every == 0 || epoch == opts.epochs) {
            // Current parameters transferred to the true system for evaluation.
            const Evaluation tr = evaluate(model, data, /*test_split=*/true, ad::ExecContext::Fn::True);
            TraceRow row;
            row.epoch = epoch;
            row.true_loss = tr.loss;
            row.true_acc = tr.accuracy;
            if (alg == Algorithm::InSilico) {
                row.model_loss =
                    evaluate(model, data, /*test_split=*/true, ad::ExecContext::Fn::Model).loss;
            }
            row.lr = opt.current_lr();
            row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            trace.rows.push_back(row);
        }
    }
    return trace;
}

}  // namespace pat::train
