#include "pat/model/fit.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>

namespace pat::model {

namespace {

// Adam over the weight/bias matrices of one MLP.
struct AdamState {
    std::vector<RealMatrix> mw, vw;
    std::vector<RealVector> mb, vb;
    long t = 0;

    explicit AdamState(const Mlp& m) {
        for (const auto& w : m.weights()) {
            mw.push_back(RealMatrix::Zero(w.rows(), w.cols()));
            vw.push_back(RealMatrix::Zero(w.rows(), w.cols()));
        }
        for (const auto& b : m.biases()) {
            mb.push_back(RealVector::Zero(b.size()));
            vb.push_back(RealVector::Zero(b.size()));
        }
    }

    void step(Mlp& m, const std::vector<RealMatrix>& gw, const std::vector<RealVector>& gb,
              double lr) {
        constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        ++t;
        const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
        for (std::size_t l = 0; l < gw.size(); ++l) {
            mw[l] = b1 * mw[l] + (1.0 - b1) * gw[l];
            vw[l] = b2 * vw[l] + (1.0 - b2) * gw[l].cwiseProduct(gw[l]);
            m.weights()[l] -=
                lr * (mw[l] / c1).cwiseQuotient(((vw[l] / c2).cwiseSqrt().array() + eps).matrix());
            mb[l] = b1 * mb[l] + (1.0 - b1) * gb[l];
            vb[l] = b2 * vb[l] + (1.0 - b2) * gb[l].cwiseProduct(gb[l]);
            m.biases()[l] -=
                lr * (mb[l] / c1).cwiseQuotient(((vb[l] / c2).cwiseSqrt().array() + eps).matrix());
        }
    }
};

}  // namespace

double evaluate_mse(const Mlp& model, const RealMatrix& inputs, const RealMatrix& targets) {
    if (inputs.cols() == 0) return 0.0;
    const RealMatrix pred = model.forward_batch(inputs);
    return (pred - targets).squaredNorm() / static_cast<double>(inputs.cols() * targets.rows());
}

Mlp fit_regression(const RealMatrix& inputs, const RealMatrix& targets, const FitConfig& cfg) {
    const Eigen::Index in_dim = inputs.rows();
    const Eigen::Index out_dim = targets.rows();
    const int n = static_cast<int>(inputs.cols());
    if (targets.cols() != n) throw DimensionError("fit_regression: input/target count mismatch");
    if (n < 2) throw InsufficientDataError("fit_regression: need at least 2 pairs");
    if (cfg.val_fraction <= 0.0 || cfg.val_fraction >= 1.0) {
        throw ConfigError("fit_regression: val_fraction must lie in (0, 1)");
    }

    std::mt19937_64 rng(cfg.seed);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int n_val = std::max(1, static_cast<int>(n * cfg.val_fraction));
    const int n_train = n - n_val;
    if (n_train < 1) throw InsufficientDataError("fit_regression: empty training split");

    RealMatrix x_train(in_dim, n_train), y_train(out_dim, n_train);
    RealMatrix x_val(in_dim, n_val), y_val(out_dim, n_val);
    for (int k = 0; k < n_train; ++k) {
        x_train.col(k) = inputs.col(order[k]);
        y_train.col(k) = targets.col(order[k]);
    }
    for (int k = 0; k < n_val; ++k) {
        x_val.col(k) = inputs.col(order[n_train + k]);
        y_val.col(k) = targets.col(order[n_train + k]);
    }

    std::vector<int> dims;
    dims.push_back(static_cast<int>(in_dim));
    dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
    dims.push_back(static_cast<int>(out_dim));
    Mlp model(dims, cfg.activation, cfg.seed ^ 0x9e3779b97f4a7c15ull);

    AdamState adam(model);
    std::vector<RealMatrix> gw;
    std::vector<RealVector> gb;
    std::vector<int> idx(n_train);
    std::iota(idx.begin(), idx.end(), 0);

    Mlp best = model;
    double best_val = evaluate_mse(model, x_val, y_val);
    int best_epoch = 0;
    int stale = 0;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const double lr =
            cfg.lr_halve_every > 0
                ? cfg.learning_rate * std::pow(0.5, (epoch - 1) / cfg.lr_halve_every)
                : cfg.learning_rate;
        std::shuffle(idx.begin(), idx.end(), rng);
        for (int at = 0; at < n_train; at += cfg.batch_size) {
            const int bs = std::min(cfg.batch_size, n_train - at);
            RealMatrix xb(in_dim, bs), yb(out_dim, bs);
            for (int k = 0; k < bs; ++k) {
                xb.col(k) = x_train.col(idx[at + k]);
                yb.col(k) = y_train.col(idx[at + k]);
            }
            Mlp::Cache cache;
            const RealMatrix pred = model.forward_batch(xb, cache);
            // d(mean squared error)/d(pred)
            const RealMatrix g_out = (2.0 / (bs * out_dim)) * (pred - yb);
            model.backward_batch(xb, cache, g_out, gw, gb);
            if (cfg.weight_decay > 0.0) {
                for (std::size_t l = 0; l < gw.size(); ++l) {
                    gw[l] += cfg.weight_decay * model.weights()[l];
                }
            }
            adam.step(model, gw, gb, lr);
        }
        const double val = evaluate_mse(model, x_val, y_val);
        if (val < best_val - cfg.min_delta) {
            best_val = val;
            best = model;
            best_epoch = epoch;
            stale = 0;
        } else if (++stale >= cfg.patience) {
            break;
        }
    }

    best.report.train_mse = evaluate_mse(best, x_train, y_train);
    best.report.val_mse = best_val;
    best.report.n_samples = n;
    best.report.epochs_run = best_epoch;
    best.report.seed = cfg.seed;
    return best;
}

InputSampler make_chained_sampler(const phys::PhysicalSystem& system, double fresh_prob,
                                  bool rescale_in_chain) {
    if (system.input_dim() != system.output_dim()) {
        throw DimensionError("make_chained_sampler: input/output dims differ");
    }
    if (fresh_prob <= 0.0 || fresh_prob > 1.0) {
        throw ConfigError("make_chained_sampler: fresh_prob must lie in (0, 1]");
    }
    auto last = std::make_shared<RealVector>();
    return [&system, fresh_prob, rescale_in_chain, last](std::mt19937_64& rng) {
        auto [x, th] = system.sample_valid_input(rng);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        if (last->size() == x.size() && u(rng) >= fresh_prob) x = *last;
        try {
            RealVector y = system.eval(x, th);
            if (rescale_in_chain) {
                std::uniform_real_distribution<double> ua(0.5, 2.0);
                std::uniform_real_distribution<double> uc(-0.5, 0.3);
                y = ad::clamp01(ua(rng) * y + RealVector::Constant(y.size(), uc(rng)));
            }
            *last = std::move(y);
        } catch (const NumericError&) {
            last->resize(0);  // degenerate output; restart the chain
        }
        return std::make_pair(std::move(x), th);
    };
}

InputSampler make_paired_sampler(InputSampler base, int burst, double sigma) {
    if (!base) throw ConfigError("make_paired_sampler: empty base sampler");
    if (burst < 1 || sigma <= 0.0) throw ConfigError("make_paired_sampler: bad burst/sigma");
    struct State {
        std::pair<RealVector, RealVector> anchor;
        int remaining = 0;
    };
    auto st = std::make_shared<State>();
    return [base = std::move(base), burst, sigma, st](std::mt19937_64& rng) {
        std::normal_distribution<double> gauss(0.0, sigma);
        if (st->remaining > 0) {
            --st->remaining;
            auto jittered = st->anchor;
            for (Eigen::Index i = 0; i < jittered.first.size(); ++i) {
                jittered.first[i] += gauss(rng);
            }
            for (Eigen::Index i = 0; i < jittered.second.size(); ++i) {
                jittered.second[i] += gauss(rng);
            }
            return jittered;
        }
        st->anchor = base(rng);
        st->remaining = burst;
        return st->anchor;
    };
}

Mlp fit_mean_model(const phys::PhysicalSystem& system, const FitConfig& cfg) {
    const Eigen::Index in_dim = system.input_dim() + system.param_dim();
    const Eigen::Index out_dim = system.output_dim();
    if (cfg.n_samples < 2) throw ConfigError("fit_mean_model: need at least 2 samples");
    if (cfg.quality_gate && cfg.n_samples < 10 * out_dim) {
        throw ConfigError("fit_mean_model: gated fits need n_samples >= 10 x output dim (" +
                          std::to_string(10 * out_dim) + ")");
    }

    // Recording uses its own stream so the split/shuffle sequence inside
    // fit_regression stays aligned with the fit seed alone.
    std::mt19937_64 rng(cfg.seed ^ 0xd1b54a32d192ed03ull);
    RealMatrix inputs(in_dim, cfg.n_samples);
    RealMatrix targets(out_dim, cfg.n_samples);
    for (int k = 0; k < cfg.n_samples; ++k) {
        auto [x, th] = cfg.sampler ? cfg.sampler(rng) : system.sample_valid_input(rng);
        inputs.col(k) = ad::concat(x, th);
        targets.col(k) = system.eval(x, th);
    }

    Mlp model = fit_regression(inputs, targets, cfg);
    if (cfg.quality_gate && model.report.val_mse > *cfg.quality_gate) {
        throw FitQualityError("fit_mean_model: validation MSE " +
                                  std::to_string(model.report.val_mse) + " above gate " +
                                  std::to_string(*cfg.quality_gate),
                              model.report.val_mse);
    }
    return model;
}

}  // namespace pat::model
