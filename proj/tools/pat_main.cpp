// pat: experiment runner. Subcommands:
//   fit       fit a digital model to a simulated physical system
//   train     train a network under ideal / in-silico / physics-aware rules
//   diagnose  gradient-angle and layer-gap diagnostics at a checkpoint
//   ssa       self-simulation-advantage reports
//   sweep     repeat a train config over a seed list, one directory per seed
//
// Exit codes: 0 success, 1 validation/config, 2 numeric failure, 3 I/O.

#include "run_config.hpp"

#include "pat/data/mnist.hpp"
#include "pat/data/vowels.hpp"
#include "pat/diag/diagnostics.hpp"
#include "pat/model/fit.hpp"
#include "pat/model/noise.hpp"
#include "pat/nn/builders.hpp"
#include "pat/ssa/ssa.hpp"
#include "pat/train/trace_io.hpp"
#include "pat/train/trainer.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pat;

namespace {

// ---- task assembly -------------------------------------------------------------

std::string data_dir() {
    const char* env = std::getenv("PAT_DATA_DIR");
    return env ? env : "";
}

std::string resolve_vowel_csv(const cli::RunConfig& cfg) {
    if (cfg.task == "synthetic") return "";
    if (!cfg.data.vowel_csv.empty()) return cfg.data.vowel_csv;
    if (!data_dir().empty()) {
        const fs::path p = fs::path(data_dir()) / "vowels.csv";
        if (fs::exists(p)) return p.string();
    }
    return "";
}

struct Task {
    std::unique_ptr<phys::PhysicalSystem> system;      // truth inside the network
    std::unique_ptr<phys::PhysicalSystem> fit_system;  // what the digital model is fitted to
    bool rescaled_adapter = false;  // trailing [a, c] applied analytically on the model side
    bool clamped_adapter = false;   // control passes clamp01 before the fitted map
    nn::PnnModel model;
    train::Dataset dataset;
    Eigen::Index fm_input_dim = 0;  // input split for the fitted stand-in
    Eigen::Index fm_ctrl_dim = 0;
    std::string data_source;
};

// Wraps a fitted MLP as the backward-pass stand-in matching the task's
// physical stage.
std::unique_ptr<phys::PhysicalSystem> make_adapter(const Task& t, const model::Mlp& fm) {
    if (t.rescaled_adapter) {
        return std::make_unique<model::RescaledMlpSystem>(fm, t.fm_input_dim, t.fm_ctrl_dim);
    }
    return std::make_unique<model::MlpSystem>(fm, t.fm_input_dim, t.fm_ctrl_dim,
                                              t.clamped_adapter);
}

Task make_task(const cli::RunConfig& cfg) {
    Task t;
    if (cfg.task == "vowel-numerical" || cfg.task == "synthetic") {
        auto shg = std::make_unique<phys::ShgSurrogate>(24, 1.0, 0.0, cfg.arch.trainable_scale);
        // the model is fitted to the normalized map (a = 1, c = 0); a
        // trainable rescale rides on top with exact structure
        t.fit_system = std::make_unique<phys::ShgSurrogate>(24, 1.0, 0.0, false);
        t.rescaled_adapter = cfg.arch.trainable_scale;
        t.clamped_adapter = true;
        t.fm_input_dim = 24;
        t.fm_ctrl_dim = 24;
        t.model = nn::build_vowel_numerical(cfg.arch.n_layers, *shg, cfg.seed ^ 0x51ull);
        t.system = std::move(shg);
        const std::string csv = resolve_vowel_csv(cfg);
        t.dataset = data::make_vowel_dataset(csv, cfg.seed);
        t.data_source = csv.empty() ? "synthetic vowels" : csv;
    } else if (cfg.task == "shg-vowel") {
        auto sys = std::make_unique<phys::AutocorrSystem>(100, 0, 50);
        t.fm_input_dim = 100;
        t.fm_ctrl_dim = 0;
        t.clamped_adapter = true;  // the stage clamps its control internally
        t.model = nn::build_shg_vowel(cfg.arch.n_layers > 1 ? cfg.arch.n_layers : 5, *sys,
                                      cfg.seed ^ 0x52ull);
        t.system = std::move(sys);
        const std::string csv = resolve_vowel_csv(cfg);
        t.dataset = data::make_vowel_dataset(csv, cfg.seed);
        t.data_source = csv.empty() ? "synthetic vowels" : csv;
    } else if (cfg.task == "plate-mnist") {
        auto plate = std::make_unique<phys::PlateConvolution>(phys::PlateConvolution::damped_cosine(
            cfg.arch.plate_dim, cfg.arch.plate_decay, cfg.arch.plate_omega));
        t.fm_input_dim = plate->input_dim();
        t.fm_ctrl_dim = 0;
        t.model = nn::build_plate_classifier(*plate);
        t.system = std::move(plate);

        std::string img = cfg.data.mnist_images, lab = cfg.data.mnist_labels;
        if (img.empty() && !data_dir().empty()) {
            const fs::path pi = fs::path(data_dir()) / "train-images-idx3-ubyte";
            const fs::path pl = fs::path(data_dir()) / "train-labels-idx1-ubyte";
            if (fs::exists(pi) && fs::exists(pl)) {
                img = pi.string();
                lab = pl.string();
            }
        }
        data::MnistData raw;
        if (!img.empty()) {
            raw = data::load_mnist_idx(img, lab, cfg.data.mnist_limit);
            t.data_source = img;
        } else {
            raw = data::synth_digits(cfg.seed ^ 0x53ull, cfg.data.mnist_limit);
            t.data_source = "synthetic digits";
        }
        t.dataset = data::make_mnist_dataset(raw, 0.2, cfg.seed);
    } else {
        throw ConfigError("unknown task: " + cfg.task);
    }
    return t;
}

// Samples the map where the network actually drives it: the first stage sees
// element-repeated task features, deeper stages see fed-back (rescaled,
// clamped) outputs; jittered copies pin the local Jacobians.
model::InputSampler task_input_sampler(const phys::PhysicalSystem& system,
                                       const train::Dataset& ds, int repeat_k) {
    auto chained = model::make_chained_sampler(system, 0.5, /*rescale_in_chain=*/true);
    auto base = [&system, &ds, repeat_k,
                 chained = std::move(chained)](std::mt19937_64& rng) {
        auto drawn = chained(rng);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        if (u(rng) < 0.4) {
            std::uniform_int_distribution<std::size_t> pick(0, ds.size() - 1);
            drawn.first = ad::repeat_each(ds.x[pick(rng)], repeat_k);
        }
        return drawn;
    };
    return model::make_paired_sampler(std::move(base), /*burst=*/1, /*sigma=*/0.03);
}

model::FitConfig fit_config_of(const cli::RunConfig& cfg, const Task& task,
                               const phys::PhysicalSystem& system) {
    model::FitConfig fc;
    fc.n_samples = cfg.model.samples;
    fc.hidden_dims = cfg.model.hidden;
    fc.learning_rate = cfg.model.fit_lr;
    fc.batch_size = cfg.model.fit_batch;
    fc.epochs = cfg.model.fit_epochs;
    fc.patience = std::max(40, cfg.model.fit_epochs / 10);
    fc.seed = cfg.model.fit_seed;
    fc.weight_decay = cfg.model.fit_weight_decay;
    fc.lr_halve_every = cfg.model.fit_lr_halve_every;
    if (system.input_dim() == system.output_dim()) {
        const int repeat_k = static_cast<int>(system.input_dim() / task.model.input_dim());
        if (repeat_k >= 1 && task.model.input_dim() * repeat_k == system.input_dim()) {
            fc.sampler = task_input_sampler(system, task.dataset, repeat_k);
        } else {
            fc.sampler = model::make_paired_sampler(
                model::make_chained_sampler(system, 0.5, /*rescale_in_chain=*/true), 1, 0.03);
        }
    }
    return fc;
}

bool needs_model(const std::vector<std::string>& algs) {
    for (const auto& a : algs) {
        if (a != "ideal") return true;
    }
    return false;
}

// Loads the digital model from cfg.model.file, or fits and saves one.
model::Mlp obtain_model(const cli::RunConfig& cfg, const Task& task, std::ostream& log) {
    if (!cfg.model.file.empty() && fs::exists(cfg.model.file)) {
        log << "loading digital model from " << cfg.model.file << "\n";
        return model::load_mlp(cfg.model.file);
    }
    if (!cfg.model.fit_if_missing) {
        throw ConfigError("model file '" + cfg.model.file +
                          "' not found and model.fit_if_missing is off");
    }
    const phys::PhysicalSystem& target = task.fit_system ? *task.fit_system : *task.system;
    log << "fitting digital model of " << target.name() << " (" << cfg.model.samples
        << " samples)...\n";
    model::Mlp fm = model::fit_mean_model(target, fit_config_of(cfg, task, target));
    log << "fit done: train mse " << fm.report.train_mse << ", val mse " << fm.report.val_mse
        << ", epochs " << fm.report.epochs_run << "\n";
    const fs::path out = cfg.model.file.empty()
                             ? fs::path(cfg.out_dir) / "digital_model.json"
                             : fs::path(cfg.model.file);
    fs::create_directories(out.parent_path().empty() ? "." : out.parent_path());
    model::save_mlp(fm, out.string());
    log << "model written to " << out.string() << "\n";
    return fm;
}

// ---- checkpoints ------------------------------------------------------------------

void write_checkpoint(const nn::PnnModel& m, const cli::RunConfig& cfg, const std::string& path) {
    json j;
    j["format"] = "pat-checkpoint-v1";
    j["task"] = cfg.task;
    j["n_layers"] = cfg.arch.n_layers;
    const RealVector p = m.parameter_vector();
    json params = json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i) params.push_back(train::format_g17(p[i]));
    j["params"] = std::move(params);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write checkpoint " + path);
    f << j.dump(2) << "\n";
}

void load_checkpoint(nn::PnnModel& m, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open checkpoint " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("checkpoint: ") + e.what(), -1);
    }
    const auto& params = j.at("params");
    if (static_cast<Eigen::Index>(params.size()) != m.trainable_param_count()) {
        throw DimensionError("checkpoint has " + std::to_string(params.size()) +
                             " parameters but the architecture expects " +
                             std::to_string(m.trainable_param_count()));
    }
    RealVector p(m.trainable_param_count());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        p[i] = std::strtod(params[i].get<std::string>().c_str(), nullptr);
    }
    m.set_parameter_vector(p);
}

// ---- commands ------------------------------------------------------------------------

int cmd_fit(const cli::RunConfig& cfg, std::optional<double> gate) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    Task task = make_task(cfg);
    std::cout << "task " << cfg.task << ", system " << task.system->name() << "\n";
    const model::Mlp fm = obtain_model(cfg, task, std::cout);
    if (gate && fm.report.val_mse > *gate) {
        std::cerr << "fit-quality gate failed: val mse " << fm.report.val_mse << " > " << *gate
                  << " (report still written)\n";
        return 2;
    }
    return 0;
}

int run_training(const cli::RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    Task task = make_task(cfg);
    log << "task " << cfg.task << ", data: " << task.data_source << " ("
        << task.dataset.train_indices().size() << " train / " << task.dataset.test_indices().size()
        << " test)\n";

    std::optional<model::Mlp> fm;
    std::unique_ptr<phys::PhysicalSystem> fm_sys;
    if (needs_model(cfg.algorithms)) {
        fm = obtain_model(cfg, task, log);
        fm_sys = make_adapter(task, *fm);
    }

    const std::string resolved = cli::to_canonical_json(cfg);
    const RealVector init_params = task.model.parameter_vector();

    train::OptimizerKind kind = train::OptimizerKind::Adam;
    if (cfg.optimizer.kind == "sgd") kind = train::OptimizerKind::Sgd;
    if (cfg.optimizer.kind == "adadelta") kind = train::OptimizerKind::Adadelta;

    for (const auto& alg_name : cfg.algorithms) {
        const train::Algorithm alg = train::algorithm_from_name(alg_name);
        task.model.set_parameter_vector(init_params);  // aligned comparison across algorithms
        task.model.attach_model(fm_sys.get());

        train::Optimizer opt(kind, cfg.optimizer.lr, {cfg.optimizer.halve_every});
        train::TrainOptions opts;
        opts.epochs = cfg.epochs;
        opts.batch_size = cfg.batch_size;
        opts.eval_every = cfg.eval_every;
        opts.seed = cfg.seed;

        log << "training " << alg_name << " for " << cfg.epochs << " epochs...\n";
        const train::TrainingTrace trace = train::train(task.model, task.dataset, alg, opt, opts);
        const auto& last = trace.final_row();
        log << "  final: true loss " << last.true_loss << ", true acc " << last.true_acc << " ("
            << last.wall_s << " s)\n";

        const fs::path base = fs::path(cfg.out_dir);
        train::write_trace_csv(trace, (base / ("trace_" + alg_name + ".csv")).string());
        train::write_run_summary_json(trace, resolved,
                                      (base / ("summary_" + alg_name + ".json")).string());
        write_checkpoint(task.model, cfg, (base / ("checkpoint_" + alg_name + ".json")).string());
    }
    return 0;
}

int cmd_diagnose(const cli::RunConfig& cfg, const std::string& checkpoint, int n_batches,
                 int batch_size) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    Task task = make_task(cfg);

    model::Mlp fm = obtain_model(cfg, task, std::cout);
    const auto fm_sys = make_adapter(task, fm);
    task.model.attach_model(fm_sys.get());
    if (!checkpoint.empty()) load_checkpoint(task.model, checkpoint);

    std::mt19937_64 rng(cfg.seed);
    const auto train_idx = task.dataset.train_indices();

    std::ofstream csv(fs::path(cfg.out_dir) / "gradient_angles.csv");
    csv << "batch,angle_pat_ideal_deg,angle_insilico_ideal_deg,mag_ratio_pat,mag_ratio_insilico\n";
    std::vector<double> pat_angles, insilico_angles;
    for (int b = 0; b < n_batches; ++b) {
        std::vector<std::size_t> batch;
        std::uniform_int_distribution<std::size_t> pick(0, train_idx.size() - 1);
        for (int k = 0; k < batch_size; ++k) batch.push_back(train_idx[pick(rng)]);
        const auto cmp = diag::compare_algorithms_at_point(task.model, task.dataset, batch);
        pat_angles.push_back(cmp.angle_pat_ideal_deg);
        insilico_angles.push_back(cmp.angle_insilico_ideal_deg);
        csv << b << ',' << train::format_g17(cmp.angle_pat_ideal_deg) << ','
            << train::format_g17(cmp.angle_insilico_ideal_deg) << ','
            << train::format_g17(cmp.magnitude_ratio_pat) << ','
            << train::format_g17(cmp.magnitude_ratio_insilico) << '\n';
    }

    // per-layer forward gap, averaged over a handful of test samples
    const auto test_idx = task.dataset.test_indices();
    std::vector<double> gap_acc;
    int n_profiles = 0;
    std::ofstream gap_csv(fs::path(cfg.out_dir) / "layer_gaps.csv");
    gap_csv << "sample,layer,relative_gap\n";
    for (std::size_t k = 0; k < std::min<std::size_t>(test_idx.size(), 32); ++k) {
        const auto prof = diag::layer_gap_profile(task.model, task.dataset.x[test_idx[k]]);
        if (gap_acc.size() < prof.relative_gap.size()) gap_acc.resize(prof.relative_gap.size(), 0.0);
        for (std::size_t l = 0; l < prof.relative_gap.size(); ++l) {
            gap_acc[l] += prof.relative_gap[l];
            gap_csv << k << ',' << (l + 1) << ',' << train::format_g17(prof.relative_gap[l]) << '\n';
        }
        ++n_profiles;
    }

    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v.empty() ? 0.0 : v[v.size() / 2];
    };
    json j;
    j["median_angle_pat_ideal_deg"] = median(pat_angles);
    j["median_angle_insilico_ideal_deg"] = median(insilico_angles);
    json gaps = json::array();
    for (double g : gap_acc) gaps.push_back(n_profiles ? g / n_profiles : 0.0);
    j["mean_layer_gap"] = gaps;
    j["config"] = json::parse(cli::to_canonical_json(cfg));
    j["config_hash"] = train::content_hash_hex(cli::to_canonical_json(cfg));
    std::ofstream jf(fs::path(cfg.out_dir) / "diagnostics.json");
    jf << j.dump(2) << "\n";

    std::cout << "median angle(PAT, ideal): " << j["median_angle_pat_ideal_deg"] << " deg\n"
              << "median angle(in-silico, ideal): " << j["median_angle_insilico_ideal_deg"]
              << " deg\n";
    return 0;
}

int cmd_compounding(int n_max) {
    phys::PowerLawPair pair;
    const auto table = diag::compounding_gap(pair, n_max);
    std::cout << "n,relative_gap\n";
    for (const auto& [n, gap] : table) {
        std::cout << n << ',' << train::format_g17(gap) << '\n';
    }
    return 0;
}

int cmd_ssa(const std::string& preset, const std::string& spec_file, const std::string& out_file,
            bool list) {
    if (list) {
        for (const auto& p : ssa::presets()) std::cout << p.name << ": " << p.note << "\n";
        return 0;
    }
    ssa::SsaPreset p;
    if (!preset.empty()) {
        const auto* found = ssa::find_preset(preset);
        if (found == nullptr) throw ConfigError("unknown ssa preset: " + preset);
        p = *found;
    } else if (!spec_file.empty()) {
        std::ifstream f(spec_file);
        if (!f) throw IoError("cannot open " + spec_file);
        json j = json::parse(f);
        p.name = j.value("name", "custom");
        p.note = j.value("note", "");
        if (j.contains("splitstep")) {
            const auto& s = j["splitstep"];
            ssa::SplitStepSpec spec;
            spec.length_m = s.at("length_m").get<double>();
            spec.step_m = s.at("step_m").get<double>();
            spec.spectral_range_hz = ssa::parse_frequency(s.at("spectral_range").get<std::string>());
            spec.time_window_s = ssa::parse_time(s.at("time_window").get<std::string>());
            p.ops = ssa::splitstep_ops(spec);
        } else if (j.contains("oscillator")) {
            const auto& s = j["oscillator"];
            p.ops = ssa::oscillator_ops(ssa::parse_time(s.at("delta_t").get<std::string>()),
                                        ssa::parse_frequency(s.at("delta_f").get<std::string>()),
                                        s.at("n").get<double>(), s.at("m").get<double>());
        } else if (j.contains("transistor")) {
            const auto& s = j["transistor"];
            p.ops = ssa::transistor_ops(ssa::parse_time(s.at("delta_t").get<std::string>()),
                                        ssa::parse_frequency(s.at("delta_f").get<std::string>()),
                                        s.at("n_t").get<double>(), s.at("n_d").get<double>(),
                                        s.at("m1").get<double>(), s.at("c_nl").get<double>());
        } else {
            throw ConfigError("ssa spec: expected a splitstep/oscillator/transistor section");
        }
        if (j.contains("physical_time")) {
            p.physical_time_s = ssa::parse_time(j["physical_time"].get<std::string>());
        }
        if (j.contains("physical_energy")) {
            p.physical_energy_j = ssa::parse_energy(j["physical_energy"].get<std::string>());
        }
    } else {
        throw ConfigError("ssa: need --preset or --spec (or --list)");
    }

    std::cout << ssa::report_table(p);
    if (!out_file.empty()) {
        std::ofstream f(out_file, std::ios::binary);
        if (!f) throw IoError("cannot write " + out_file);
        f << ssa::report_json(p);
    }
    return 0;
}

int cmd_sweep(cli::RunConfig cfg, const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw ConfigError("sweep: empty seed list");
    const std::string base = cfg.out_dir;
    for (std::uint64_t s : seeds) {
        cfg.seed = s;
        cfg.out_dir = (fs::path(base) / ("seed_" + std::to_string(s))).string();
        std::cout << "=== seed " << s << " -> " << cfg.out_dir << "\n";
        const int rc = run_training(cfg, std::cout);
        if (rc != 0) return rc;
    }
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"physics-aware training experiment runner"};
    app.require_subcommand(1);

    cli::RunConfig cfg;
    std::string config_path;

    // The config file loads before flag parsing, so explicit flags override it.
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) {
            config_path = argv[i + 1];
        } else if (arg.rfind("--config=", 0) == 0) {
            config_path = arg.substr(9);
        }
    }
    if (!config_path.empty()) cfg = cli::load_run_config(config_path);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run config (flags override)");
        sub->add_option("--task", cfg.task, "vowel-numerical | shg-vowel | plate-mnist | synthetic");
        sub->add_option("--seed", cfg.seed, "run seed");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--layers", cfg.arch.n_layers, "physical stage count");
        sub->add_flag("!--fixed-scale", cfg.arch.trainable_scale,
                      "freeze the surrogate scale/offset at (1, 0)");
        sub->add_option("--model-file", cfg.model.file, "digital model JSON path");
        sub->add_option("--fit-samples", cfg.model.samples, "samples for model fitting");
        sub->add_option("--fit-seed", cfg.model.fit_seed, "model fit seed");
        sub->add_option("--fit-epochs", cfg.model.fit_epochs, "model fit epoch cap");
        sub->add_option("--fit-lr-halve", cfg.model.fit_lr_halve_every,
                        "halve the fit lr every N epochs");
        sub->add_option("--fit-batch", cfg.model.fit_batch, "fit mini-batch size");
        sub->add_option("--fit-wd", cfg.model.fit_weight_decay, "fit weight decay");
        sub->add_option("--hidden", cfg.model.hidden, "model hidden dims");
    };

    // fit
    auto* fit = app.add_subcommand("fit", "fit a digital model of the task's physical system");
    add_common(fit);
    std::optional<double> gate;
    fit->add_option("--gate", gate, "maximum acceptable validation MSE");

    // train
    auto* tr = app.add_subcommand("train", "train under one or more algorithms");
    add_common(tr);
    std::string alg_csv;
    tr->add_option("--alg", alg_csv, "comma list: pat,insilico,ideal");
    tr->add_option("--epochs", cfg.epochs, "training epochs");
    tr->add_option("--batch", cfg.batch_size, "mini-batch size (0 = full batch)");
    tr->add_option("--eval-every", cfg.eval_every, "evaluation cadence");
    tr->add_option("--opt", cfg.optimizer.kind, "sgd | adam | adadelta");
    tr->add_option("--lr", cfg.optimizer.lr, "learning rate");
    tr->add_option("--halve-every", cfg.optimizer.halve_every, "halve lr every N epochs");
    tr->add_option("--vowel-csv", cfg.data.vowel_csv, "vowel dataset CSV");
    tr->add_option("--mnist-images", cfg.data.mnist_images, "MNIST images idx file");
    tr->add_option("--mnist-labels", cfg.data.mnist_labels, "MNIST labels idx file");
    tr->add_option("--mnist-limit", cfg.data.mnist_limit, "image count cap");

    // diagnose
    auto* di = app.add_subcommand("diagnose", "gradient and forward-gap diagnostics");
    add_common(di);
    std::string checkpoint;
    int n_batches = 20, diag_batch = 16, compounding_n = 0;
    di->add_option("--checkpoint", checkpoint, "checkpoint JSON from train");
    di->add_option("--batches", n_batches, "number of random batches");
    di->add_option("--batch", diag_batch, "batch size for gradient comparisons");
    di->add_option("--compounding", compounding_n,
                   "print the scalar compounding-gap table up to n and exit");

    // ssa
    auto* sa = app.add_subcommand("ssa", "self-simulation-advantage reports");
    std::string preset, spec_file, ssa_out;
    bool list = false;
    sa->add_option("--preset", preset, "named scenario (see --list)");
    sa->add_option("--spec", spec_file, "custom spec JSON");
    sa->add_option("--out", ssa_out, "write the JSON report here");
    sa->add_flag("--list", list, "list presets");

    // sweep
    auto* sw = app.add_subcommand("sweep", "run a train config over several seeds");
    add_common(sw);
    std::vector<std::uint64_t> seeds;
    sw->add_option("--seeds", seeds, "seed list")->delimiter(',');
    sw->add_option("--alg", alg_csv, "comma list: pat,insilico,ideal");
    sw->add_option("--epochs", cfg.epochs, "training epochs");
    sw->add_option("--batch", cfg.batch_size, "mini-batch size");
    sw->add_option("--eval-every", cfg.eval_every, "evaluation cadence");
    sw->add_option("--opt", cfg.optimizer.kind, "sgd | adam | adadelta");
    sw->add_option("--lr", cfg.optimizer.lr, "learning rate");

    CLI11_PARSE(app, argc, argv);

    if (!alg_csv.empty()) {
        cfg.algorithms.clear();
        std::stringstream ss(alg_csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) cfg.algorithms.push_back(item);
        }
    }

    if (fit->parsed()) return cmd_fit(cfg, gate);
    if (tr->parsed()) return run_training(cfg, std::cout);
    if (di->parsed()) {
        if (compounding_n > 0) return cmd_compounding(compounding_n);
        return cmd_diagnose(cfg, checkpoint, n_batches, diag_batch);
    }
    if (sa->parsed()) return cmd_ssa(preset, spec_file, ssa_out, list);
    if (sw->parsed()) return cmd_sweep(cfg, seeds);
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {  // config/dimension/domain
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
