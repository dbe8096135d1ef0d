#include "pat/train/trace_io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pat::train {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t content_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string content_hash_hex(const std::string& text) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(content_hash(text)));
    return buf;
}

std::string trace_csv(const TrainingTrace& trace) {
    std::ostringstream out;
    out << "epoch,true_loss,true_acc,model_loss,lr\n";
    for (const auto& r : trace.rows) {
        out << r.epoch << ',' << format_g17(r.true_loss) << ',' << format_g17(r.true_acc) << ',';
        if (r.model_loss) out << format_g17(*r.model_loss);
        out << ',' << format_g17(r.lr) << '\n';
    }
    return out.str();
}

void write_trace_csv(const TrainingTrace& trace, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("write_trace_csv: cannot open " + path);
    f << trace_csv(trace);
    if (!f) throw IoError("write_trace_csv: write failed for " + path);
}

std::string run_summary_json(const TrainingTrace& trace, const std::string& resolved_config_json) {
    nlohmann::json j;
    j["algorithm"] = algorithm_name(trace.algorithm);
    j["seed"] = trace.seed;
    j["epochs_recorded"] = trace.rows.size();
    if (!trace.rows.empty()) {
        const auto& last = trace.final_row();
        j["final"] = {{"epoch", last.epoch},
                      {"true_loss", format_g17(last.true_loss)},
                      {"true_acc", format_g17(last.true_acc)}};
        j["min_true_loss"] = format_g17(trace.min_true_loss());
    }
    if (!resolved_config_json.empty()) {
        j["config"] = nlohmann::json::parse(resolved_config_json);
        j["config_hash"] = content_hash_hex(resolved_config_json);
    }
    return j.dump(2) + "\n";
}

void write_run_summary_json(const TrainingTrace& trace, const std::string& resolved_config_json,
                            const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("write_run_summary_json: cannot open " + path);
    f << run_summary_json(trace, resolved_config_json);
    if (!f) throw IoError("write_run_summary_json: write failed for " + path);
}

}  // namespace pat::train
