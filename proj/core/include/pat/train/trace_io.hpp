#pragma once

// Serialization of training traces and run summaries. Output is
// byte-reproducible for a fixed config and seed: floats print as %.17g and
// wall-clock fields are never written.
//
// Trace CSV header: epoch,true_loss,true_acc,model_loss,lr
// (model_loss is empty outside in-silico runs.)

#include "pat/train/trainer.hpp"

#include <cstdint>
#include <string>

namespace pat::train {

std::string trace_csv(const TrainingTrace& trace);
void write_trace_csv(const TrainingTrace& trace, const std::string& path);

// JSON summary: algorithm, seed, final/min metrics, epochs, the resolved
// config echo, and the config content hash.
std::string run_summary_json(const TrainingTrace& trace, const std::string& resolved_config_json);
void write_run_summary_json(const TrainingTrace& trace, const std::string& resolved_config_json,
                            const std::string& path);

// 64-bit FNV-1a over the canonical config text; the reproducibility
// fingerprint embedded in every output.
std::uint64_t content_hash(const std::string& text);
std::string content_hash_hex(const std::string& text);

std::string format_g17(double v);

}  // namespace pat::train
