#pragma once

#include <cstdint>
#include <string>

namespace ordemb {

// Everything a training or evaluation run needs. Field names mirror the CLI
// flags (kebab-case there); a JSON config file overrides these defaults and
// explicit flags override the file.
struct RunConfig {
  std::string arch_id = "A";
  std::size_t embed_dim = 1024;      // d
  double margin = 0.05;              // alpha
  std::size_t batch_size = 100;      // B
  std::size_t epochs = 30;
  std::uint64_t seed = 42;
  double learning_rate = 0.001;
  std::size_t plateau_patience = 3;
  double min_lr = 1e-7;
  std::size_t caption_max_length = 256;
  std::string alphabet_path;         // empty: built-in standard alphabet
  std::string features_path;
  std::string captions_path;
  std::string splits_path;
  std::string checkpoint_path = "checkpoint.oac";
  std::string resume_path;           // empty: start fresh
  bool symmetric_argument_order = false;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

// JSON object with keys named after the fields above (snake_case).
// Unknown keys are rejected so typos do not silently fall back to defaults.
RunConfig load_config_json(const std::string& path, RunConfig base = RunConfig{});

}  // namespace ordemb
