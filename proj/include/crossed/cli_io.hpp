#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "crossed/missingness.hpp"
#include "crossed/model_core.hpp"
#include "crossed/samplers.hpp"
#include "crossed/theory_lab.hpp"

namespace crossed {

struct IngestOptions {
  std::int64_t max_rows = 0;   // keep only the first max_rows data rows (0 = all)
  std::int64_t subsample = 0;  // seeded sample without replacement down to this many rows (0 = off)
  std::uint64_t seed = 0;
};

// RegimeSpec <-> config-file JSON block ({"kind", "S", "rho", "kappa",
// "upsilon", "eps_target", "seed"}); absent fields take their defaults and the
// missing seed falls back to `default_seed`.
RegimeSpec regime_from_json(const nlohmann::json& j, std::uint64_t default_seed);
nlohmann::json regime_to_json(const RegimeSpec& spec);

// (log R / log N, log C / log N): the shape exponents implied by a dataset.
std::pair<double, double> implied_exponents(std::int64_t rows, std::int64_t cols,
                                            std::int64_t total);

struct RatingsDataset {
  std::vector<std::string> user_keys;  // dense row index -> original key
  std::vector<std::string> item_keys;  // dense column index -> original key
  ObservationSet obs;
  double implied_rho = 0.0;
  double implied_kappa = 0.0;
};

// Reads `user_id,item_id,rating` CSV; keys are remapped to dense 0-based ids
// in order of first appearance. Errors carry the offending line number.
RatingsDataset load_ratings_csv(const std::filesystem::path& path, const IngestOptions& opt = {});

// Fixed "%.17g" rendering so outputs are byte-identical for a given build.
std::string format_double(double x);

void write_trace_csv(const std::filesystem::path& path, const ChainTrace& trace);
ChainTrace read_trace_csv(const std::filesystem::path& path);

void write_norm_table_csv(const std::filesystem::path& path,
                          const std::vector<NormTableRow>& rows);

struct EssRow {
  std::string parameter;
  std::string sampler;
  std::int64_t S = 0;
  double ess = 0.0;
  std::int64_t n = 0;
};

void write_ess_csv(const std::filesystem::path& path, const std::vector<EssRow>& rows);

struct ExperimentConfig {
  std::string command;  // simulate | sample | analyze | diagnose | verify
  nlohmann::json raw;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;

  // Loads the config file and applies CLI overrides (flags win over the file).
  static ExperimentConfig load(const std::filesystem::path& config_path,
                               const std::string& command,
                               std::optional<std::uint64_t> seed_override,
                               std::optional<std::string> out_override);
};

// Executes the configured command, writing its artifacts plus a run manifest
// under out_dir. Returns 0 on success; on failure writes error_report.json and
// returns a nonzero status.
int run_experiment(const ExperimentConfig& config);

}  // namespace crossed
