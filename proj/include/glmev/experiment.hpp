#pragma once

// Experiment orchestration: the max-over-models Laplace error study and the
// selection-consistency study, with their CSV outputs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "glmev/config.hpp"

namespace glmev {

struct LaplaceErrorRow {
  int n = 0;
  int p = 0;
  int q = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  double max_error = 0.0;
  std::uint64_t models_scored = 0;
  std::uint64_t separated_count = 0;
};

struct FigureRow {
  int n = 0;
  int q = 0;
  double mean_error = 0.0;
  double se_error = 0.0;
};

struct LaplaceErrorTable {
  std::vector<LaplaceErrorRow> rows;  // ordered by (n, q, replicate)
  std::vector<FigureRow> aggregate;   // ordered by (n, q)
};

struct ConsistencyRow {
  int n = 0;
  int p = 0;
  int q = 0;
  double beta_min = 0.0;
  int replicate = 0;
  std::uint64_t seed = 0;
  bool recovered = false;
  std::string selected_model;
};

struct RecoveryRow {
  std::string method;  // laplace_gamma | bayes_gamma
  int n = 0;
  int p = 0;
  int q = 0;
  double recovery_rate = 0.0;
  int replicates = 0;
};

struct ConsistencyTable {
  std::vector<ConsistencyRow> rows;        // Laplace_gamma, ordered by (n, replicate)
  std::vector<ConsistencyRow> bayes_rows;  // Bayes_gamma at bayes_n_values
  std::vector<RecoveryRow> aggregate;
};

// Seed of replicate `rep` at (n, q); the row's seed column.
std::uint64_t laplace_error_replicate_seed(std::uint64_t master, int n, int q, int rep);
std::uint64_t consistency_replicate_seed(std::uint64_t master, int n, int rep);

int laplace_error_p(const ExperimentConfig& cfg, int n);

// One replicate, reproducible from its seed alone.
LaplaceErrorRow run_laplace_error_replicate(const ExperimentConfig& cfg, int n, int q, int replicate,
                                            std::uint64_t seed);

LaplaceErrorTable run_laplace_error_experiment(const ExperimentConfig& cfg);

// Model size bound used by the consistency study at sample size n:
// max(ceil(n^psi), j0_size).
int consistency_q(const ExperimentConfig& cfg, int n);

ConsistencyRow run_consistency_replicate(const ExperimentConfig& cfg, int n, int replicate, std::uint64_t seed,
                                         bool bayes);

ConsistencyTable run_consistency_experiment(const ExperimentConfig& cfg);

std::vector<FigureRow> aggregate_laplace_error(const std::vector<LaplaceErrorRow>& rows);
std::vector<RecoveryRow> aggregate_recovery(const std::vector<ConsistencyRow>& rows, const std::string& method);

std::string laplace_error_csv(const std::vector<LaplaceErrorRow>& rows);
std::string figure_csv(const std::vector<FigureRow>& rows);
std::string consistency_csv(const std::vector<ConsistencyRow>& rows);
std::string recovery_csv(const std::vector<RecoveryRow>& rows);

std::vector<FigureRow> parse_figure_csv(std::string_view text);
std::vector<LaplaceErrorRow> parse_laplace_error_csv(std::string_view text);

// Writes figure1.csv (and figure1.svg when svg is set) into dir. Returns
// false and writes a header-only file when rows is empty.
bool emit_figure_data(const std::vector<FigureRow>& rows, const std::filesystem::path& dir, bool svg = false);

std::string figure_svg(const std::vector<FigureRow>& rows);

}  // namespace glmev
