#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glmev/glm.hpp"
#include "glmev/simgen.hpp"

namespace glmev {

// Flat `key = value` text, UTF-8, '#' starts a comment. Later keys win.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(std::string_view text, std::string_view source = "<config>");
ConfigMap parse_config_file(const std::filesystem::path& path);

enum class ExperimentKind { kLaplaceError, kConsistency };

std::string_view to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kLaplaceError;
  std::vector<int> n_values{50, 100};
  int replicates = 20;
  std::uint64_t B = 20'000;
  double gamma = 1.0;
  std::vector<int> q_values{1, 2};
  std::optional<ScalingConfig> scaling;
  std::uint64_t master_seed = 1;
  std::filesystem::path out_path = "results";
  unsigned workers = 1;

  FamilyKind family = FamilyKind::kLogistic;
  double prior_sigma = 1.0;
  double amplitude = 2.0;           // laplace-error signal size
  std::optional<int> p_override;    // laplace-error: p = n/2 unless set
  int j0_size = 2;                  // consistency: true support size
  std::vector<int> bayes_n_values;  // consistency: also score Bayes_gamma at these n
  std::uint64_t budget = 1'000'000;

  void validate() const;
};

/// Applies recognized keys from `cfg` onto `base`.
///
/// Keys: experiment, n_values, replicates, B, gamma, q_values,
/// scaling.kappa, scaling.psi, scaling.phi, seed (or master_seed), out,
/// workers, family, prior.sigma, amplitude, p, j0_size, bayes_n_values,
/// budget. Unknown keys raise ParseError.
ExperimentConfig apply_config(ExperimentConfig base, const ConfigMap& cfg);

std::vector<int> parse_int_list(std::string_view text);
std::uint64_t parse_u64(std::string_view text);

}  // namespace glmev
