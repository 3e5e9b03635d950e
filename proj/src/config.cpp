#include "glmev/config.hpp"

#include <charconv>

#include "glmev/csv.hpp"
#include "glmev/errors.hpp"

namespace glmev {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view text) {
  text = trim(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::kParseError, "not an integer: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

ConfigMap parse_config_text(std::string_view text, std::string_view source) {
  ConfigMap out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kParseError, std::string(source) + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::kParseError, std::string(source) + ":" + std::to_string(line_no) + ": empty key");
    out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

ConfigMap parse_config_file(const std::filesystem::path& path) {
  return parse_config_text(read_text_file(path), path.string());
}

std::string_view to_string(ExperimentKind k) {
  return k == ExperimentKind::kLaplaceError ? "laplace_error" : "consistency";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  if (name == "laplace_error" || name == "laplace-error") return ExperimentKind::kLaplaceError;
  if (name == "consistency") return ExperimentKind::kConsistency;
  throw Error(ErrorKind::kParseError, "unknown experiment '" + std::string(name) + "'");
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  std::size_t pos = 0;
  text = trim(text);
  if (text.empty()) return out;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(parse_int(text.substr(pos, end - pos)));
    pos = end + 1;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::kParseError, "not an unsigned integer: '" + std::string(text) + "'");
  }
  return v;
}

void ExperimentConfig::validate() const {
  require(!n_values.empty(), "n_values must not be empty");
  require(replicates >= 1, "replicates must be positive");
  require(B >= 2, "B must be at least 2");
  require(gamma >= 0.0, "gamma must be nonnegative");
  require(workers >= 1, "workers must be positive");
  require(prior_sigma > 0.0, "prior.sigma must be positive");
  for (int n : n_values) require(n >= 2, "every n must be >= 2");
  if (experiment == ExperimentKind::kLaplaceError) {
    require(!q_values.empty(), "laplace_error needs q_values");
    for (int q : q_values) require(q >= 1, "q values must be >= 1");
  } else {
    require(scaling.has_value(), "consistency needs scaling.kappa / scaling.psi / scaling.phi");
    scaling->validate();
    require(j0_size >= 0, "j0_size must be nonnegative");
  }
}

ExperimentConfig apply_config(ExperimentConfig base, const ConfigMap& cfg) {
  auto scaling = [&]() -> ScalingConfig& {
    if (!base.scaling) base.scaling = ScalingConfig{};
    return *base.scaling;
  };
  for (const auto& [key, value] : cfg) {
    if (key == "experiment") {
      base.experiment = parse_experiment_kind(value);
    } else if (key == "n_values") {
      base.n_values = parse_int_list(value);
    } else if (key == "replicates") {
      base.replicates = parse_int(value);
    } else if (key == "B") {
      base.B = parse_u64(value);
    } else if (key == "gamma") {
      base.gamma = parse_double(value);
      scaling().gamma = base.gamma;
    } else if (key == "q_values") {
      base.q_values = parse_int_list(value);
    } else if (key == "scaling.kappa") {
      scaling().kappa = parse_double(value);
    } else if (key == "scaling.psi") {
      scaling().psi = parse_double(value);
    } else if (key == "scaling.phi") {
      scaling().phi = parse_double(value);
    } else if (key == "seed" || key == "master_seed") {
      base.master_seed = parse_u64(value);
    } else if (key == "out") {
      base.out_path = value;
    } else if (key == "workers") {
      base.workers = static_cast<unsigned>(parse_int(value));
    } else if (key == "family") {
      base.family = parse_family(value);
    } else if (key == "prior.sigma") {
      base.prior_sigma = parse_double(value);
    } else if (key == "amplitude") {
      base.amplitude = parse_double(value);
    } else if (key == "p") {
      base.p_override = parse_int(value);
    } else if (key == "j0_size") {
      base.j0_size = parse_int(value);
    } else if (key == "bayes_n_values") {
      base.bayes_n_values = parse_int_list(value);
    } else if (key == "budget") {
      base.budget = parse_u64(value);
    } else {
      throw Error(ErrorKind::kParseError, "unknown config key '" + key + "'");
    }
  }
  if (base.scaling) base.scaling->gamma = base.gamma;
  return base;
}

}  // namespace glmev
