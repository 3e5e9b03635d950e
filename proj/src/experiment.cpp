#include "glmev/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "glmev/csv.hpp"
#include "glmev/errors.hpp"
#include "glmev/evidence.hpp"
#include "glmev/model_space.hpp"
#include "glmev/parallel.hpp"
#include "glmev/rng.hpp"
#include "glmev/simgen.hpp"

namespace glmev {

namespace {

constexpr std::uint64_t kTagLaplaceError = 0x4C41504C;  // "LAPL"
constexpr std::uint64_t kTagConsistency = 0x434F4E53;   // "CONS"

PriorSpec prior_of(const ExperimentConfig& cfg) {
  PriorSpec prior;
  prior.sigma = cfg.prior_sigma;
  return prior;
}

std::uint64_t as_tag(int v) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(v)); }

}  // namespace

std::uint64_t laplace_error_replicate_seed(std::uint64_t master, int n, int q, int rep) {
  return derive_seed(master, {kTagLaplaceError, as_tag(n), as_tag(q), as_tag(rep)});
}

std::uint64_t consistency_replicate_seed(std::uint64_t master, int n, int rep) {
  return derive_seed(master, {kTagConsistency, as_tag(n), as_tag(rep)});
}

int laplace_error_p(const ExperimentConfig& cfg, int n) {
  return cfg.p_override ? *cfg.p_override : std::max(1, n / 2);
}

LaplaceErrorRow run_laplace_error_replicate(const ExperimentConfig& cfg, int n, int q, int replicate,
                                            std::uint64_t seed) {
  const int p = laplace_error_p(cfg, n);
  require(q <= p, "q exceeds p at n=" + std::to_string(n));
  SimConfig sim;
  sim.n = n;
  sim.p = p;
  sim.q_true = q;
  sim.amplitude = cfg.amplitude;
  sim.family = cfg.family;
  sim.seed = seed;
  const Dataset ds = simulate(sim);
  const LaplaceErrorReport rep =
      laplace_error_max(ds, q, prior_of(cfg), cfg.B, derive_seed(seed, {3}), cfg.budget, 1);

  LaplaceErrorRow row;
  row.n = n;
  row.p = p;
  row.q = q;
  row.replicate = replicate;
  row.seed = seed;
  row.max_error = rep.max_error;
  row.models_scored = rep.models_scored;
  row.separated_count = rep.separated_count;
  return row;
}

LaplaceErrorTable run_laplace_error_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  require(cfg.experiment == ExperimentKind::kLaplaceError, "config is not a laplace_error experiment");
  struct Task {
    int n, q, rep;
  };
  std::vector<Task> tasks;
  for (int n : cfg.n_values) {
    for (int q : cfg.q_values) {
      check_budget(laplace_error_p(cfg, n), q, cfg.budget);
      for (int r = 0; r < cfg.replicates; ++r) tasks.push_back({n, q, r});
    }
  }
  LaplaceErrorTable table;
  table.rows.resize(tasks.size());
  parallel_for(tasks.size(), cfg.workers, [&](std::size_t i) {
    const Task& t = tasks[i];
    table.rows[i] = run_laplace_error_replicate(cfg, t.n, t.q, t.rep,
                                                laplace_error_replicate_seed(cfg.master_seed, t.n, t.q, t.rep));
  });
  table.aggregate = aggregate_laplace_error(table.rows);
  return table;
}

int consistency_q(const ExperimentConfig& cfg, int n) {
  require(cfg.scaling.has_value(), "consistency needs a scaling config");
  return std::max(scaling_config_instantiate(*cfg.scaling, n).q, cfg.j0_size);
}

ConsistencyRow run_consistency_replicate(const ExperimentConfig& cfg, int n, int replicate, std::uint64_t seed,
                                         bool bayes) {
  const ScaledSizes sizes = scaling_config_instantiate(*cfg.scaling, n);
  const int q = std::min(consistency_q(cfg, n), sizes.p);
  SimConfig sim;
  sim.n = n;
  sim.p = sizes.p;
  sim.q_true = std::min(q, cfg.j0_size);
  sim.amplitude = sizes.beta_min;
  sim.family = cfg.family;
  sim.seed = seed;
  const Dataset ds = simulate(sim);

  ModelPrior mp;
  mp.gamma = cfg.gamma;
  mp.q_max = q;
  mp.p = sizes.p;
  SelectOptions opts;
  opts.method = bayes ? ScoreKind::kBayesGamma : ScoreKind::kLaplaceGamma;
  opts.B = cfg.B;
  opts.seed = derive_seed(seed, {3});
  opts.budget = cfg.budget;
  const ScanResult scan = select_model(ds, prior_of(cfg), mp, opts);

  ConsistencyRow row;
  row.n = n;
  row.p = sizes.p;
  row.q = q;
  row.beta_min = sizes.beta_min;
  row.replicate = replicate;
  row.seed = seed;
  row.recovered = scan.best == true_support(sim);
  row.selected_model = scan.best.to_string();
  return row;
}

ConsistencyTable run_consistency_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  require(cfg.experiment == ExperimentKind::kConsistency, "config is not a consistency experiment");
  struct Task {
    int n, rep;
    bool bayes;
  };
  std::vector<Task> tasks;
  for (int n : cfg.n_values) {
    const ScaledSizes sizes = scaling_config_instantiate(*cfg.scaling, n);
    check_budget(sizes.p, std::min(consistency_q(cfg, n), sizes.p), cfg.budget);
    for (int r = 0; r < cfg.replicates; ++r) tasks.push_back({n, r, false});
  }
  for (int n : cfg.bayes_n_values) {
    for (int r = 0; r < cfg.replicates; ++r) tasks.push_back({n, r, true});
  }
  std::vector<ConsistencyRow> all(tasks.size());
  parallel_for(tasks.size(), cfg.workers, [&](std::size_t i) {
    const Task& t = tasks[i];
    all[i] = run_consistency_replicate(cfg, t.n, t.rep, consistency_replicate_seed(cfg.master_seed, t.n, t.rep),
                                       t.bayes);
  });
  ConsistencyTable table;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    (tasks[i].bayes ? table.bayes_rows : table.rows).push_back(std::move(all[i]));
  }
  table.aggregate = aggregate_recovery(table.rows, "laplace_gamma");
  for (auto& r : aggregate_recovery(table.bayes_rows, "bayes_gamma")) table.aggregate.push_back(std::move(r));
  return table;
}

std::vector<FigureRow> aggregate_laplace_error(const std::vector<LaplaceErrorRow>& rows) {
  std::map<std::pair<int, int>, std::vector<double>> groups;
  for (const auto& r : rows) groups[{r.n, r.q}].push_back(r.max_error);
  std::vector<FigureRow> out;
  for (const auto& [key, errs] : groups) {
    const double m = static_cast<double>(errs.size());
    double mean = 0.0;
    for (double e : errs) mean += e;
    mean /= m;
    double ss = 0.0;
    for (double e : errs) ss += (e - mean) * (e - mean);
    const double se = errs.size() > 1 ? std::sqrt(ss / (m - 1.0) / m) : 0.0;
    out.push_back({key.first, key.second, mean, se});
  }
  return out;
}

std::vector<RecoveryRow> aggregate_recovery(const std::vector<ConsistencyRow>& rows, const std::string& method) {
  std::map<int, RecoveryRow> groups;
  for (const auto& r : rows) {
    auto& g = groups[r.n];
    g.method = method;
    g.n = r.n;
    g.p = r.p;
    g.q = r.q;
    g.recovery_rate += r.recovered ? 1.0 : 0.0;
    ++g.replicates;
  }
  std::vector<RecoveryRow> out;
  for (auto& [n, g] : groups) {
    g.recovery_rate /= g.replicates;
    out.push_back(g);
  }
  return out;
}

std::string laplace_error_csv(const std::vector<LaplaceErrorRow>& rows) {
  std::string s = "n,p,q,replicate,seed,max_error,models_scored,separated_count\n";
  for (const auto& r : rows) {
    s += std::to_string(r.n) + ',' + std::to_string(r.p) + ',' + std::to_string(r.q) + ',' +
         std::to_string(r.replicate) + ',' + std::to_string(r.seed) + ',' + format_double(r.max_error) + ',' +
         std::to_string(r.models_scored) + ',' + std::to_string(r.separated_count) + '\n';
  }
  return s;
}

std::string figure_csv(const std::vector<FigureRow>& rows) {
  std::string s = "n,q,mean_error,se_error\n";
  for (const auto& r : rows) {
    s += std::to_string(r.n) + ',' + std::to_string(r.q) + ',' + format_double(r.mean_error) + ',' +
         format_double(r.se_error) + '\n';
  }
  return s;
}

std::string consistency_csv(const std::vector<ConsistencyRow>& rows) {
  std::string s = "n,p,q,beta_min,replicate,seed,recovered,selected_model\n";
  for (const auto& r : rows) {
    s += std::to_string(r.n) + ',' + std::to_string(r.p) + ',' + std::to_string(r.q) + ',' +
         format_double(r.beta_min) + ',' + std::to_string(r.replicate) + ',' + std::to_string(r.seed) + ',' +
         (r.recovered ? "1" : "0") + ',' + r.selected_model + '\n';
  }
  return s;
}

std::string recovery_csv(const std::vector<RecoveryRow>& rows) {
  std::string s = "method,n,p,q,recovery_rate,replicates\n";
  for (const auto& r : rows) {
    s += r.method + ',' + std::to_string(r.n) + ',' + std::to_string(r.p) + ',' + std::to_string(r.q) + ',' +
         format_double(r.recovery_rate) + ',' + std::to_string(r.replicates) + '\n';
  }
  return s;
}

namespace {

int to_int(const std::string& s) { return static_cast<int>(parse_u64(s)); }

void expect_header(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& header) {
  if (rows.empty() || rows.front() != header) throw Error(ErrorKind::kParseError, "unexpected CSV header");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != header.size()) {
      throw Error(ErrorKind::kParseError, "CSV row " + std::to_string(i + 1) + " has wrong column count");
    }
  }
}

}  // namespace

std::vector<FigureRow> parse_figure_csv(std::string_view text) {
  const auto rows = split_csv(text);
  expect_header(rows, {"n", "q", "mean_error", "se_error"});
  std::vector<FigureRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out.push_back({to_int(r[0]), to_int(r[1]), parse_double(r[2]), parse_double(r[3])});
  }
  return out;
}

std::vector<LaplaceErrorRow> parse_laplace_error_csv(std::string_view text) {
  const auto rows = split_csv(text);
  expect_header(rows, {"n", "p", "q", "replicate", "seed", "max_error", "models_scored", "separated_count"});
  std::vector<LaplaceErrorRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    LaplaceErrorRow row;
    row.n = to_int(r[0]);
    row.p = to_int(r[1]);
    row.q = to_int(r[2]);
    row.replicate = to_int(r[3]);
    row.seed = parse_u64(r[4]);
    row.max_error = parse_double(r[5]);
    row.models_scored = parse_u64(r[6]);
    row.separated_count = parse_u64(r[7]);
    out.push_back(row);
  }
  return out;
}

std::string figure_svg(const std::vector<FigureRow>& rows) {
  constexpr double kW = 480, kH = 320, kPad = 40;
  double nmin = 1e300, nmax = -1e300, emax = 0.0;
  for (const auto& r : rows) {
    nmin = std::min(nmin, static_cast<double>(r.n));
    nmax = std::max(nmax, static_cast<double>(r.n));
    emax = std::max(emax, r.mean_error);
  }
  if (rows.empty() || nmax == nmin) nmax = nmin + 1;
  if (emax <= 0.0) emax = 1.0;
  std::map<int, std::string> lines;
  for (const auto& r : rows) {
    const double x = kPad + (r.n - nmin) / (nmax - nmin) * (kW - 2 * kPad);
    const double y = kH - kPad - r.mean_error / emax * (kH - 2 * kPad);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", x, y);
    lines[r.q] += buf;
  }
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"320\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::size_t c = 0;
  for (const auto& [q, pts] : lines) {
    s += "<polyline fill=\"none\" stroke=\"" + std::string(colors[c++ % 4]) + "\" points=\"" + pts + "\"/>\n";
    s += "<!-- q=" + std::to_string(q) + " -->\n";
  }
  s += "</svg>\n";
  return s;
}

bool emit_figure_data(const std::vector<FigureRow>& rows, const std::filesystem::path& dir, bool svg) {
  write_text_file(dir / "figure1.csv", figure_csv(rows));
  if (svg) write_text_file(dir / "figure1.svg", figure_svg(rows));
  return !rows.empty();
}

}  // namespace glmev
