// Command-line front end: fit, evidence, scan, simulate, check-lemmas,
// check-assumptions and the two experiments.
//
// Exit codes: 0 success, 1 usage/parse error, 2 numeric failure,
// 3 lemma/assertion violation.

#include <cstdint>
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "glmev/config.hpp"
#include "glmev/csv.hpp"
#include "glmev/diagnostics.hpp"
#include "glmev/errors.hpp"
#include "glmev/evidence.hpp"
#include "glmev/experiment.hpp"
#include "glmev/fit.hpp"
#include "glmev/model_space.hpp"
#include "glmev/rng.hpp"
#include "glmev/simgen.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitViolation = 3;

struct GlobalOpts {
  std::string config;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string out;
};

struct DataOpts {
  std::string design;
  std::string response;
  std::string family = "logistic";
};

void add_data_opts(CLI::App* sub, DataOpts& d) {
  sub->add_option("--data", d.design, "design CSV (n rows, p columns, no header)")->required();
  sub->add_option("--response", d.response, "response CSV (n rows, one column)")->required();
  sub->add_option("--family", d.family, "logistic | poisson")->check(CLI::IsMember({"logistic", "poisson"}));
}

glmev::Dataset load(const DataOpts& d) {
  return glmev::load_dataset(d.design, d.response, glmev::parse_family(d.family));
}

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return a;
}

json to_json(const glmev::FitResult& f) {
  return {{"model", f.J.to_string()},         {"beta_hat", to_json(f.beta_hat)},
          {"loglik", f.loglik},               {"score_supnorm", f.score_supnorm},
          {"hessian_at_opt", to_json(f.hessian_at_opt)}, {"iterations", f.iterations},
          {"converged", f.converged}};
}

json to_json(const glmev::EvidenceEstimate& e) {
  json j = {{"model", e.J.to_string()}, {"log_value", e.log_value}, {"method", glmev::to_string(e.method)}};
  if (e.mc_std_error) j["mc_std_error"] = *e.mc_std_error;
  if (e.mc_draws) j["mc_draws"] = *e.mc_draws;
  if (e.seed) j["seed"] = *e.seed;
  return j;
}

json to_json(const glmev::LemmaReport& r) {
  json grid = json::array();
  for (const auto& c : r.grid) grid.push_back({{"params", c.params}, {"margin", c.margin}, {"violated", c.violated}});
  json j = {{"lemma", glmev::to_string(r.lemma)},
            {"violations", r.violations},
            {"worst_margin", r.worst_margin},
            {"grid", grid}};
  if (r.lemma == glmev::LemmaKind::kRadialIntegral) j["max_crosscheck_rel_error"] = r.max_crosscheck_rel_error;
  return j;
}

int exit_code_for(glmev::ErrorKind k) {
  using glmev::ErrorKind;
  switch (k) {
    case ErrorKind::kContractViolation:
    case ErrorKind::kParseError:
    case ErrorKind::kShapeMismatch:
    case ErrorKind::kInvalidResponse:
    case ErrorKind::kIo:
    case ErrorKind::kBudgetExceeded:
    case ErrorKind::kDimensionTooLarge:
    case ErrorKind::kPreconditionViolated: return kExitUsage;
    default: return kExitNumeric;
  }
}

// Sample up to `max_models` distinct models with 1 <= |J| <= kmax.
std::vector<glmev::ModelIndex> sample_models(int p, int kmax, int max_models, std::uint64_t seed) {
  if (glmev::count_models(p, kmax) - 1 <= static_cast<std::uint64_t>(max_models)) {
    auto all = glmev::enumerate_models(p, kmax);
    all.erase(all.begin());
    return all;
  }
  glmev::Xoshiro256 gen(seed);
  std::vector<glmev::ModelIndex> out;
  std::vector<int> pool(static_cast<std::size_t>(p));
  while (static_cast<int>(out.size()) < max_models) {
    const int size = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>(kmax));
    for (int j = 0; j < p; ++j) pool[static_cast<std::size_t>(j)] = j + 1;
    for (int a = 0; a < size; ++a) {
      const auto r = a + static_cast<int>(gen() % static_cast<std::uint64_t>(p - a));
      std::swap(pool[static_cast<std::size_t>(a)], pool[static_cast<std::size_t>(r)]);
    }
    std::vector<int> idx(pool.begin(), pool.begin() + size);
    std::sort(idx.begin(), idx.end());
    glmev::ModelIndex J(std::move(idx));
    if (std::find(out.begin(), out.end(), J) == out.end()) out.push_back(std::move(J));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplace and Monte Carlo evidence for sparse generalized linear models"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOpts g;
  app.add_option("--config", g.config, "flat key = value config file");
  auto* seed_opt = app.add_option("--seed", g.seed, "master seed (u64)");
  auto* workers_opt = app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  auto* out_opt = app.add_option("--out", g.out, "output path");

  // fit
  DataOpts fit_data;
  std::string fit_model;
  glmev::FitOptions fit_opts;
  auto* fit_cmd = app.add_subcommand("fit", "maximum likelihood fit of one submodel");
  add_data_opts(fit_cmd, fit_data);
  fit_cmd->add_option("--model", fit_model, "1-based indices, e.g. 1,4,7 (empty for the null model)");
  fit_cmd->add_option("--grad-tol", fit_opts.grad_tol);
  fit_cmd->add_option("--max-iter", fit_opts.max_iter);
  fit_cmd->add_option("--max-coef-norm", fit_opts.max_coef_norm);

  // evidence
  DataOpts ev_data;
  std::string ev_model, ev_method = "laplace";
  std::uint64_t ev_B = glmev::kDefaultMcDraws;
  double ev_sigma = 1.0;
  int ev_reps = 1;
  glmev::QuadratureOptions quad_opts;
  auto* ev_cmd = app.add_subcommand("evidence", "log evidence of one submodel");
  add_data_opts(ev_cmd, ev_data);
  ev_cmd->add_option("--model", ev_model, "1-based indices, e.g. 1,4,7");
  ev_cmd->add_option("--method", ev_method)->check(CLI::IsMember({"laplace", "mc", "quad"}));
  ev_cmd->add_option("--B", ev_B, "Monte Carlo draws");
  ev_cmd->add_option("--sigma", ev_sigma, "prior standard deviation");
  ev_cmd->add_option("--mc-replicates", ev_reps, "independent MC runs (seeds derived from --seed)")
      ->check(CLI::PositiveNumber);
  ev_cmd->add_option("--half-width", quad_opts.half_width_sds);
  ev_cmd->add_option("--points", quad_opts.points_per_dim);

  // scan
  DataOpts scan_data;
  double scan_gamma = 1.0, scan_sigma = 1.0;
  int scan_q = 1;
  std::string scan_method = "laplace";
  std::uint64_t scan_B = 20'000, scan_budget = 1'000'000;
  auto* scan_cmd = app.add_subcommand("scan", "score every model with |J| <= q");
  add_data_opts(scan_cmd, scan_data);
  scan_cmd->add_option("--gamma", scan_gamma);
  scan_cmd->add_option("--q", scan_q)->required();
  scan_cmd->add_option("--method", scan_method)->check(CLI::IsMember({"laplace", "bayes"}));
  scan_cmd->add_option("--B", scan_B);
  scan_cmd->add_option("--budget", scan_budget);
  scan_cmd->add_option("--sigma", scan_sigma);

  // simulate
  glmev::SimConfig sim;
  std::string sim_family = "logistic";
  auto* sim_cmd = app.add_subcommand("simulate", "write a synthetic data set");
  sim_cmd->add_option("--n", sim.n)->required();
  sim_cmd->add_option("--p", sim.p)->required();
  sim_cmd->add_option("--q-true", sim.q_true);
  sim_cmd->add_option("--amplitude", sim.amplitude);
  sim_cmd->add_option("--family", sim_family)->check(CLI::IsMember({"logistic", "poisson"}));

  // check-lemmas
  auto* lemma_cmd = app.add_subcommand("check-lemmas", "numeric verification of the chi-square and radial lemmas");

  // check-assumptions
  DataOpts as_data;
  int as_q = 1, as_draws = 50, as_models = 200;
  double as_radius = 3.0, as_epsilon = 0.2;
  std::string as_truth;
  auto* as_cmd = app.add_subcommand("check-assumptions", "empirical Hessian spectrum / Lipschitz diagnostics");
  add_data_opts(as_cmd, as_data);
  as_cmd->add_option("--q", as_q)->required();
  as_cmd->add_option("--radius", as_radius);
  as_cmd->add_option("--draws", as_draws);
  as_cmd->add_option("--models", as_models, "max models sampled among 1 <= |J| <= 2q");
  as_cmd->add_option("--truth", as_truth, "truth.json from simulate (enables the sandwich check)");
  as_cmd->add_option("--epsilon", as_epsilon);

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run a simulation study");
  exp_cmd->require_subcommand(1);
  struct ExpFlags {
    std::string n_values, q_values, bayes_n_values;
    int replicates = 0, j0_size = 0;
    std::uint64_t B = 0, budget = 0;
    double gamma = 0, kappa = 0, psi = 0, phi = 0, sigma = 0;
    bool svg = false;
  } ef;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n-values", ef.n_values, "comma-separated sample sizes");
    sub->add_option("--replicates", ef.replicates);
    sub->add_option("--B", ef.B);
    sub->add_option("--budget", ef.budget);
    sub->add_option("--sigma", ef.sigma, "prior standard deviation");
  };
  auto* le_cmd = exp_cmd->add_subcommand("laplace-error", "max-over-models Laplace error versus n");
  add_common(le_cmd);
  le_cmd->add_option("--q-values", ef.q_values);
  le_cmd->add_flag("--svg", ef.svg, "also write figure1.svg");
  auto* co_cmd = exp_cmd->add_subcommand("consistency", "recovery rate of the true support versus n");
  add_common(co_cmd);
  co_cmd->add_option("--gamma", ef.gamma);
  co_cmd->add_option("--kappa", ef.kappa);
  co_cmd->add_option("--psi", ef.psi);
  co_cmd->add_option("--phi", ef.phi);
  co_cmd->add_option("--j0-size", ef.j0_size);
  co_cmd->add_option("--bayes-n-values", ef.bayes_n_values);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fit_cmd) {
      const auto ds = load(fit_data);
      const auto fit = glmev::fit_mle(ds, glmev::ModelIndex::parse(fit_model), fit_opts);
      std::cout << to_json(fit).dump(2) << "\n";
      return kExitOk;
    }

    if (*ev_cmd) {
      const auto ds = load(ev_data);
      const auto J = glmev::ModelIndex::parse(ev_model);
      glmev::PriorSpec prior;
      prior.sigma = ev_sigma;
      if (ev_method == "mc") {
        std::vector<glmev::EvidenceEstimate> runs;
        for (int r = 0; r < ev_reps; ++r) {
          const std::uint64_t s = r == 0 ? g.seed : glmev::derive_seed(g.seed, {static_cast<std::uint64_t>(r)});
          runs.push_back(glmev::log_mc_evidence(ds, J, prior, ev_B, s));
        }
        if (ev_reps == 1) {
          std::cout << to_json(runs.front()).dump(2) << "\n";
        } else {
          json arr = json::array();
          double lo = runs.front().log_value, hi = lo;
          for (const auto& e : runs) {
            arr.push_back(to_json(e));
            lo = std::min(lo, e.log_value);
            hi = std::max(hi, e.log_value);
          }
          std::cout << json{{"estimates", arr}, {"spread", hi - lo}}.dump(2) << "\n";
        }
        return kExitOk;
      }
      const auto fit = glmev::fit_mle(ds, J);
      const auto est = ev_method == "laplace" ? glmev::log_laplace_evidence(ds, J, prior, fit)
                                              : glmev::log_quadrature_evidence(ds, J, prior, fit, quad_opts);
      std::cout << to_json(est).dump(2) << "\n";
      return kExitOk;
    }

    if (*scan_cmd) {
      const auto ds = load(scan_data);
      glmev::PriorSpec prior;
      prior.sigma = scan_sigma;
      glmev::ModelPrior mp;
      mp.gamma = scan_gamma;
      mp.q_max = scan_q;
      mp.p = static_cast<int>(ds.p());
      glmev::SelectOptions so;
      so.method = glmev::parse_score_kind(scan_method);
      so.B = scan_B;
      so.seed = g.seed;
      so.budget = scan_budget;
      so.workers = g.workers;
      const auto res = glmev::select_model(ds, prior, mp, so);
      std::uint64_t separated = 0, failed = 0;
      std::string csv = "model,size,log_score,status\n";
      for (const auto& s : res.scores) {
        csv += s.J.to_string() + ',' + std::to_string(s.J.size()) + ',' + glmev::format_double(s.score) + ',' +
               std::string(glmev::to_string(s.status)) + '\n';
        separated += s.status == glmev::FitStatus::kSeparated;
        failed += s.status == glmev::FitStatus::kFailed;
      }
      const std::string out = g.out.empty() ? "scores.csv" : g.out;
      glmev::write_text_file(out, csv);
      std::cout << json{{"best", res.best.to_string()},
                        {"score_kind", glmev::to_string(res.score_kind)},
                        {"models_scored", res.models_scored},
                        {"separated", separated},
                        {"failed", failed},
                        {"scores_csv", out}}
                       .dump(2)
                << "\n";
      return kExitOk;
    }

    if (*sim_cmd) {
      sim.family = glmev::parse_family(sim_family);
      sim.seed = g.seed;
      const fs::path dir = g.out.empty() ? fs::path("sim") : fs::path(g.out);
      const auto ds = glmev::simulate(sim);
      glmev::write_matrix_csv(dir / "design.csv", ds.X());
      glmev::write_matrix_csv(dir / "response.csv", ds.Y());
      std::vector<int> j0 = glmev::true_support(sim).indices();
      json truth = {{"beta0", to_json(glmev::make_beta0(sim))},
                    {"J0", j0},
                    {"seed", sim.seed},
                    {"config",
                     {{"n", sim.n},
                      {"p", sim.p},
                      {"q_true", sim.q_true},
                      {"amplitude", sim.amplitude},
                      {"family", glmev::to_string(sim.family)}}}};
      glmev::write_text_file(dir / "truth.json", truth.dump(2) + "\n");
      std::cout << "wrote " << (dir / "design.csv").string() << ", response.csv, truth.json\n";
      return kExitOk;
    }

    if (*lemma_cmd) {
      const auto chi = glmev::verify_chisq_tail_lemma(glmev::default_chisq_k_values(),
                                                      glmev::default_chisq_n_values());
      const auto rad = glmev::verify_radial_integral_lemma(glmev::default_radial_cases());
      std::cout << json{{"chisq_tail", to_json(chi)}, {"radial_integral", to_json(rad)}}.dump(2) << "\n";
      const bool bad = chi.violations > 0 || rad.violations > 0 || rad.max_crosscheck_rel_error > 1e-8;
      return bad ? kExitViolation : kExitOk;
    }

    if (*as_cmd) {
      const auto ds = load(as_data);
      const int p = static_cast<int>(ds.p());
      const int kmax = std::min(2 * as_q, p);
      const auto models = sample_models(p, kmax, as_models, glmev::derive_seed(g.seed, {7}));
      const auto sb = glmev::estimate_spectrum_bounds(ds, models, as_radius, as_draws, g.seed);
      const auto lip = glmev::estimate_hessian_lipschitz(ds, models, as_radius, as_draws, g.seed);
      json rep = {{"c_lower_hat", sb.c_lower},     {"c_upper_hat", sb.c_upper},
                  {"c_change_hat", lip.c_change},  {"models_sampled", models.size()},
                  {"betas_sampled", sb.betas_sampled}, {"radius", as_radius},
                  {"degenerate_pairs", lip.degenerate_skipped}, {"seed", g.seed}};
      if (!as_truth.empty()) {
        const json truth = json::parse(glmev::read_text_file(as_truth));
        Eigen::VectorXd beta0(static_cast<Eigen::Index>(truth.at("beta0").size()));
        for (Eigen::Index i = 0; i < beta0.size(); ++i) beta0[i] = truth.at("beta0")[static_cast<std::size_t>(i)];
        glmev::ModelIndex J0(truth.at("J0").get<std::vector<int>>());
        rep["a0_norm"] = beta0.norm();
        const double delta = lip.c_change > 0 ? as_epsilon * sb.c_lower / lip.c_change : 0.0;
        const auto sw = glmev::check_sandwich(ds, J0, glmev::restrict_to(beta0, J0), delta, as_epsilon, as_draws,
                                              g.seed);
        rep["sandwich_ok"] = sw.ok;
        rep["sandwich_epsilon"] = as_epsilon;
        rep["sandwich_delta"] = delta;
      }
      std::cout << rep.dump(2) << "\n";
      return kExitOk;
    }

    if (*exp_cmd) {
      const bool le = static_cast<bool>(*le_cmd);
      glmev::ConfigMap cm;
      if (!g.config.empty()) cm = glmev::parse_config_file(g.config);
      cm["experiment"] = le ? "laplace_error" : "consistency";
      CLI::App* sub = le ? le_cmd : co_cmd;
      auto flag = [&](const char* name) { return sub->count(name) > 0; };
      if (seed_opt->count()) cm["seed"] = std::to_string(g.seed);
      if (workers_opt->count()) cm["workers"] = std::to_string(g.workers);
      if (out_opt->count()) cm["out"] = g.out;
      if (flag("--n-values")) cm["n_values"] = ef.n_values;
      if (flag("--replicates")) cm["replicates"] = std::to_string(ef.replicates);
      if (flag("--B")) cm["B"] = std::to_string(ef.B);
      if (flag("--budget")) cm["budget"] = std::to_string(ef.budget);
      if (flag("--sigma")) cm["prior.sigma"] = glmev::format_double(ef.sigma);
      glmev::ExperimentConfig base;
      if (le) {
        if (flag("--q-values")) cm["q_values"] = ef.q_values;
      } else {
        base.scaling = glmev::ScalingConfig{};
        base.n_values = {100, 200, 400};
        base.replicates = 50;
        if (flag("--gamma")) cm["gamma"] = glmev::format_double(ef.gamma);
        if (flag("--kappa")) cm["scaling.kappa"] = glmev::format_double(ef.kappa);
        if (flag("--psi")) cm["scaling.psi"] = glmev::format_double(ef.psi);
        if (flag("--phi")) cm["scaling.phi"] = glmev::format_double(ef.phi);
        if (flag("--j0-size")) cm["j0_size"] = std::to_string(ef.j0_size);
        if (flag("--bayes-n-values")) cm["bayes_n_values"] = ef.bayes_n_values;
      }
      const auto cfg = glmev::apply_config(base, cm);
      if (le) {
        const auto table = glmev::run_laplace_error_experiment(cfg);
        glmev::write_text_file(cfg.out_path / "laplace_error.csv", glmev::laplace_error_csv(table.rows));
        if (!glmev::emit_figure_data(table.aggregate, cfg.out_path, ef.svg)) {
          std::cerr << "warning: empty result table; figure1.csv has only a header\n";
        }
        std::cout << glmev::figure_csv(table.aggregate);
      } else {
        if (!cfg.scaling->gamma_sufficient()) {
          std::cerr << "warning: gamma=" << cfg.gamma << " is not above the consistency threshold "
                    << cfg.scaling->gamma_threshold() << "\n";
        }
        const auto table = glmev::run_consistency_experiment(cfg);
        glmev::write_text_file(cfg.out_path / "consistency.csv", glmev::consistency_csv(table.rows));
        if (!table.bayes_rows.empty()) {
          glmev::write_text_file(cfg.out_path / "consistency_bayes.csv", glmev::consistency_csv(table.bayes_rows));
        }
        glmev::write_text_file(cfg.out_path / "recovery.csv", glmev::recovery_csv(table.aggregate));
        std::cout << glmev::recovery_csv(table.aggregate);
      }
      return kExitOk;
    }
  } catch (const glmev::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
