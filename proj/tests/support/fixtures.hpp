#pragma once

// Shared test data builders.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "glmev/glm.hpp"
#include "glmev/rng.hpp"
#include "glmev/simgen.hpp"

namespace fixtures {

inline Eigen::MatrixXd gaussian_matrix(int rows, int cols, std::uint64_t seed, double scale = 1.0) {
  glmev::NormalStream ns(seed);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * ns.next();
  return m;
}

inline Eigen::VectorXd gaussian_vector(int size, std::uint64_t seed, double scale = 1.0) {
  return gaussian_matrix(size, 1, seed, scale).col(0);
}

// Simulated data set with the first `q_true` coefficients at `amplitude`.
inline glmev::Dataset sim(int n, int p, int q_true, double amplitude, std::uint64_t seed,
                          glmev::FamilyKind family = glmev::FamilyKind::kLogistic) {
  glmev::SimConfig cfg;
  cfg.n = n;
  cfg.p = p;
  cfg.q_true = q_true;
  cfg.amplitude = amplitude;
  cfg.family = family;
  cfg.seed = seed;
  return glmev::simulate(cfg);
}

// Random model with the given size among 1..p.
inline glmev::ModelIndex random_model(int p, int size, glmev::Xoshiro256& gen) {
  std::vector<int> pool(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) pool[static_cast<std::size_t>(j)] = j + 1;
  for (int a = 0; a < size; ++a) {
    const int r = a + static_cast<int>(gen() % static_cast<std::uint64_t>(p - a));
    std::swap(pool[static_cast<std::size_t>(a)], pool[static_cast<std::size_t>(r)]);
  }
  std::vector<int> idx(pool.begin(), pool.begin() + size);
  std::sort(idx.begin(), idx.end());
  return glmev::ModelIndex(std::move(idx));
}

inline double rel_err(double a, double b) {
  const double d = std::abs(a - b);
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? d : d / s;
}

}  // namespace fixtures
