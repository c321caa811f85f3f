// Copyright 2026 The btcurate Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Full-covariance Gaussian mixtures in one or two dimensions, fitted by EM
// with k-means++ seeding.

#ifndef BTCURATE_GMM_HPP_
#define BTCURATE_GMM_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "btcurate/common.hpp"
#include "btcurate/state_space.hpp"

namespace btcurate {

struct GaussianMixture {
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covariances;

  std::size_t n_components() const { return weights.size(); }
  std::size_t dim() const { return means.empty() ? 0 : static_cast<std::size_t>(means[0].size()); }
};

struct EMConfig {
  std::size_t n_components = 5;
  std::size_t max_iters = 200;
  double tol = 1e-6;  // relative log-likelihood change
  double cov_floor = 1e-6;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (n_components < 1) throw PreconditionError("EMConfig: n_components must be >= 1");
    if (!(tol > 0.0)) throw PreconditionError("EMConfig: tol must be positive");
    if (!(cov_floor > 0.0)) throw PreconditionError("EMConfig: cov_floor must be positive");
  }
};

struct EMResult {
  GaussianMixture model;
  std::vector<double> log_likelihood_trace;  // after initialisation, then per iteration
  std::size_t iterations = 0;
  bool converged = false;
};

namespace detail {

inline Eigen::VectorXd to_vector(const StatePoint& p) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(p.dim()));
  for (std::size_t i = 0; i < p.dim(); ++i) v[static_cast<Eigen::Index>(i)] = p[i];
  return v;
}

// Cached Cholesky factor and log-normaliser of one component.
struct ComponentDensity {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double log_norm = 0.0;  // -0.5 * (d log 2 pi + log det Sigma)

  explicit ComponentDensity(const Eigen::MatrixXd& cov) : llt(cov) {
    if (llt.info() != Eigen::Success) throw Error("gmm: covariance is not positive definite");
    const auto d = static_cast<double>(cov.rows());
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    log_norm = -0.5 * (d * std::log(2.0 * std::numbers::pi) + log_det);
  }

  double log_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean) const {
    const Eigen::VectorXd z = llt.matrixL().solve(x - mean);
    return log_norm - 0.5 * z.squaredNorm();
  }
};

// log sum_k w_k N(x; mu_k, Sigma_k) for every point, and optionally the
// per-point responsibilities (row-major n x K).
inline double e_step(const GaussianMixture& m, const std::vector<Eigen::VectorXd>& xs,
                     std::vector<double>* resp) {
  const std::size_t k = m.n_components();
  std::vector<ComponentDensity> dens;
  dens.reserve(k);
  for (const auto& c : m.covariances) dens.emplace_back(c);
  std::vector<double> lp(k);
  double total = 0.0;
  if (resp) resp->assign(xs.size() * k, 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      lp[c] = m.weights[c] > 0.0 ? std::log(m.weights[c]) + dens[c].log_pdf(xs[i], m.means[c])
                                 : -std::numeric_limits<double>::infinity();
      best = std::max(best, lp[c]);
    }
    double s = 0.0;
    for (std::size_t c = 0; c < k; ++c) s += std::exp(lp[c] - best);
    const double lse = best + std::log(s);
    total += lse;
    if (resp) {
      for (std::size_t c = 0; c < k; ++c) (*resp)[i * k + c] = std::exp(lp[c] - lse);
    }
  }
  return total;
}

// k-means++ seeding: first centre uniform, then proportional to squared
// distance to the nearest chosen centre.
inline std::vector<Eigen::VectorXd> kmeans_pp(const std::vector<Eigen::VectorXd>& xs,
                                              std::size_t k, Rng& rng) {
  std::vector<Eigen::VectorXd> centres;
  std::uniform_int_distribution<std::size_t> first(0, xs.size() - 1);
  centres.push_back(xs[first(rng)]);
  std::vector<double> d2(xs.size(), std::numeric_limits<double>::infinity());
  while (centres.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      d2[i] = std::min(d2[i], (xs[i] - centres.back()).squaredNorm());
      total += d2[i];
    }
    if (!(total > 0.0)) {
      centres.push_back(xs[first(rng)]);
      continue;
    }
    std::discrete_distribution<std::size_t> pick(d2.begin(), d2.end());
    centres.push_back(xs[pick(rng)]);
  }
  return centres;
}

}  // namespace detail

inline double log_likelihood(const GaussianMixture& model, std::span<const StatePoint> points) {
  if (points.empty()) throw PreconditionError("log_likelihood: empty point set");
  std::vector<Eigen::VectorXd> xs;
  xs.reserve(points.size());
  for (const auto& p : points) xs.push_back(detail::to_vector(p));
  return detail::e_step(model, xs, nullptr);
}

/// EM fit with the likelihood trace. The covariance floor is added to every
/// component's diagonal in every M-step.
inline EMResult fit_traced(std::span<const StatePoint> points, const EMConfig& cfg) {
  cfg.validate();
  if (points.empty()) throw PreconditionError("gmm fit: empty input");
  const std::size_t dim = points[0].dim();
  if (dim < 1 || dim > 2) throw PreconditionError("gmm fit: dimension must be 1 or 2");
  std::vector<Eigen::VectorXd> xs;
  xs.reserve(points.size());
  for (const auto& p : points) {
    if (p.dim() != dim) throw PreconditionError("gmm fit: mixed dimensions");
    if (!p.finite()) throw PreconditionError("gmm fit: non-finite point");
    xs.push_back(detail::to_vector(p));
  }
  const std::size_t n = xs.size();
  const std::size_t k = cfg.n_components;
  const auto d = static_cast<Eigen::Index>(dim);
  const Eigen::MatrixXd floor = cfg.cov_floor * Eigen::MatrixXd::Identity(d, d);

  Rng rng(cfg.rng_seed);
  const auto centres = detail::kmeans_pp(xs, k, rng);

  // Initial responsibilities: hard assignment to the nearest centre.
  std::vector<double> resp(n * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      const double dd = (xs[i] - centres[c]).squaredNorm();
      if (dd < bd) {
        bd = dd;
        best = c;
      }
    }
    resp[i * k + best] = 1.0;
  }

  GaussianMixture m;
  m.weights.assign(k, 1.0 / static_cast<double>(k));
  m.means = centres;
  m.covariances.assign(k, floor);

  const auto m_step = [&] {
    for (std::size_t c = 0; c < k; ++c) {
      double nk = 0.0;
      Eigen::VectorXd mu = Eigen::VectorXd::Zero(d);
      for (std::size_t i = 0; i < n; ++i) {
        nk += resp[i * k + c];
        mu += resp[i * k + c] * xs[i];
      }
      m.weights[c] = nk / static_cast<double>(n);
      if (!(nk > 0.0)) {
        // empty component keeps its mean; weight 0 removes it from the mixture
        m.covariances[c] = floor;
        continue;
      }
      mu /= nk;
      Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
      for (std::size_t i = 0; i < n; ++i) {
        const Eigen::VectorXd diff = xs[i] - mu;
        cov += resp[i * k + c] * diff * diff.transpose();
      }
      cov /= nk;
      cov = 0.5 * (cov + cov.transpose()) + floor;
      m.means[c] = mu;
      m.covariances[c] = cov;
    }
  };

  m_step();
  EMResult out;
  double ll = detail::e_step(m, xs, &resp);
  out.log_likelihood_trace.push_back(ll);
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    m_step();
    const double next = detail::e_step(m, xs, &resp);
    out.log_likelihood_trace.push_back(next);
    out.iterations = it + 1;
    const double change = std::abs(next - ll) / std::max(1.0, std::abs(ll));
    ll = next;
    if (change < cfg.tol) {
      out.converged = true;
      break;
    }
  }
  out.model = std::move(m);
  return out;
}

inline GaussianMixture fit(std::span<const StatePoint> points, const EMConfig& cfg) {
  return fit_traced(points, cfg).model;
}

/// Component by weight, then mean + L z with z ~ N(0, I).
inline std::vector<StatePoint> sample(const GaussianMixture& model, std::size_t n, Rng& rng) {
  if (n < 1) throw PreconditionError("gmm sample: n must be >= 1");
  if (model.n_components() == 0) throw PreconditionError("gmm sample: empty mixture");
  std::vector<Eigen::MatrixXd> chol;
  chol.reserve(model.n_components());
  for (const auto& c : model.covariances) {
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() != Eigen::Success) throw Error("gmm sample: covariance is not positive definite");
    chol.push_back(llt.matrixL());
  }
  std::discrete_distribution<std::size_t> component(model.weights.begin(), model.weights.end());
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = static_cast<Eigen::Index>(model.dim());
  std::vector<StatePoint> out;
  out.reserve(n);
  Eigen::VectorXd z(d);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t c = component(rng);
    for (Eigen::Index j = 0; j < d; ++j) z[j] = normal(rng);
    const Eigen::VectorXd x = model.means[c] + chol[c] * z;
    out.emplace_back(std::vector<double>(x.data(), x.data() + x.size()));
  }
  return out;
}

inline std::vector<StatePoint> sample(const GaussianMixture& model, std::size_t n,
                                      std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  return sample(model, n, rng);
}

/// Index of the most responsible component for each point.
inline std::vector<std::size_t> assign(const GaussianMixture& model,
                                       std::span<const StatePoint> points) {
  std::vector<Eigen::VectorXd> xs;
  for (const auto& p : points) xs.push_back(detail::to_vector(p));
  std::vector<double> resp;
  detail::e_step(model, xs, &resp);
  const std::size_t k = model.n_components();
  std::vector<std::size_t> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto* row = resp.data() + i * k;
    out[i] = static_cast<std::size_t>(std::max_element(row, row + k) - row);
  }
  return out;
}

}  // namespace btcurate

#endif  // BTCURATE_GMM_HPP_
