/*
 * Copyright 2026 The gaugeblend Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Additive MARS and its poly-MARS variant.
//
// Forward pass: greedy addition of hinge terms on standardized predictors.
// The current basis is kept as an orthonormal set Q (Gram-Schmidt), so the
// RSS reduction of every knot candidate on a feature is evaluated in O(|Q|)
// from suffix sums over the feature's sorted values. A reflected pair
// {max(0, x - t), max(0, t - x)} spans the same space as {max(0, x - t), x}
// once the intercept is present, which is how pairs are scored.
//
// Backward pass: repeatedly drop the term whose removal raises RSS least,
// then keep the subset with the lowest GCV.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "fitters.hpp"
#include "gaugeblend/error.hpp"

namespace gaugeblend {

double BasisFunction::eval(std::span<const double> z) const {
  switch (kind) {
    case Kind::Intercept: return 1.0;
    case Kind::Linear: return z[static_cast<std::size_t>(feature)];
    case Kind::HingeUp: return std::max(0.0, z[static_cast<std::size_t>(feature)] - knot);
    case Kind::HingeDown: return std::max(0.0, knot - z[static_cast<std::size_t>(feature)]);
  }
  return 0.0;
}

namespace internal {
namespace {

using Column = std::vector<double>;

// Relative tolerance below which an orthogonalized column counts as
// linearly dependent on the current basis.
constexpr double kDependence = 1e-10;

double dot(const Column& a, const Column& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Orthogonalizes `v` against `basis` (two Gram-Schmidt passes).
void orthogonalize(const std::vector<Column>& basis, Column& v) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) {
      const double c = dot(q, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
    }
  }
}

class ForwardState {
 public:
  explicit ForwardState(std::span<const double> y)
      : n_(y.size()), residual_(y.begin(), y.end()) {}

  std::size_t size() const { return q_.size(); }
  const Column& residual() const { return residual_; }
  const std::vector<Column>& basis() const { return q_; }

  // Adds `raw` if it is not dependent on the basis; returns whether added.
  bool add(Column raw) {
    const double norm2 = dot(raw, raw);
    if (norm2 <= 0.0) return false;
    orthogonalize(q_, raw);
    const double rest = dot(raw, raw);
    if (rest <= kDependence * norm2) return false;
    const double inv = 1.0 / std::sqrt(rest);
    for (double& v : raw) v *= inv;
    const double c = dot(raw, residual_);
    for (std::size_t i = 0; i < n_; ++i) residual_[i] -= c * raw[i];
    q_.push_back(std::move(raw));
    return true;
  }

 private:
  std::size_t n_;
  Column residual_;
  std::vector<Column> q_;
};

Column eval_column(const BasisFunction& b, const std::vector<Column>& z, std::size_t n) {
  Column out(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (b.kind) {
      case BasisFunction::Kind::Intercept: out[i] = 1.0; break;
      case BasisFunction::Kind::Linear: out[i] = z[b.feature][i]; break;
      case BasisFunction::Kind::HingeUp: out[i] = std::max(0.0, z[b.feature][i] - b.knot); break;
      case BasisFunction::Kind::HingeDown:
        out[i] = std::max(0.0, b.knot - z[b.feature][i]);
        break;
    }
  }
  return out;
}

struct Choice {
  double reduction = 0.0;
  int feature = -1;
  bool linear = false;  // poly-MARS linear entry
  double knot = 0.0;
};

double gcv(double rss, std::size_t n, std::size_t terms, double penalty) {
  const double c = static_cast<double>(terms) + penalty * static_cast<double>(terms - 1) / 2.0;
  const double nn = static_cast<double>(n);
  if (c >= nn) return std::numeric_limits<double>::infinity();
  const double d = 1.0 - c / nn;
  return rss / (nn * d * d);
}

// Least squares of y on the selected columns of B. Returns RSS.
double solve_subset(const Eigen::MatrixXd& basis, const Eigen::VectorXd& y,
                    const std::vector<std::size_t>& active, Eigen::VectorXd* beta,
                    Eigen::MatrixXd* r_inverse) {
  Eigen::MatrixXd sub(basis.rows(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) {
    sub.col(static_cast<Eigen::Index>(k)) = basis.col(static_cast<Eigen::Index>(active[k]));
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(sub);
  const Eigen::Index k = sub.cols();
  const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::VectorXd qty = (qr.householderQ().transpose() * y).head(k);
  Eigen::VectorXd b = r.triangularView<Eigen::Upper>().solve(qty);
  const double rss = (y - sub * b).squaredNorm();
  if (r_inverse) {
    *r_inverse = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  }
  if (beta) *beta = std::move(b);
  return rss;
}

}  // namespace

void column_standardization(const Matrix& x, std::vector<double>& center,
                            std::vector<double>& scale) {
  const std::size_t n = x.rows(), p = x.cols();
  center.assign(p, 0.0);
  scale.assign(p, 1.0);
  for (std::size_t j = 0; j < p; ++j) {
    const auto col = x.column(j);
    const double mean = stable_mean(col);
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    center[j] = mean;
    scale[j] = sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
  }
}

MarsModel fit_mars(const Matrix& x, std::span<const double> y, const MarsParams& params,
                   bool poly, FitMetadata& meta) {
  const std::size_t n = x.rows(), p = x.cols();
  MarsModel model;
  model.poly = poly;
  column_standardization(x, model.center, model.scale);

  std::vector<Column> z(p, Column(n));
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) z[j][i] = (x(i, j) - model.center[j]) / model.scale[j];
  }
  const std::size_t max_terms =
      params.max_terms > 0 ? params.max_terms : std::max<std::size_t>(21, 2 * p + 1);

  // Rows of each feature in ascending order, and its knot candidates:
  // distinct values except the largest, thinned to at most max_knots.
  std::vector<std::vector<std::size_t>> order(p);
  std::vector<std::vector<double>> knots(p);
  for (std::size_t j = 0; j < p; ++j) {
    order[j].resize(n);
    std::iota(order[j].begin(), order[j].end(), std::size_t{0});
    std::stable_sort(order[j].begin(), order[j].end(),
                     [&](std::size_t a, std::size_t b) { return z[j][a] < z[j][b]; });
    std::vector<double> distinct;
    for (auto i : order[j]) {
      if (distinct.empty() || z[j][i] != distinct.back()) distinct.push_back(z[j][i]);
    }
    if (!distinct.empty()) distinct.pop_back();
    if (distinct.size() > params.max_knots && params.max_knots > 0) {
      std::vector<double> thinned;
      const double step = static_cast<double>(distinct.size() - 1) /
                          static_cast<double>(std::max<std::size_t>(1, params.max_knots - 1));
      for (std::size_t k = 0; k < params.max_knots; ++k) {
        const auto at = static_cast<std::size_t>(std::llround(step * static_cast<double>(k)));
        if (thinned.empty() || distinct[at] != thinned.back()) thinned.push_back(distinct[at]);
      }
      distinct = std::move(thinned);
    }
    knots[j] = std::move(distinct);
  }

  ForwardState state(y);
  std::vector<BasisFunction> terms;
  std::vector<Column> columns;
  terms.push_back({BasisFunction::Kind::Intercept, -1, 0.0});
  columns.emplace_back(n, 1.0);
  state.add(columns.back());

  const double tss = dot(state.residual(), state.residual());
  double y2 = 0.0;
  for (double v : y) y2 += v * v;
  const bool constant = !(tss > 1e-28 * std::max(y2, 1e-300));
  meta.degenerate_target = constant;

  std::vector<bool> has_linear(p, false);
  std::vector<double> s0q, s1q;
  Column xt;

  while (!constant) {
    const std::size_t room = max_terms - terms.size();
    if (room == 0 || (!poly && room < 2)) break;
    const Column& r = state.residual();
    const double rss = dot(r, r);
    if (rss <= 1e-3 * tss) break;  // R^2 >= 0.999

    Choice best;
    const std::size_t m = state.size();
    for (std::size_t j = 0; j < p; ++j) {
      if (knots[j].empty()) continue;  // constant predictor
      const Column& xj = z[j];

      // Orthogonalized linear direction for feature j.
      xt = xj;
      orthogonalize(state.basis(), xt);
      const double xx = dot(xt, xt);
      const bool x_dep = xx <= kDependence * dot(xj, xj);
      const double rx = dot(r, xj);

      if (poly && !has_linear[j]) {
        if (!x_dep && rx * rx / xx > best.reduction) best = {rx * rx / xx, static_cast<int>(j), true};
        continue;
      }

      // Sweep knots from the top, accumulating rows with z > t.
      s0q.assign(m, 0.0);
      s1q.assign(m, 0.0);
      double c0 = 0.0, c1 = 0.0, c2 = 0.0, sr0 = 0.0, sr1 = 0.0, sx0 = 0.0, sx1 = 0.0;
      std::size_t top = n;  // order[j][top..n) already accumulated
      for (std::size_t k = knots[j].size(); k-- > 0;) {
        const double t = knots[j][k];
        while (top > 0 && xj[order[j][top - 1]] > t) {
          const std::size_t i = order[j][--top];
          const double v = xj[i];
          for (std::size_t b = 0; b < m; ++b) {
            s0q[b] += state.basis()[b][i];
            s1q[b] += state.basis()[b][i] * v;
          }
          c0 += 1.0;
          c1 += v;
          c2 += v * v;
          sr0 += r[i];
          sr1 += r[i] * v;
          sx0 += xt[i];
          sx1 += xt[i] * v;
        }
        const double hh = c2 - 2.0 * t * c1 + t * t * c0;
        if (!(hh > 0.0)) continue;
        double proj = 0.0;
        for (std::size_t b = 0; b < m; ++b) {
          const double c = s1q[b] - t * s0q[b];
          proj += c * c;
        }
        const double ht = hh - proj;
        const bool h_dep = ht <= kDependence * hh;
        const double rh = sr1 - t * sr0;
        double reduction = 0.0;
        if (poly || x_dep) {
          reduction = h_dep ? 0.0 : rh * rh / ht;
        } else if (h_dep) {
          reduction = rx * rx / xx;
        } else {
          const double xh = sx1 - t * sx0;
          const double det = xx * ht - xh * xh;
          if (det <= kDependence * xx * ht) {
            reduction = std::max(rx * rx / xx, rh * rh / ht);
          } else {
            reduction = (ht * rx * rx - 2.0 * xh * rx * rh + xx * rh * rh) / det;
          }
        }
        if (reduction > best.reduction) best = {reduction, static_cast<int>(j), false, t};
      }
    }

    if (best.feature < 0 || best.reduction < params.min_rsq_gain * tss) break;

    std::vector<BasisFunction> candidates;
    if (best.linear) {
      candidates.push_back({BasisFunction::Kind::Linear, best.feature, 0.0});
    } else {
      candidates.push_back({BasisFunction::Kind::HingeUp, best.feature, best.knot});
      if (!poly) candidates.push_back({BasisFunction::Kind::HingeDown, best.feature, best.knot});
    }
    bool added = false;
    for (const auto& c : candidates) {
      Column col = eval_column(c, z, n);
      if (state.add(col)) {
        terms.push_back(c);
        columns.push_back(std::move(col));
        added = true;
      }
    }
    if (best.linear) has_linear[static_cast<std::size_t>(best.feature)] = true;
    if (!added) break;
  }

  // Backward pass.
  const std::size_t total = terms.size();
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(total));
  for (std::size_t k = 0; k < total; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = columns[k][i];
    }
  }
  Eigen::VectorXd target(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) target(static_cast<Eigen::Index>(i)) = y[i];

  std::vector<std::size_t> active(total);
  std::iota(active.begin(), active.end(), std::size_t{0});
  std::vector<std::size_t> best_active = active;
  double best_gcv = std::numeric_limits<double>::infinity();

  std::vector<std::pair<std::vector<std::size_t>, double>> path;
  {
    Eigen::VectorXd beta;
    Eigen::MatrixXd rinv;
    double rss = solve_subset(basis, target, active, &beta, &rinv);
    model.gcv_forward = gcv(rss, n, active.size(), params.penalty);
    path.emplace_back(active, model.gcv_forward);
    while (active.size() > 1) {
      // Raising RSS by removing term k costs beta_k^2 / [(B'B)^-1]_kk.
      double cheapest = std::numeric_limits<double>::infinity();
      std::size_t drop = 0;
      for (std::size_t k = 1; k < active.size(); ++k) {
        const BasisFunction& term = terms[active[k]];
        if (poly && term.kind == BasisFunction::Kind::Linear) {
          const bool has_hinge = std::any_of(active.begin(), active.end(), [&](std::size_t a) {
            return terms[a].feature == term.feature && terms[a].kind != BasisFunction::Kind::Linear;
          });
          if (has_hinge) continue;
        }
        const double diag = rinv.row(static_cast<Eigen::Index>(k)).squaredNorm();
        const double bk = beta(static_cast<Eigen::Index>(k));
        const double cost = bk * bk / diag;
        if (cost < cheapest) {
          cheapest = cost;
          drop = k;
        }
      }
      if (drop == 0) break;
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(drop));
      rss = solve_subset(basis, target, active, &beta, &rinv);
      path.emplace_back(active, gcv(rss, n, active.size(), params.penalty));
    }
  }
  // Smallest model wins ties.
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    if (it->second < best_gcv) {
      best_gcv = it->second;
      best_active = it->first;
    }
  }

  Eigen::VectorXd beta;
  solve_subset(basis, target, best_active, &beta, nullptr);
  model.gcv = best_gcv;
  model.forward_terms = total;
  for (std::size_t k = 0; k < best_active.size(); ++k) {
    model.terms.push_back(terms[best_active[k]]);
    model.coefficients.push_back(beta(static_cast<Eigen::Index>(k)));
  }
  if (constant) model.coefficients[0] = stable_mean(y);
  return model;
}

double predict_mars(const MarsModel& m, std::span<const double> row) {
  thread_local std::vector<double> z;
  z.resize(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) z[j] = (row[j] - m.center[j]) / m.scale[j];
  double out = 0.0;
  for (std::size_t k = 0; k < m.terms.size(); ++k) out += m.coefficients[k] * m.terms[k].eval(z);
  return out;
}

}  // namespace internal
}  // namespace gaugeblend
