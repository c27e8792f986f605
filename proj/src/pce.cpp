#include "stosa/pce.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stosa {

namespace {

void gen_indices(int pos, int p, int remaining, std::vector<int>& cur,
                 std::vector<std::vector<int>>& out) {
  if (pos == p - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    gen_indices(pos + 1, p, remaining - v, cur, out);
  }
}

}  // namespace

PcBasis make_pc_basis(int dimension, int total_order) {
  if (dimension < 1) throw std::invalid_argument("pc basis: dimension < 1");
  if (total_order < 0) throw std::invalid_argument("pc basis: order < 0");
  PcBasis basis;
  basis.dimension = dimension;
  basis.total_order = total_order;
  std::vector<int> cur(dimension, 0);
  for (int degree = 0; degree <= total_order; ++degree) {
    gen_indices(0, dimension, degree, cur, basis.multi_indices);
  }
  return basis;
}

void pc_basis_row(const PcBasis& basis, const ParameterSpace& space,
                  std::span<const double> x, std::span<double> out) {
  const int p = basis.dimension;
  const int r = basis.total_order;
  if (static_cast<int>(x.size()) != p || space.dimension() != p) {
    throw std::invalid_argument("pc basis row: dimension mismatch");
  }
  // legs(j, d): orthonormal Legendre of degree d at the mapped coordinate j.
  Eigen::MatrixXd legs(p, r + 1);
  for (int j = 0; j < p; ++j) {
    const Distribution& dist = space.coordinate(j);
    if (dist.kind() != DistKind::Uniform) {
      throw std::invalid_argument("pc basis: non-uniform coordinate");
    }
    const double a = dist.param1();
    const double b = dist.param2();
    const double xi = 2.0 * (x[j] - a) / (b - a) - 1.0;
    double pm1 = 0.0, pcur = 1.0;
    for (int d = 0; d <= r; ++d) {
      legs(j, d) = std::sqrt(2.0 * d + 1.0) * pcur;
      const double pnext = d == 0 ? xi
                                  : ((2.0 * d + 1.0) * xi * pcur - d * pm1) /
                                        (d + 1.0);
      pm1 = pcur;
      pcur = pnext;
    }
  }
  for (int k = 0; k < basis.size(); ++k) {
    double v = 1.0;
    for (int j = 0; j < p; ++j) {
      const int d = basis.multi_indices[k][j];
      if (d > 0) v *= legs(j, d);
    }
    out[k] = v;
  }
}

PcSurrogate::PcSurrogate(PcBasis basis, Eigen::VectorXd coefficients,
                         ParameterSpace space)
    : basis_(std::move(basis)), coef_(std::move(coefficients)),
      space_(std::move(space)) {
  if (coef_.size() != basis_.size()) {
    throw std::invalid_argument("pc surrogate: coefficient count != basis");
  }
}

double PcSurrogate::evaluate(std::span<const double> x) const {
  std::vector<double> row(basis_.size());
  pc_basis_row(basis_, space_, x, row);
  double acc = 0.0;
  for (int k = 0; k < basis_.size(); ++k) acc += coef_[k] * row[k];
  return acc;
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
  if (radius < 0.0) throw std::invalid_argument("l1 projection: radius < 0");
  const double norm1 = v.lpNorm<1>();
  if (norm1 <= radius) return v;
  const int n = static_cast<int>(v.size());
  std::vector<double> mag(n);
  for (int i = 0; i < n; ++i) mag[i] = std::abs(v[i]);
  std::sort(mag.begin(), mag.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (int i = 0; i < n; ++i) {
    cum += mag[i];
    const double cand = (cum - radius) / (i + 1);
    if (cand >= mag[i]) break;
    theta = cand;
  }
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    const double shrunk = std::max(0.0, std::abs(v[i]) - theta);
    out[i] = v[i] >= 0.0 ? shrunk : -shrunk;
  }
  return out;
}

PcSurrogate fit_pc(const Design& design, std::span<const double> responses,
                   const PcConfig& config) {
  const int n = design.rows();
  const int p = design.cols();
  if (n < 2) throw std::invalid_argument("fit_pc: needs at least 2 rows");
  if (static_cast<int>(responses.size()) != n) {
    throw std::invalid_argument("fit_pc: responses length != design rows");
  }
  if (config.order < 1) throw std::invalid_argument("fit_pc: order must be >= 1");
  if (!(config.tau > 0.0)) throw std::invalid_argument("fit_pc: tau must be > 0");
  if (!design.space.all_uniform()) {
    throw std::invalid_argument("fit_pc: unsupported non-uniform coordinates");
  }

  PcBasis basis = make_pc_basis(p, config.order);
  const int npc = basis.size();
  Eigen::MatrixXd lambda(n, npc);
  {
    std::vector<double> row(npc), pt(p);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) pt[j] = design.points(i, j);
      pc_basis_row(basis, design.space, pt, row);
      for (int k = 0; k < npc; ++k) lambda(i, k) = row[k];
    }
  }
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = responses[i];

  const double radius = config.tau * npc;

  // Spectral projected gradient with a Barzilai-Borwein step and a
  // nonmonotone (10-step memory) acceptance rule.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(npc);
  Eigen::VectorXd resid = lambda * c - d;
  double obj = resid.squaredNorm();
  Eigen::VectorXd grad = 2.0 * (lambda.transpose() * resid);

  // crude spectral-norm estimate for the initial step
  double lest = lambda.squaredNorm();  // Frobenius upper bound on sigma_max^2
  double step = lest > 0.0 ? 1.0 / (2.0 * lest) : 1.0;

  std::vector<double> recent{obj};
  constexpr int kMemory = 10;
  constexpr double kSufficient = 1e-4;

  for (int it = 0; it < config.max_iterations; ++it) {
    double alpha = step;
    Eigen::VectorXd trial, dvec;
    double trial_obj = obj;
    const double fmax = *std::max_element(recent.begin(), recent.end());
    for (int ls = 0; ls < 50; ++ls) {
      trial = project_l1_ball(c - alpha * grad, radius);
      dvec = trial - c;
      trial_obj = (lambda * trial - d).squaredNorm();
      if (trial_obj <= fmax + kSufficient * grad.dot(dvec)) break;
      alpha *= 0.5;
    }
    const Eigen::VectorXd gnew = 2.0 * (lambda.transpose() * (lambda * trial - d));
    const Eigen::VectorXd ydiff = gnew - grad;
    const double sty = dvec.dot(ydiff);
    const double sts = dvec.squaredNorm();
    step = (sty > 1e-30) ? std::clamp(sts / sty, 1e-12, 1e12) : step * 2.0;

    const double rel_change = std::abs(obj - trial_obj) / std::max(1.0, obj);
    c = trial;
    grad = gnew;
    obj = trial_obj;
    recent.push_back(obj);
    if (static_cast<int>(recent.size()) > kMemory) recent.erase(recent.begin());
    if (sts == 0.0 || rel_change < config.rel_obj_tol) break;
  }

  return PcSurrogate(std::move(basis), std::move(c), design.space);
}

AnovaSummary pc_sobol(const PcSurrogate& surrogate) {
  const PcBasis& basis = surrogate.basis();
  const Eigen::VectorXd& c = surrogate.coefficients();
  const int p = basis.dimension;
  AnovaSummary out;
  out.term_means.resize(p);
  out.component_variance.assign(p, 0.0);
  double total = 0.0;
  for (int k = 1; k < basis.size(); ++k) {
    const auto& alpha = basis.multi_indices[k];
    total += c[k] * c[k];
    int active = -1;
    bool pure = true;
    for (int j = 0; j < p; ++j) {
      if (alpha[j] > 0) {
        if (active >= 0) {
          pure = false;
          break;
        }
        active = j;
      }
    }
    if (pure && active >= 0) out.component_variance[active] += c[k] * c[k];
  }
  out.total_variance = total;
  if (total > 0.0) {
    out.indices.values.resize(p);
    out.indices.defined = true;
    for (int j = 0; j < p; ++j) {
      out.indices.values[j] = out.component_variance[j] / total;
    }
  } else {
    out.indices = IndexVector::undefined(p);
  }
  return out;
}

}  // namespace stosa
