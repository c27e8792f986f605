#include "stosa/mars.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace stosa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Fixed internal seed so the sample-based anova fallback stays a pure function
// of the surrogate.
constexpr std::uint64_t kAnovaFallbackSeed = 0x414e4f5641ull;

int default_max_terms(int n) {
  const long cap = std::min<long>(2L * n, 21L + (n + 1) / 2);
  return static_cast<int>(cap);
}

// Per-variable state for the forward-pass knot scan. For a hinge
// u_t(x) = (x - t)+ evaluated on the data, the scan maintains, for every
// candidate knot t at once:
//   s2[t]     = ||u_t||^2                      (fixed for the whole fit)
//   sumc2[t]  = sum over current orthonormal basis q of <u_t, q>^2
//   d[t]      = <u_t, r> with r the current residual
// which is everything needed to price the reflected pair at t in O(1).
struct VariableScan {
  std::vector<int> order;    // row indices with x descending
  std::vector<double> xs;    // x values, descending
  std::vector<double> knots; // candidate knots, descending
  std::vector<double> s2;
  std::vector<double> sumc2;
  std::vector<double> d;
  std::vector<double> clin;  // scratch
  std::vector<double> cnew;  // scratch
  double col_norm2 = 0.0;    // ||x_k||^2, rank-tolerance reference
};

// out[c] = <u_t, w> for every candidate knot of v, one descending sweep.
void hinge_inner_products(const VariableScan& v, const double* w, double* out) {
  const int n = static_cast<int>(v.xs.size());
  const int K = static_cast<int>(v.knots.size());
  double sw = 0.0;
  double swx = 0.0;
  int pos = 0;
  for (int c = 0; c < K; ++c) {
    const double t = v.knots[c];
    while (pos < n && v.xs[pos] > t) {
      const double wi = w[v.order[pos]];
      sw += wi;
      swx += wi * v.xs[pos];
      ++pos;
    }
    out[c] = swx - t * sw;
  }
}

VariableScan build_scan(const Eigen::MatrixXd& x, int var,
                        const MarsConfig& cfg) {
  const int n = static_cast<int>(x.rows());
  VariableScan v;
  v.order.resize(n);
  std::iota(v.order.begin(), v.order.end(), 0);
  std::sort(v.order.begin(), v.order.end(), [&](int a, int b) {
    if (x(a, var) != x(b, var)) return x(a, var) > x(b, var);
    return a < b;
  });
  v.xs.resize(n);
  for (int i = 0; i < n; ++i) v.xs[i] = x(v.order[i], var);
  v.col_norm2 = x.col(var).squaredNorm();

  std::vector<double> uniq;
  uniq.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (i == 0 || v.xs[i] != v.xs[i - 1]) uniq.push_back(v.xs[i]);
  }
  if (n > cfg.knot_cap_threshold &&
      static_cast<int>(uniq.size()) > cfg.knot_cap) {
    // Rank-equispaced thinning keeps the knot set spread over the data.
    std::vector<double> thin;
    thin.reserve(cfg.knot_cap);
    const int u = static_cast<int>(uniq.size());
    for (int i = 0; i < cfg.knot_cap; ++i) {
      const int idx =
          static_cast<int>(std::llround(static_cast<double>(i) * (u - 1) /
                                        (cfg.knot_cap - 1)));
      if (thin.empty() || uniq[idx] != thin.back()) thin.push_back(uniq[idx]);
    }
    v.knots = std::move(thin);
  } else {
    v.knots = std::move(uniq);
  }

  const int K = static_cast<int>(v.knots.size());
  v.s2.assign(K, 0.0);
  v.sumc2.assign(K, 0.0);
  v.d.assign(K, 0.0);
  v.clin.assign(K, 0.0);
  v.cnew.assign(K, 0.0);
  double sx = 0.0, sxx = 0.0;
  int cnt = 0, pos = 0;
  for (int c = 0; c < K; ++c) {
    const double t = v.knots[c];
    while (pos < n && v.xs[pos] > t) {
      sx += v.xs[pos];
      sxx += v.xs[pos] * v.xs[pos];
      ++cnt;
      ++pos;
    }
    v.s2[c] = sxx - 2.0 * t * sx + t * t * cnt;
  }
  return v;
}

struct ForwardResult {
  std::vector<Hinge> hinges;  // accepted basis columns beyond the intercept
  double rss = 0.0;
  int basis_size = 1;
};

class ForwardPass {
 public:
  ForwardPass(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
              const MarsConfig& cfg, int max_terms)
      : x_(x), y_(y), cfg_(cfg), max_terms_(max_terms),
        n_(static_cast<int>(x.rows())), p_(static_cast<int>(x.cols())) {
    q_.resize(n_, max_terms_ + 2);
    resid_ = y_;
    zlin_ = x_;
    scans_.reserve(p_);
    for (int k = 0; k < p_; ++k) {
      scans_.push_back(build_scan(x_, k, cfg_));
      // d tracks <u_t, residual>; the residual starts at y itself.
      hinge_inner_products(scans_[k], resid_.data(), scans_[k].d.data());
    }
    // Intercept column.
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(n_);
    add_orthonormal_column(ones);
  }

  ForwardResult run() {
    const double y_scale = std::max(y_.squaredNorm(), 1e-300);
    double rss = resid_.squaredNorm();
    while (basis_size() + 2 <= max_terms_) {
      if (rss <= 1e-20 * y_scale) break;
      int best_var = -1;
      double best_knot = 0.0;
      double best_gain = 0.0;
      for (int k = 0; k < p_; ++k) {
        double gain_lin = 0.0;
        double pr_lin = 0.0;
        bool has_lin = false;
        const double zn2 = zlin_.col(k).squaredNorm();
        VariableScan& v = scans_[k];
        if (zn2 > cfg_.rank_tol * std::max(v.col_norm2, 1e-300)) {
          has_lin = true;
          qlin_ = zlin_.col(k) / std::sqrt(zn2);
          pr_lin = qlin_.dot(resid_);
          gain_lin = pr_lin * pr_lin;
          hinge_inner_products(v, qlin_.data(), v.clin.data());
        }
        const int K = static_cast<int>(v.knots.size());
        for (int c = 0; c < K; ++c) {
          double gain = gain_lin;
          const double s2 = v.s2[c];
          if (s2 > 0.0) {
            double u2 = s2 - v.sumc2[c];
            double du = v.d[c];
            if (has_lin) {
              u2 -= v.clin[c] * v.clin[c];
              du -= pr_lin * v.clin[c];
            }
            if (u2 > cfg_.rank_tol * s2) {
              gain += du * du / u2;
            }
          }
          if (gain > best_gain ||
              (gain == best_gain && best_var == k && v.knots[c] < best_knot)) {
            // strict improvement, or the lower knot on a within-variable tie
            best_gain = gain;
            best_var = k;
            best_knot = v.knots[c];
          }
        }
      }
      if (best_var < 0 || best_gain <= cfg_.forward_rel_tol * rss) break;

      int added = 0;
      for (const HingeSide side : {HingeSide::XMinusT, HingeSide::TMinusX}) {
        const Hinge h{best_var, best_knot, side};
        Eigen::VectorXd col(n_);
        for (int i = 0; i < n_; ++i) col[i] = h.value(x_(i, best_var));
        if (add_orthonormal_column(col)) {
          hinges_.push_back(h);
          ++added;
        }
      }
      if (added == 0) break;  // pair fully dependent; nothing can change
      rss = resid_.squaredNorm();
    }
    return ForwardResult{std::move(hinges_), resid_.squaredNorm(), basis_size()};
  }

 private:
  int basis_size() const { return q_count_ + 0; }

  // Modified Gram-Schmidt append with re-orthogonalization; updates the
  // residual, the per-variable linear remainders and the knot-scan state.
  // Returns false (and changes nothing) for a column dependent on the basis.
  bool add_orthonormal_column(Eigen::VectorXd col) {
    const double ref = col.squaredNorm();
    if (!(ref > 0.0)) return false;
    if (q_count_ > 0) {
      const auto qq = q_.leftCols(q_count_);
      col -= qq * (qq.transpose() * col);
      col -= qq * (qq.transpose() * col);  // re-orthogonalization pass
    }
    const double w2 = col.squaredNorm();
    if (w2 <= cfg_.rank_tol * ref) return false;
    q_.col(q_count_) = col / std::sqrt(w2);
    const auto qnew = q_.col(q_count_);
    ++q_count_;

    const double gamma = qnew.dot(resid_);
    resid_ -= gamma * qnew;
    zlin_ -= qnew * (qnew.transpose() * zlin_);
    for (int k = 0; k < p_; ++k) {
      VariableScan& v = scans_[k];
      hinge_inner_products(v, qnew.data(), v.cnew.data());
      const int K = static_cast<int>(v.knots.size());
      for (int c = 0; c < K; ++c) {
        v.sumc2[c] += v.cnew[c] * v.cnew[c];
        v.d[c] -= gamma * v.cnew[c];
      }
    }
    return true;
  }

  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& y_;
  const MarsConfig& cfg_;
  int max_terms_;
  int n_;
  int p_;
  Eigen::MatrixXd q_;
  int q_count_ = 0;
  Eigen::VectorXd resid_;
  Eigen::MatrixXd zlin_;
  Eigen::VectorXd qlin_;
  std::vector<VariableScan> scans_;
  std::vector<Hinge> hinges_;
};

double gcv_value(double rss, double enp, int n) {
  if (enp >= n) return kInf;
  const double denom = 1.0 - enp / n;
  return rss / (n * denom * denom);
}

struct PruneResult {
  std::vector<int> kept;  // indices into the forward basis, 0 = intercept
  double gcv = kInf;
};

// Backward deletion on the Gram matrix: with P = G^-1 available, removing
// column j raises the RSS by beta_j^2 / P_jj, and P and beta downdate in
// O(M^2). The best-GCV subset over the whole deletion sequence wins.
PruneResult prune_gcv(const Eigen::MatrixXd& b, const Eigen::VectorXd& y,
                      const std::vector<Hinge>& hinges, const MarsConfig& cfg) {
  const int n = static_cast<int>(b.rows());
  const int m = static_cast<int>(b.cols());
  const Eigen::MatrixXd g = b.transpose() * b;
  const Eigen::VectorXd gy = b.transpose() * y;
  const double yty = y.squaredNorm();

  Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  Eigen::MatrixXd p_inv;
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    p_inv = ldlt.solve(Eigen::MatrixXd::Identity(m, m));
  } else {
    // near-singular Gram matrix: fall back to a tiny ridge
    const double ridge = 1e-10 * g.trace() / m;
    p_inv = (g + ridge * Eigen::MatrixXd::Identity(m, m))
                .ldlt()
                .solve(Eigen::MatrixXd::Identity(m, m));
  }
  Eigen::VectorXd beta = p_inv * gy;
  double rss = std::max(0.0, yty - gy.dot(beta));

  // Logical deletion: P and beta keep full size, removed rows/columns just
  // stop being read; the rank-1 downdate stays vectorized that way.
  std::vector<std::uint8_t> alive(m, 1);
  int alive_count = m;

  // knot multiplicities among active hinge columns (column 0 is the intercept)
  std::map<std::pair<int, double>, int> knot_count;
  for (const Hinge& h : hinges) ++knot_count[{h.variable, h.knot}];

  auto enp_of = [&](int cols, int knots) {
    return cols + cfg.gcv_penalty * knots;
  };
  int knots_active = static_cast<int>(knot_count.size());

  auto alive_set = [&] {
    std::vector<int> out;
    out.reserve(alive_count);
    for (int j = 0; j < m; ++j) {
      if (alive[j]) out.push_back(j);
    }
    return out;
  };

  PruneResult best;
  best.kept = alive_set();
  best.gcv = gcv_value(rss, enp_of(m, knots_active), n);

  while (alive_count > 1) {
    int pick = -1;
    double pick_gcv = kInf;
    for (int j = 1; j < m; ++j) {  // never remove the intercept
      if (!alive[j]) continue;
      const double pjj = p_inv(j, j);
      if (pick < 0) pick = j;  // fallback when every candidate is degenerate
      if (!(pjj > 0.0)) continue;
      const double drss = beta[j] * beta[j] / pjj;
      const Hinge& h = hinges[j - 1];
      const int kdrop = knot_count[{h.variable, h.knot}] == 1 ? 1 : 0;
      const double gcv_after = gcv_value(
          rss + drss, enp_of(alive_count - 1, knots_active - kdrop), n);
      if (gcv_after < pick_gcv) {
        pick_gcv = gcv_after;
        pick = j;
      }
    }
    if (pick < 0) break;

    const double pjj = p_inv(pick, pick);
    if (pjj > 0.0) {
      rss += beta[pick] * beta[pick] / pjj;
      const Eigen::VectorXd pj = p_inv.col(pick);
      beta -= pj * (beta[pick] / pjj);
      p_inv -= (pj * pj.transpose()) / pjj;
    }
    {
      const Hinge& h = hinges[pick - 1];
      if (--knot_count[{h.variable, h.knot}] == 0) --knots_active;
    }
    alive[pick] = 0;
    --alive_count;

    const double gcv_now = gcv_value(rss, enp_of(alive_count, knots_active), n);
    if (gcv_now < best.gcv) {
      best.gcv = gcv_now;
      best.kept = alive_set();
    }
  }
  return best;
}

}  // namespace

AdditiveSurrogate::AdditiveSurrogate(
    double intercept, std::vector<std::vector<SurrogateTerm>> terms_by_variable,
    ParameterSpace space, MarsFitInfo info)
    : intercept_(intercept), terms_(std::move(terms_by_variable)),
      space_(std::move(space)), info_(info) {
  if (static_cast<int>(terms_.size()) != space_.dimension()) {
    throw std::invalid_argument("surrogate: term lists != space dimension");
  }
}

double AdditiveSurrogate::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dimension()) {
    throw std::invalid_argument("surrogate evaluate: dimension mismatch");
  }
  double acc = intercept_;
  for (int k = 0; k < dimension(); ++k) {
    for (const SurrogateTerm& t : terms_[k]) {
      acc += t.coefficient * t.hinge.value(x[k]);
    }
  }
  return acc;
}

Eigen::VectorXd AdditiveSurrogate::evaluate(const Eigen::MatrixXd& points) const {
  if (static_cast<int>(points.cols()) != dimension()) {
    throw std::invalid_argument("surrogate evaluate: dimension mismatch");
  }
  Eigen::VectorXd out(points.rows());
  std::vector<double> row(dimension());
  for (int i = 0; i < points.rows(); ++i) {
    for (int k = 0; k < dimension(); ++k) row[k] = points(i, k);
    out[i] = evaluate(row);
  }
  return out;
}

int AdditiveSurrogate::term_count() const {
  int c = 0;
  for (const auto& v : terms_) c += static_cast<int>(v.size());
  return c;
}

AdditiveSurrogate fit_mars(const Design& design,
                           std::span<const double> responses,
                           const MarsConfig& config) {
  const int n = design.rows();
  const int p = design.cols();
  if (static_cast<int>(responses.size()) != n) {
    throw std::invalid_argument("fit_mars: responses length != design rows");
  }
  if (n < 10) throw std::invalid_argument("fit_mars: needs at least 10 rows");

  const int max_terms =
      config.max_terms > 0 ? config.max_terms : default_max_terms(n);

  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = responses[i];

  ForwardPass forward(design.points, y, config, max_terms);
  ForwardResult fwd = forward.run();

  const int m = 1 + static_cast<int>(fwd.hinges.size());
  Eigen::MatrixXd b(n, m);
  b.col(0).setOnes();
  for (int j = 0; j < m - 1; ++j) {
    const Hinge& h = fwd.hinges[j];
    for (int i = 0; i < n; ++i) b(i, j + 1) = h.value(design.points(i, h.variable));
  }

  PruneResult pruned = prune_gcv(b, y, fwd.hinges, config);

  // Least-squares refit on the kept columns; column-pivoted QR drops any
  // residual dependence (dropped columns come back with coefficient zero).
  const int mk = static_cast<int>(pruned.kept.size());
  Eigen::MatrixXd bk(n, mk);
  for (int j = 0; j < mk; ++j) bk.col(j) = b.col(pruned.kept[j]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(bk);
  qr.setThreshold(config.rank_tol);
  const Eigen::VectorXd coef = qr.solve(y);
  const double rss = (y - bk * coef).squaredNorm();

  std::vector<std::vector<SurrogateTerm>> terms(p);
  for (int j = 1; j < mk; ++j) {
    if (coef[j] == 0.0) continue;
    const Hinge& h = fwd.hinges[pruned.kept[j] - 1];
    terms[h.variable].push_back(SurrogateTerm{h, coef[j]});
  }
  for (auto& list : terms) {
    std::sort(list.begin(), list.end(),
              [](const SurrogateTerm& a, const SurrogateTerm& b2) {
                if (a.hinge.knot != b2.hinge.knot) return a.hinge.knot < b2.hinge.knot;
                return a.hinge.side < b2.hinge.side;
              });
  }

  MarsFitInfo info;
  info.rss = rss;
  const double mean_y = y.mean();
  const double sst = (y.array() - mean_y).matrix().squaredNorm();
  info.r_squared = sst > 0.0 ? 1.0 - rss / sst : 1.0;
  info.forward_size = fwd.basis_size;
  info.pruned_size = mk;
  int knots = 0;
  {
    std::map<std::pair<int, double>, int> kc;
    for (int j = 1; j < mk; ++j) {
      const Hinge& h = fwd.hinges[pruned.kept[j] - 1];
      ++kc[{h.variable, h.knot}];
    }
    knots = static_cast<int>(kc.size());
  }
  info.gcv = gcv_value(rss, mk + config.gcv_penalty * knots, n);

  return AdditiveSurrogate(coef.size() > 0 ? coef[0] : 0.0, std::move(terms),
                           design.space, info);
}

namespace {

// Exact mean of a hinge against uniform(a, b).
double uniform_hinge_mean(const Hinge& h, double a, double b) {
  const double w = b - a;
  if (h.side == HingeSide::XMinusT) {
    if (h.knot <= a) return 0.5 * (a + b) - h.knot;
    if (h.knot >= b) return 0.0;
    return (b - h.knot) * (b - h.knot) / (2.0 * w);
  }
  if (h.knot >= b) return h.knot - 0.5 * (a + b);
  if (h.knot <= a) return 0.0;
  return (h.knot - a) * (h.knot - a) / (2.0 * w);
}

}  // namespace

AnovaSummary anova(const AdditiveSurrogate& s) {
  const int p = s.dimension();
  AnovaSummary out;
  out.term_means.resize(p);
  out.component_variance.assign(p, 0.0);

  for (int k = 0; k < p; ++k) {
    const auto& terms = s.terms_by_variable()[k];
    if (terms.empty()) continue;
    const Distribution& dist = s.space().coordinate(k);

    if (dist.kind() == DistKind::Uniform) {
      const double a = dist.param1();
      const double b = dist.param2();
      double comp_mean = 0.0;
      out.term_means[k].reserve(terms.size());
      for (const SurrogateTerm& t : terms) {
        const double mean = uniform_hinge_mean(t.hinge, a, b);
        out.term_means[k].push_back(mean);
        comp_mean += t.coefficient * mean;
      }
      // The component is piecewise linear with breaks at the knots; integrate
      // its centered square cell by cell (exact for a linear integrand).
      std::vector<double> breaks{a, b};
      for (const SurrogateTerm& t : terms) {
        if (t.hinge.knot > a && t.hinge.knot < b) breaks.push_back(t.hinge.knot);
      }
      std::sort(breaks.begin(), breaks.end());
      breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
      auto component = [&](double x) {
        double g = 0.0;
        for (const SurrogateTerm& t : terms) g += t.coefficient * t.hinge.value(x);
        return g - comp_mean;
      };
      double var = 0.0;
      for (std::size_t c = 0; c + 1 < breaks.size(); ++c) {
        const double x0 = breaks[c];
        const double x1 = breaks[c + 1];
        const double e0 = component(x0);
        const double e1 = component(x1);
        var += (x1 - x0) * (e0 * e0 + e0 * e1 + e1 * e1) / 3.0;
      }
      out.component_variance[k] = std::max(0.0, var / (b - a));
    } else {
      // Sample-based fallback for non-uniform coordinates.
      out.approximate = true;
      constexpr int kDraws = 100000;
      RngStream rng(kAnovaFallbackSeed, static_cast<std::uint64_t>(k));
      std::vector<double> tmean(terms.size(), 0.0);
      double gsum = 0.0, gsq = 0.0;
      for (int i = 0; i < kDraws; ++i) {
        const double x = dist.sample(rng);
        double g = 0.0;
        for (std::size_t j = 0; j < terms.size(); ++j) {
          const double phi = terms[j].hinge.value(x);
          tmean[j] += phi;
          g += terms[j].coefficient * phi;
        }
        gsum += g;
        gsq += g * g;
      }
      for (std::size_t j = 0; j < terms.size(); ++j) {
        out.term_means[k].push_back(tmean[j] / kDraws);
      }
      const double mean = gsum / kDraws;
      out.component_variance[k] =
          std::max(0.0, (gsq / kDraws - mean * mean) * kDraws / (kDraws - 1.0));
    }
  }

  double total = 0.0;
  for (double v : out.component_variance) total += v;
  out.total_variance = total;
  if (total > 0.0) {
    out.indices.values.resize(p);
    out.indices.defined = true;
    for (int k = 0; k < p; ++k) {
      out.indices.values[k] = out.component_variance[k] / total;
    }
  } else {
    out.indices = IndexVector::undefined(p);
  }
  return out;
}

}  // namespace stosa
