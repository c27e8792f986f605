#include "stosa/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "stosa/design.hpp"
#include "stosa/task_pool.hpp"

namespace stosa {

namespace {
constexpr std::uint64_t kOmegaTag = 0x4f4d454741ull;
constexpr std::uint64_t kDesignTag = 0x44455349ull;
constexpr std::uint64_t kStudyTag = 0x5354554459ull;
}  // namespace

std::string to_string(SurrogateKind kind) {
  return kind == SurrogateKind::Mars ? "mars" : "pce";
}

SurrogateKind surrogate_kind_from_string(const std::string& name) {
  if (name == "mars") return SurrogateKind::Mars;
  if (name == "pce") return SurrogateKind::Pce;
  throw std::invalid_argument("unknown surrogate kind: " + name);
}

namespace {

IndexVector fit_and_extract(const Design& design,
                            std::span<const double> responses,
                            const Experiment& exp) {
  if (exp.surrogate == SurrogateKind::Mars) {
    const AdditiveSurrogate s = fit_mars(design, responses, exp.mars);
    return anova(s).indices;
  }
  const PcSurrogate s = fit_pc(design, responses, exp.pce);
  return pc_sobol(s).indices;
}

void validate_experiment(const Experiment& exp) {
  if (exp.n < 10) throw std::invalid_argument("experiment: n must be >= 10");
  if (exp.m < 1) throw std::invalid_argument("experiment: m must be >= 1");
}

}  // namespace

Algorithm2Result run_algorithm2(const Experiment& exp,
                                const StochasticModel& model) {
  validate_experiment(exp);
  const int p = model.dimension();
  const int m = exp.m;
  const int n = exp.n;

  Algorithm2Result out;
  out.sample.values.setZero(m, p);
  out.sample.row_defined.assign(m, 0);
  out.sample.omega_seeds.resize(m);
  out.sample.model_id = model.id();
  out.sample.surrogate_n = n;
  out.sample.surrogate_kind = to_string(exp.surrogate);
  out.sample.root_seed = exp.seed;

  std::atomic<std::uint64_t> evals{0};

  parallel_for(m, exp.workers, [&](int i) {
    const std::uint64_t omega_seed = derive_seed(exp.seed, kOmegaTag, i);
    out.sample.omega_seeds[i] = omega_seed;

    RngStream design_rng(exp.seed, derive_seed(kDesignTag, i));
    const Design design = lhs(model.space(), n, design_rng);

    std::vector<double> responses(n), point(p);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < p; ++k) point[k] = design.points(j, k);
      responses[j] = model.evaluate(point, omega_seed);
    }
    evals.fetch_add(n, std::memory_order_relaxed);

    const IndexVector s = fit_and_extract(design, responses, exp);
    if (s.defined) {
      for (int k = 0; k < p; ++k) out.sample.values(i, k) = s.values[k];
      out.sample.row_defined[i] = 1;
    }
  });

  out.sample.model_evaluations = evals.load();
  out.quality.replicates = m;
  for (int i = 0; i < m; ++i) {
    if (!out.sample.row_defined[i]) {
      ++out.quality.undefined_rows;
      out.quality.undefined_seeds.push_back(out.sample.omega_seeds[i]);
    }
  }
  return out;
}

ConvergenceTable convergence_study(const Experiment& exp_template,
                                   std::span<const int> n_values,
                                   int replicates,
                                   const StochasticModel& model) {
  if (replicates < 1) {
    throw std::invalid_argument("convergence_study: replicates must be >= 1");
  }
  if (n_values.empty()) {
    throw std::invalid_argument("convergence_study: empty n list");
  }
  if (!model.has_analytic_indices()) {
    throw std::invalid_argument("convergence_study: model '" + model.id() +
                                "' has no analytic oracle");
  }
  const IndexVector exact = model.expected_indices(1000000);

  ConvergenceTable table;
  for (const int n : n_values) {
    std::vector<double> errors(replicates);
    for (int rep = 0; rep < replicates; ++rep) {
      Experiment exp = exp_template;
      exp.n = n;
      exp.seed = derive_seed(exp_template.seed ^ kStudyTag,
                             static_cast<std::uint64_t>(n), rep);
      const Algorithm2Result run = run_algorithm2(exp, model);
      const MomentEstimate mu = moments(run.sample, 1);
      IndexVector approx;
      approx.values = mu.values;
      errors[rep] = normalized_error(exact, approx);
    }
    ConvergencePoint pt;
    pt.n = n;
    pt.replicates = replicates;
    pt.mean_error = mean_of(errors);
    pt.std_error = replicates > 1
                       ? std::sqrt(variance_of(errors) / replicates)
                       : 0.0;
    table.points.push_back(pt);
  }

  // log-log least squares for the empirical rate
  if (table.points.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int c = static_cast<int>(table.points.size());
    for (const auto& pt : table.points) {
      const double lx = std::log(static_cast<double>(pt.n));
      const double ly = std::log(std::max(pt.mean_error, 1e-300));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double denom = c * sxx - sx * sx;
    if (denom > 0) table.slope = -(c * sxy - sx * sy) / denom;
  }
  return table;
}

DistributionSummary distribution_summary(const IndexSample& sample, int bins,
                                         const OracleDistribution* oracle) {
  if (sample.defined_rows() < 30) {
    throw std::invalid_argument(
        "distribution_summary: needs >= 30 defined replicates");
  }
  const int p = sample.dimension();
  DistributionSummary out;
  out.excluded_rows = sample.replicates() - sample.defined_rows();
  for (int k = 0; k < p; ++k) {
    std::vector<double> col = sample.defined_column(k);
    out.histograms.push_back(make_histogram(col, 0.0, 1.0, bins));
    if (oracle != nullptr) {
      std::sort(col.begin(), col.end());
      std::vector<std::pair<double, double>> pairs;
      pairs.reserve(99);
      for (int pct = 1; pct <= 99; ++pct) {
        pairs.emplace_back(oracle->percentiles(pct - 1, k),
                           sorted_quantile(col, pct / 100.0));
      }
      out.qq.push_back(std::move(pairs));
    }
  }
  return out;
}

TimeResolvedIndices run_time_resolved(const Experiment& exp,
                                      const OscillatorModel& model) {
  validate_experiment(exp);
  const int p = model.dimension();
  const int m = exp.m;
  const int n = exp.n;
  const int nt = static_cast<int>(model.grid().size());

  TimeResolvedIndices out;
  out.times = model.grid();
  out.reused_design = exp.reuse_design;

  std::vector<Design> designs(m);
  // responses[i] is n x nt: trajectory of the output species per design row.
  std::vector<Eigen::MatrixXd> responses(m, Eigen::MatrixXd(n, nt));
  std::atomic<std::uint64_t> evals{0};

  parallel_for(m, exp.workers, [&](int i) {
    const std::uint64_t omega_seed = derive_seed(exp.seed, kOmegaTag, i);
    RngStream design_rng(exp.seed,
                         derive_seed(kDesignTag, exp.reuse_design ? 0 : i));
    designs[i] = lhs(model.space(), n, design_rng);
    std::vector<double> rates(p);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < p; ++k) rates[k] = designs[i].points(j, k);
      // Common random numbers: the same noise seed for every design row.
      const std::vector<double> traj =
          model.response_trajectory(rates, omega_seed);
      for (int t = 0; t < nt; ++t) responses[i](j, t) = traj[t];
    }
    evals.fetch_add(n, std::memory_order_relaxed);
  });
  out.model_evaluations = evals.load();

  out.per_time.assign(nt, IndexSample{});
  for (int t = 0; t < nt; ++t) {
    IndexSample& s = out.per_time[t];
    s.values.setZero(m, p);
    s.row_defined.assign(m, 0);
    s.omega_seeds.resize(m);
    s.model_id = model.id();
    s.surrogate_n = n;
    s.surrogate_kind = to_string(exp.surrogate);
    s.root_seed = exp.seed;
    for (int i = 0; i < m; ++i) {
      s.omega_seeds[i] = derive_seed(exp.seed, kOmegaTag, i);
    }
  }

  // Independent fits per (grid time, replicate) pair.
  parallel_for(nt * m, exp.workers, [&](int task) {
    const int t = task / m;
    const int i = task % m;
    std::vector<double> y(n);
    for (int j = 0; j < n; ++j) y[j] = responses[i](j, t);
    const IndexVector s = fit_and_extract(designs[i], y, exp);
    if (s.defined) {
      for (int k = 0; k < p; ++k) out.per_time[t].values(i, k) = s.values[k];
      out.per_time[t].row_defined[i] = 1;
    }
  });

  out.mean.setZero(nt, p);
  out.variance.setZero(nt, p);
  out.undefined_rows.assign(nt, 0);
  out.histograms.assign(p, Eigen::MatrixXd::Zero(nt, exp.histogram_bins));
  for (int t = 0; t < nt; ++t) {
    const IndexSample& s = out.per_time[t];
    out.undefined_rows[t] = s.replicates() - s.defined_rows();
    for (int k = 0; k < p; ++k) {
      const std::vector<double> col = s.defined_column(k);
      if (!col.empty()) {
        out.mean(t, k) = mean_of(col);
        out.variance(t, k) = variance_of(col);
        const Histogram h = make_histogram(col, 0.0, 1.0, exp.histogram_bins);
        for (int bin = 0; bin < h.bins(); ++bin) {
          out.histograms[k](t, bin) = h.counts[bin];
        }
      }
    }
  }
  return out;
}

}  // namespace stosa
