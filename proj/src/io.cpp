#include "stosa/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace stosa {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

nlohmann::ordered_json meta_json(const RunMetadata& meta) {
  return {{"tool", "stosa"},
          {"version", meta.tool_version},
          {"seed", meta.seed},
          {"config_hash", meta.config_hash}};
}

nlohmann::ordered_json space_json(const ParameterSpace& space) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int j = 0; j < space.dimension(); ++j) {
    const Distribution& d = space.coordinate(j);
    const char* kind = d.kind() == DistKind::Uniform  ? "uniform"
                       : d.kind() == DistKind::Beta   ? "beta"
                                                      : "normal";
    arr.push_back({{"kind", kind},
                   {"param1", d.param1()},
                   {"param2", d.param2()},
                   {"name", space.names()[j]}});
  }
  return arr;
}

ParameterSpace space_from_json(const nlohmann::json& arr) {
  std::vector<Distribution> coords;
  std::vector<std::string> names;
  for (const auto& j : arr) {
    const std::string kind = j.at("kind").get<std::string>();
    const double p1 = j.at("param1").get<double>();
    const double p2 = j.at("param2").get<double>();
    if (kind == "uniform") {
      coords.push_back(Distribution::uniform(p1, p2));
    } else if (kind == "beta") {
      coords.push_back(Distribution::beta(p1, p2));
    } else if (kind == "normal") {
      coords.push_back(Distribution::normal(p1, p2));
    } else {
      throw std::invalid_argument("unknown distribution kind: " + kind);
    }
    names.push_back(j.value("name", "X" + std::to_string(names.size() + 1)));
  }
  return ParameterSpace(std::move(coords), std::move(names));
}

}  // namespace

std::string config_hash(const std::string& canonical_text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical_text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string metadata_comment(const RunMetadata& meta) {
  std::ostringstream ss;
  ss << "# stosa " << meta.tool_version << " seed=" << meta.seed
     << " config=" << meta.config_hash;
  return ss.str();
}

void write_index_sample_csv(const IndexSample& sample, const RunMetadata& meta,
                            const std::string& path) {
  auto out = open_out(path);
  out << metadata_comment(meta) << "\n";
  out << "omega_seed";
  for (int k = 0; k < sample.dimension(); ++k) out << ",S_" << (k + 1);
  out << "\n";
  for (int i = 0; i < sample.replicates(); ++i) {
    out << sample.omega_seeds[i];
    for (int k = 0; k < sample.dimension(); ++k) {
      if (sample.row_defined[i]) {
        out << "," << fmt_double(sample.values(i, k));
      } else {
        out << ",undefined";
      }
    }
    out << "\n";
  }
}

void write_convergence_csv(const ConvergenceTable& table,
                           const RunMetadata& meta, const std::string& path) {
  auto out = open_out(path);
  out << metadata_comment(meta) << "\n";
  out << "n,mean_error,std_error,replicates\n";
  for (const auto& pt : table.points) {
    out << pt.n << "," << fmt_double(pt.mean_error) << ","
        << fmt_double(pt.std_error) << "," << pt.replicates << "\n";
  }
}

void write_mean_time_series_csv(const TimeResolvedIndices& result,
                                std::span<const std::string> names,
                                const RunMetadata& meta,
                                const std::string& path) {
  auto out = open_out(path);
  out << metadata_comment(meta) << "\n";
  out << "time,variable,mean,variance,undefined_rows\n";
  const int nt = static_cast<int>(result.times.size());
  const int p = static_cast<int>(result.mean.cols());
  for (int t = 0; t < nt; ++t) {
    for (int k = 0; k < p; ++k) {
      out << fmt_double(result.times[t]) << "," << names[k] << ","
          << fmt_double(result.mean(t, k)) << ","
          << fmt_double(result.variance(t, k)) << ","
          << result.undefined_rows[t] << "\n";
    }
  }
}

void write_curve_csv(std::span<const std::pair<double, double>> xy,
                     const std::string& x_name, const std::string& y_name,
                     const RunMetadata& meta, const std::string& path) {
  auto out = open_out(path);
  out << metadata_comment(meta) << "\n";
  out << x_name << "," << y_name << "\n";
  for (const auto& [x, y] : xy) {
    out << fmt_double(x) << "," << fmt_double(y) << "\n";
  }
}

void write_expectations_csv(const IndexVector& values,
                            std::span<const std::string> names,
                            const RunMetadata& meta, const std::string& path) {
  auto out = open_out(path);
  out << metadata_comment(meta) << "\n";
  out << "variable,expected_index\n";
  for (int k = 0; k < values.dimension(); ++k) {
    out << names[k] << ",";
    if (values.defined) {
      out << fmt_double(values.values[k]);
    } else {
      out << "undefined";
    }
    out << "\n";
  }
}

void write_moments_json(std::span<const MomentEstimate> estimates,
                        const RunMetadata& meta, const std::string& path) {
  nlohmann::ordered_json j;
  j["meta"] = meta_json(meta);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& est : estimates) {
    arr.push_back({{"order", est.order},
                   {"m", est.m},
                   {"variance_bound", est.variance_bound},
                   {"values", est.values}});
  }
  j["moments"] = arr;
  write_text_file(path, j.dump(2) + "\n");
}

void write_histograms_json(const DistributionSummary& summary,
                           std::span<const std::string> names,
                           const RunMetadata& meta, const std::string& path) {
  nlohmann::ordered_json j;
  j["meta"] = meta_json(meta);
  j["excluded_rows"] = summary.excluded_rows;
  nlohmann::ordered_json hists = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < summary.histograms.size(); ++k) {
    const Histogram& h = summary.histograms[k];
    hists.push_back({{"variable", names[k]},
                     {"lo", h.lo},
                     {"hi", h.hi},
                     {"total", h.total},
                     {"counts", h.counts}});
  }
  j["histograms"] = hists;
  if (!summary.qq.empty()) {
    nlohmann::ordered_json qq = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < summary.qq.size(); ++k) {
      nlohmann::ordered_json exact = nlohmann::ordered_json::array();
      nlohmann::ordered_json approx = nlohmann::ordered_json::array();
      for (const auto& [e, a] : summary.qq[k]) {
        exact.push_back(e);
        approx.push_back(a);
      }
      qq.push_back({{"variable", names[k]},
                    {"exact_quantiles", exact},
                    {"surrogate_quantiles", approx}});
    }
    j["qq"] = qq;
  }
  write_text_file(path, j.dump(2) + "\n");
}

void write_quality_json(const QualityReport& quality, const RunMetadata& meta,
                        const std::string& path) {
  nlohmann::ordered_json j;
  j["meta"] = meta_json(meta);
  j["replicates"] = quality.replicates;
  j["undefined_rows"] = quality.undefined_rows;
  j["undefined_seeds"] = quality.undefined_seeds;
  write_text_file(path, j.dump(2) + "\n");
}

void write_time_histograms_json(const TimeResolvedIndices& result,
                                std::span<const std::string> names,
                                const RunMetadata& meta,
                                const std::string& path) {
  nlohmann::ordered_json j;
  j["meta"] = meta_json(meta);
  j["times"] = result.times;
  j["reused_design"] = result.reused_design;
  nlohmann::ordered_json vars = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < result.histograms.size(); ++k) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int t = 0; t < result.histograms[k].rows(); ++t) {
      std::vector<double> row(result.histograms[k].cols());
      for (int b = 0; b < result.histograms[k].cols(); ++b) {
        row[b] = result.histograms[k](t, b);
      }
      rows.push_back(row);
    }
    vars.push_back({{"variable", names[k]}, {"counts", rows}});
  }
  j["histograms"] = vars;
  write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

std::string surrogate_to_json(const AdditiveSurrogate& s) {
  nlohmann::ordered_json j;
  j["type"] = "additive-mars";
  j["intercept"] = s.intercept();
  j["space"] = space_json(s.space());
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (int k = 0; k < s.dimension(); ++k) {
    for (const SurrogateTerm& t : s.terms_by_variable()[k]) {
      terms.push_back(
          {{"variable", t.hinge.variable},
           {"knot", t.hinge.knot},
           {"side", t.hinge.side == HingeSide::XMinusT ? "x-minus-t" : "t-minus-x"},
           {"coefficient", t.coefficient}});
    }
  }
  j["terms"] = terms;
  return j.dump(2) + "\n";
}

AdditiveSurrogate surrogate_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("type").get<std::string>() != "additive-mars") {
    throw std::invalid_argument("surrogate json: wrong type");
  }
  ParameterSpace space = space_from_json(j.at("space"));
  std::vector<std::vector<SurrogateTerm>> terms(space.dimension());
  for (const auto& jt : j.at("terms")) {
    SurrogateTerm t;
    t.hinge.variable = jt.at("variable").get<int>();
    t.hinge.knot = jt.at("knot").get<double>();
    t.hinge.side = jt.at("side").get<std::string>() == "x-minus-t"
                       ? HingeSide::XMinusT
                       : HingeSide::TMinusX;
    t.coefficient = jt.at("coefficient").get<double>();
    if (t.hinge.variable < 0 || t.hinge.variable >= space.dimension()) {
      throw std::invalid_argument("surrogate json: variable out of range");
    }
    terms[t.hinge.variable].push_back(t);
  }
  return AdditiveSurrogate(j.at("intercept").get<double>(), std::move(terms),
                           std::move(space));
}

std::string pc_surrogate_to_json(const PcSurrogate& s) {
  nlohmann::ordered_json j;
  j["type"] = "pce";
  j["order"] = s.basis().total_order;
  j["space"] = space_json(s.space());
  j["multi_indices"] = s.basis().multi_indices;
  std::vector<double> coef(s.coefficients().data(),
                           s.coefficients().data() + s.coefficients().size());
  j["coefficients"] = coef;
  return j.dump(2) + "\n";
}

PcSurrogate pc_surrogate_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("type").get<std::string>() != "pce") {
    throw std::invalid_argument("pc surrogate json: wrong type");
  }
  ParameterSpace space = space_from_json(j.at("space"));
  PcBasis basis;
  basis.dimension = space.dimension();
  basis.total_order = j.at("order").get<int>();
  basis.multi_indices =
      j.at("multi_indices").get<std::vector<std::vector<int>>>();
  const auto coef = j.at("coefficients").get<std::vector<double>>();
  Eigen::VectorXd c(coef.size());
  for (std::size_t i = 0; i < coef.size(); ++i) c[i] = coef[i];
  return PcSurrogate(std::move(basis), std::move(c), std::move(space));
}

}  // namespace stosa
