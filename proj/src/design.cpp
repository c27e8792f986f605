#include "stosa/design.hpp"

#include <numeric>
#include <stdexcept>
#include <vector>

namespace stosa {

ParameterSpace::ParameterSpace(std::vector<Distribution> coordinates,
                               std::vector<std::string> names)
    : coords_(std::move(coordinates)), names_(std::move(names)) {
  if (names_.empty()) {
    names_.reserve(coords_.size());
    for (std::size_t j = 0; j < coords_.size(); ++j) {
      names_.push_back("X" + std::to_string(j + 1));
    }
  } else if (names_.size() != coords_.size()) {
    throw std::invalid_argument("parameter space: name count != dimension");
  }
}

ParameterSpace ParameterSpace::iid(const Distribution& dist, int p) {
  if (p < 1) throw std::invalid_argument("parameter space: p < 1");
  return ParameterSpace(std::vector<Distribution>(p, dist));
}

bool ParameterSpace::all_uniform() const {
  for (const auto& c : coords_) {
    if (c.kind() != DistKind::Uniform) return false;
  }
  return !coords_.empty();
}

Design lhs(const ParameterSpace& space, int n, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("lhs: n must be >= 2");
  const int p = space.dimension();
  Eigen::MatrixXd pts(n, p);
  std::vector<int> perm(n);
  for (int j = 0; j < p; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    // Fisher-Yates; one fresh permutation per column.
    for (int i = n - 1; i > 0; --i) {
      const int k = static_cast<int>(rng.next_u64() % (i + 1));
      std::swap(perm[i], perm[k]);
    }
    const Distribution& dist = space.coordinate(j);
    for (int i = 0; i < n; ++i) {
      const double u = (perm[i] + rng.next_double()) / n;
      pts(i, j) = dist.quantile(u);
    }
  }
  return Design{space, std::move(pts)};
}

Design iid_design(const ParameterSpace& space, int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("iid_design: n must be >= 1");
  const int p = space.dimension();
  Eigen::MatrixXd pts(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      pts(i, j) = space.coordinate(j).sample(rng);
    }
  }
  return Design{space, std::move(pts)};
}

}  // namespace stosa
