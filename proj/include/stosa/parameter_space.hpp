#pragma once

#include <string>
#include <vector>

#include "stosa/distribution.hpp"

namespace stosa {

/// Product law of p independent coordinates.
class ParameterSpace {
 public:
  ParameterSpace() = default;
  explicit ParameterSpace(std::vector<Distribution> coordinates,
                          std::vector<std::string> names = {});

  /// p iid copies of one distribution.
  static ParameterSpace iid(const Distribution& dist, int p);

  int dimension() const { return static_cast<int>(coords_.size()); }
  const Distribution& coordinate(int j) const { return coords_.at(j); }
  const std::vector<Distribution>& coordinates() const { return coords_; }

  /// Coordinate names; defaults to X1..Xp.
  const std::vector<std::string>& names() const { return names_; }

  bool all_uniform() const;

 private:
  std::vector<Distribution> coords_;
  std::vector<std::string> names_;
};

}  // namespace stosa
