#pragma once

#include <vector>

#include "rdspec/aligned.hpp"

namespace rdspec {

/// Fields of every species at one time level, in both representations.
struct State {
  double t = 0.0;
  std::vector<RealField> u;
  std::vector<ComplexField> U;

  int species() const { return static_cast<int>(u.size()); }
};

}  // namespace rdspec
