#pragma once

#include <utility>
#include <vector>

#include "meritum/common.hpp"

namespace meritum {

// Maximization over 0/1 variables with linear constraints. Groups are
// optional disjoint variable blocks used for bounding: the bound enumerates
// each block's completions against the constraints fully contained in it,
// which is exact when no constraint crosses blocks.
struct IlpConstraint {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
  bool equality = false;  // otherwise <=
};

struct IlpProblem {
  std::vector<double> objective;
  std::vector<IlpConstraint> constraints;
  std::vector<std::vector<int>> groups;
};

struct IlpSolution {
  std::vector<int> values;
  double objective = 0.0;
  bool feasible = false;
};

// Depth-first branch and bound: variables in index order, value 1 first,
// unit propagation to fixpoint, strictly improving incumbents. With the
// group bounds exact, the first optimum found is the one preferred by the
// branching order.
IlpSolution solve_binary_ilp(const IlpProblem& problem);

}  // namespace meritum
