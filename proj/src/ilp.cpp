#include "meritum/ilp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace meritum {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Search {
  const IlpProblem& p;
  std::vector<int> val;             // -1 free
  std::vector<int> group_of;       // -1 when ungrouped
  std::vector<std::vector<int>> group_cons;  // constraints fully inside a group
  std::vector<int> free_cons;      // constraints not inside any single group
  IlpSolution best;

  explicit Search(const IlpProblem& prob) : p(prob) {
    size_t n = p.objective.size();
    val.assign(n, -1);
    group_of.assign(n, -1);
    for (size_t g = 0; g < p.groups.size(); ++g)
      for (int v : p.groups[g]) group_of[v] = static_cast<int>(g);
    group_cons.resize(p.groups.size());
    for (size_t c = 0; c < p.constraints.size(); ++c) {
      int g = -2;  // -2 unset, -1 crosses groups
      for (const auto& [v, coef] : p.constraints[c].terms) {
        (void)coef;
        if (g == -2) g = group_of[v];
        else if (g != group_of[v]) g = -1;
      }
      if (g >= 0) group_cons[g].push_back(static_cast<int>(c));
      else free_cons.push_back(static_cast<int>(c));
    }
  }

  // Tightest achievable range of a constraint LHS under the current partial
  // assignment.
  void lhs_range(const IlpConstraint& c, double& lo, double& hi) const {
    lo = hi = 0.0;
    for (const auto& [v, coef] : c.terms) {
      if (val[v] >= 0) {
        lo += coef * val[v];
        hi += coef * val[v];
      } else if (coef > 0) {
        hi += coef;
      } else {
        lo += coef;
      }
    }
  }

  // Unit propagation to fixpoint; records forced variables in `trail`.
  bool propagate(std::vector<int>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const IlpConstraint& c : p.constraints) {
        double lo, hi;
        lhs_range(c, lo, hi);
        if (lo > c.rhs + 1e-12) return false;
        if (c.equality && hi < c.rhs - 1e-12) return false;
        for (const auto& [v, coef] : c.terms) {
          if (val[v] >= 0) continue;
          // forcing to 0: value 1 would push the minimum past an upper bound
          if (coef > 0 && lo + coef > c.rhs + 1e-12) {
            val[v] = 0;
            trail.push_back(v);
            changed = true;
          } else if (coef < 0 && lo - coef > c.rhs + 1e-12) {
            val[v] = 1;
            trail.push_back(v);
            changed = true;
          } else if (c.equality) {
            // forcing for the >= direction of an equality
            if (coef > 0 && hi - coef < c.rhs - 1e-12) {
              val[v] = 1;
              trail.push_back(v);
              changed = true;
            } else if (coef < 0 && hi + coef < c.rhs - 1e-12) {
              // value 1 would drag the maximum below an equality target
              val[v] = 0;
              trail.push_back(v);
              changed = true;
            }
          }
          if (changed) break;
        }
        if (changed) break;
      }
    }
    return true;
  }

  bool constraint_holds(const IlpConstraint& c, const std::vector<int>& assign) const {
    double lhs = 0.0;
    for (const auto& [v, coef] : c.terms) lhs += coef * assign[v];
    if (c.equality) return std::abs(lhs - c.rhs) <= 1e-9;
    return lhs <= c.rhs + 1e-9;
  }

  // Best completion value of one group under its internal constraints.
  double group_bound(size_t g) {
    const std::vector<int>& vars = p.groups[g];
    std::vector<int> free_vars;
    double fixed = 0.0;
    for (int v : vars) {
      if (val[v] >= 0) fixed += p.objective[v] * val[v];
      else free_vars.push_back(v);
    }
    size_t combos = size_t{1} << free_vars.size();
    double best_val = kNegInf;
    std::vector<int> assign = val;
    for (size_t mask = 0; mask < combos; ++mask) {
      double obj = fixed;
      for (size_t i = 0; i < free_vars.size(); ++i) {
        int bit = (mask >> i) & 1;
        assign[free_vars[i]] = bit;
        obj += p.objective[free_vars[i]] * bit;
      }
      bool ok = true;
      for (int c : group_cons[g])
        if (!constraint_holds(p.constraints[c], assign)) {
          ok = false;
          break;
        }
      if (ok) best_val = std::max(best_val, obj);
    }
    for (int v : free_vars) assign[v] = -1;
    return best_val;
  }

  double upper_bound() {
    double total = 0.0;
    for (size_t g = 0; g < p.groups.size(); ++g) {
      double b = group_bound(g);
      if (b == kNegInf) return kNegInf;
      total += b;
    }
    for (size_t v = 0; v < val.size(); ++v) {
      if (group_of[v] >= 0) continue;
      if (val[v] >= 0) total += p.objective[v] * val[v];
      else total += std::max(0.0, p.objective[v]);
    }
    return total;
  }

  void record_if_better() {
    for (const IlpConstraint& c : p.constraints)
      if (!constraint_holds(c, val)) return;
    double obj = 0.0;
    for (size_t v = 0; v < val.size(); ++v) obj += p.objective[v] * val[v];
    if (!best.feasible || obj > best.objective) {
      best.feasible = true;
      best.objective = obj;
      best.values = val;
    }
  }

  void dfs() {
    std::vector<int> trail;
    if (!propagate(trail)) {
      for (int v : trail) val[v] = -1;
      return;
    }
    double bound = upper_bound();
    if (bound == kNegInf || (best.feasible && bound <= best.objective)) {
      for (int v : trail) val[v] = -1;
      return;
    }
    int branch = -1;
    for (size_t v = 0; v < val.size(); ++v)
      if (val[v] < 0) {
        branch = static_cast<int>(v);
        break;
      }
    if (branch < 0) {
      record_if_better();
    } else {
      for (int value : {1, 0}) {
        val[branch] = value;
        dfs();
      }
      val[branch] = -1;
    }
    for (int v : trail) val[v] = -1;
  }
};

}  // namespace

IlpSolution solve_binary_ilp(const IlpProblem& problem) {
  for (const IlpConstraint& c : problem.constraints)
    for (const auto& [v, coef] : c.terms) {
      (void)coef;
      if (v < 0 || v >= static_cast<int>(problem.objective.size()))
        throw DataError("ilp constraint references unknown variable");
    }
  Search s(problem);
  s.dfs();
  return s.best;
}

}  // namespace meritum
