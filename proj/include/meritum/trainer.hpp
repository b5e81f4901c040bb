#pragma once

#include <string>
#include <vector>

#include "meritum/features.hpp"
#include "meritum/sparse.hpp"
#include "meritum/strength.hpp"

namespace meritum {

enum class InitMode { Freq, AllStrong, AllStrongWin, Random };

InitMode init_mode_from_string(const std::string& s);
const char* to_string(InitMode m);

struct TrainerConfig {
  double C = 0.01;
  int tau = 1000;                 // cap for both the outer and inner loops
  InitMode init_mode = InitMode::Freq;
  ConstraintConfig constraints;
  double decay_alpha = 1.0;       // recorded; features are extracted upstream
  uint64_t seed = 0;
  double w_tol = 1e-5;            // relative w-change convergence
  double qp_tol = 1e-6;           // QP gradient tolerance
  int qp_max_iter = 500;
  bool scale_features = true;
  bool latent = true;  // false freezes the initial strengths: one QP, no reassignment
};

// Initial strength assignments per debate. Freq gives the side with strictly
// more arguments on a topic the strong label (ties: both strong); AllStrongWin
// gives the winner's side strong everywhere. Random draws fair coins and,
// under C3, demotes the lower-frequency side of any strong-strong topic.
std::vector<StrengthAssignment> initialize_strengths(const std::vector<DebateFeatures>& feats,
                                                     const std::vector<int>& labels,
                                                     InitMode mode, const ConstraintConfig& cc,
                                                     Rng& rng);

// Inner QP: minimize 0.5*|w|^2 + C * sum_i l(-y_i * max_j w.phi_ij) with
// l(z) = max(0, 1+z)^2. Each sample holds one or more candidate vectors
// (positives: exactly one; negatives: the cached set), as sparse rows over
// dense feature ids. Solved by L-BFGS with Armijo backtracking to the given
// gradient tolerance.
struct QpProblem {
  using Row = std::vector<std::pair<int, double>>;
  struct Sample {
    int y = 1;
    std::vector<Row> options;
  };
  int dim = 0;
  double C = 0.01;
  std::vector<Sample> samples;
};

std::vector<double> solve_inner_qp(const QpProblem& problem, std::vector<double> warm,
                                   double tol = 1e-6, int max_iter = 500);

double qp_objective(const QpProblem& problem, const std::vector<double>& w);

struct TraceEntry {
  int outer = 0;
  int inner = 0;
  double objective = 0.0;
};

struct TrainedModel {
  SparseVector w;                      // weights keyed by feature-name strings
  FeatureScaler scaler;
  TrainerConfig config;
  std::vector<std::string> features;   // dictionary snapshot
  std::vector<TraceEntry> trace;
};

// The iterative latent-strength trainer: initialize strengths, solve the
// initial QP, then alternate exact strength reassignment for positive samples
// with a cutting-plane loop over negative samples until w converges.
TrainedModel train(const std::vector<DebateFeatures>& feats, const std::vector<int>& labels,
                   const TrainerConfig& cfg);

struct DecisionScores {
  double f_pro = 0.0;
  double f_con = 0.0;
  int prediction = 1;  // +1 iff f_pro > f_con, else -1
  StrengthAssignment h_pro;  // maximizer behind f_pro
  StrengthAssignment h_con;
};

// Applies the model's scaler to the raw features, then scores both sides by
// exact inference under the model's constraint configuration.
DecisionScores decision_scores(const TrainedModel& model, const DebateFeatures& raw);

}  // namespace meritum
