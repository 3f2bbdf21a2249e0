#pragma once

// Types shared by the joint solver and the brute-force reference.

#include <string>

#include "semcom/core_model.hpp"

namespace semcom {

enum class SolverMode { Joint, NoCollaboration, NoKnowledgeSharing };

inline std::string to_string(SolverMode m) {
  switch (m) {
    case SolverMode::Joint: return "joint";
    case SolverMode::NoCollaboration: return "nocollab";
    case SolverMode::NoKnowledgeSharing: return "noshare";
  }
  return "?";
}

inline SolverMode parse_solver_mode(const std::string& s) {
  if (s == "joint") return SolverMode::Joint;
  if (s == "nocollab") return SolverMode::NoCollaboration;
  if (s == "noshare") return SolverMode::NoKnowledgeSharing;
  throw ConfigError("unknown solver mode '" + s + "' (expected joint|nocollab|noshare)");
}

/// Outcome of the per-(i, j, k) subproblem. b_p is canonically 1 for classes
/// sent in bit mode (a_p = 0), where it has no effect.
struct JointDecision {
  BinaryVector a;
  BinaryVector b;
  double xi = 0.0;
  int xi_index = -1;  // position on the extraction grid
  double gamma = -kInfinity;
  TimingBreakdown timing;
  bool feasible = false;
};

}  // namespace semcom
