#pragma once

#include <string>
#include <vector>

#include "entgeom/injective.hpp"

namespace entgeom {

struct CriterionOutcome {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Number of acceptance criteria; ids run from 1.
inline constexpr int kAcceptanceCriteria = 10;

/// Options pinned by the acceptance suite: 64 restarts, seed 20240601.
SolverOptions acceptance_options();

/// Runs one criterion. Throws PreconditionError for an unknown id.
CriterionOutcome run_criterion(int id, const SolverOptions& opts = acceptance_options());

std::vector<CriterionOutcome> run_acceptance(const SolverOptions& opts = acceptance_options());

/// "PASS  3  name  (detail)" style line.
std::string format_outcome(const CriterionOutcome& outcome);

}  // namespace entgeom
