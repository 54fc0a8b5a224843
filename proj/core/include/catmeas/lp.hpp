#pragma once

#include "catmeas/linalg.hpp"

namespace catmeas {

/// minimize cost·x subject to equality x = rhs, x >= 0.
struct LinearProgram {
  Matrix equality;
  Vec rhs;
  Vec cost;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  Vec solution;
};

/// Two-phase dense simplex over exact rationals with Bland's rule, so it
/// terminates on degenerate programs.
LpResult solve_lp(const LinearProgram& program);

}  // namespace catmeas
