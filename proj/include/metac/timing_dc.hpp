// Difference-constraint timing encoding over integer variables t_0 .. t_{lambda-1}.

#pragma once

#include "metac/core.hpp"

namespace metac {

/// t_0 = 0 and t_k - t_{k+1} <= -1 for k < lambda-1.
GroundProgram compile_delta_dc(Step lambda);

/// For each rule next_[m,n) a :- B and k < lambda-1:
///   `:- B_k, not (t_k - t_{k+1} <= -m)` and, for finite n,
///   `:- B_k, not (t_{k+1} - t_k <= n-1)`.
GroundProgram compile_psi_dc(const MetricProgram& program, Step lambda);

}  // namespace metac
