// Boolean timing encoding: time points are atoms t_{k,d} with d <= nu.

#pragma once

#include <functional>

#include "metac/core.hpp"

namespace metac {

/// t_{0,0} plus, for every k < lambda-1 and d <= nu, the rule
/// `t_{k+1,d+1} ; ... ; t_{k+1,nu} :- t_{k,d}` (a constraint when d = nu).
/// Throws InputError when nu < lambda - 1.
GroundProgram compile_delta_bool(Step lambda, TimePoint nu);

/// For each rule next_[m,n) a :- B, each k < lambda-1 and each d < d' <= nu whose
/// gap misses [m,n): `:- B_k, t_{k,d}, t_{k+1,d'}`. Ordered by (rule, k, d, d').
GroundProgram compile_psi_bool(const MetricProgram& program, Step lambda, TimePoint nu);

/// Streams the rules of compile_psi_bool without storing them.
void for_each_psi_bool(const MetricProgram& program, Step lambda, TimePoint nu,
                       const std::function<void(const GroundRule&)>& sink);

/// Exact size of compile_psi_bool, computed without building the rules.
std::uint64_t count_psi_bool(const MetricProgram& program, Step lambda, TimePoint nu);

}  // namespace metac
