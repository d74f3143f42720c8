// Copyright 2026 The leastcore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEASTCORE_SIMPLEX_HPP
#define LEASTCORE_SIMPLEX_HPP

#include "leastcore/exact_simplex.hpp"
#include "leastcore/lp_model.hpp"
#include "leastcore/revised_simplex.hpp"

namespace leastcore {

/// Solves an LP model with the floating-point revised simplex, or with the
/// rational solver when opts.exact is set.
///
/// On an optimal exit the point satisfies every row and bound within
/// opts.feasibility_tol and no nonbasic reduced cost is wrong-signed by more
/// than opts.optimality_tol. Results are deterministic for a given model and
/// options.
inline lp_solution solve(const lp_model& model, const solver_options& opts = {}) {
  if (opts.exact) return solve_exact(model);
  if (opts.feasibility_tol <= 0.0 || opts.optimality_tol <= 0.0) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
  detail::revised_simplex engine(model, opts);
  return engine.run();
}

}  // namespace leastcore

#endif  // LEASTCORE_SIMPLEX_HPP
