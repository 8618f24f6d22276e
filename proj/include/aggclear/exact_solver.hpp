// Copyright 2026 The aggclear authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>

#include "aggclear/market_model.hpp"
#include "aggclear/merit_order.hpp"

namespace aggclear {

/// Fixes a subset of the scenario's binary indicators, keyed by bid id.
/// Ids must refer to block bids or binary-carrying hourly bids.
struct PartialAssignment {
  std::map<BidId, int> u;
};

/// Globally optimal solve of the full clearing problem by depth-first
/// branch-and-bound over all binary indicators, with the greedy merit-order
/// dispatch at every node. Binaries are branched in order of decreasing
/// |Q*P|. Search stops early once cfg.node_limit nodes have been explored;
/// the best incumbent is then returned with status Approximate.
ClearingSolution solve_exact(const Scenario& s, const ClearingConfig& cfg = {});

/// Same, with a nonzero per-period balance target (used by the second
/// clearing step). rhs must have s.num_periods entries.
ClearingSolution solve_exact(const Scenario& s, const ClearingConfig& cfg,
                             const RhsVector& rhs);

/// Upper bound on the best completion of a partial binary assignment:
/// every unfixed block bid is relaxed into independent per-period bids with
/// x in [0,1], every unfixed hourly binary is relaxed to u = 1 with
/// x in [0,1] and its start-up cost dropped. Returns -infinity when the
/// relaxation itself is infeasible (the subtree has no feasible completion).
double upper_bound(const Scenario& s, const PartialAssignment& partial,
                   const ClearingConfig& cfg = {});

double upper_bound(const Scenario& s, const PartialAssignment& partial,
                   const ClearingConfig& cfg, const RhsVector& rhs);

}  // namespace aggclear
