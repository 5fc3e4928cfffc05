#pragma once

#include "doa/market.hpp"
#include "doa/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace doa {

/// 0/1 indicator per market edge (same order as Market::edges()).
struct PrimalSolution {
  std::vector<std::uint8_t> selected;

  Rational objective(const Market& market) const;
  bool feasible(const Market& market) const;
};

/// Price-wise utilities y_B = val(B) - P(B), y_S = P(S) - val(S).
struct DualSolution {
  std::vector<Rational> buyer_utility;
  std::vector<Rational> seller_utility;

  Rational objective() const;
  /// Non-negative and y_B + y_S >= val(B) - val(S) on every edge.
  bool feasible(const Market& market) const;
};

struct CertificateReport {
  bool primal_feasible = false;
  bool dual_feasible = false;
  Rational primal_value;
  Rational dual_value;
  /// Both feasible and the objectives coincide (weak duality closes).
  bool optimal_pair = false;
};

struct MatchingResult {
  Matching matching;
  Rational value;
};

/// Maximum-weight matching with edge weights val(B) - val(S). Negative-weight
/// edges are never selected. Exhaustive subset search below a small size
/// threshold, augmenting-path assignment with potentials above it.
MatchingResult max_weight_matching(const Market& market);

struct MatchingWithDuals {
  Matching matching;
  Rational value;
  DualSolution duals;  // optimal and feasible, dummy-free
};

/// The assignment route regardless of market size; also yields an optimal
/// dual, which is handy for building equilibrium prices.
MatchingWithDuals max_weight_matching_with_duals(const Market& market);

PrimalSolution primal_from_matching(const Market& market, const Matching& matching);

/// Throws PreconditionError if some component would be negative (the state
/// violates validity a1).
DualSolution dual_from_prices(const Market& market, const TickGrid& grid,
                              const MarketState& state);

/// Builds (x^Pi, y^P) from the state and reports whether they form an optimal
/// primal/dual pair. Never throws on infeasibility; the flags tell the story.
CertificateReport verify_stable_iff_optimal(const Market& market, const TickGrid& grid,
                                            const MarketState& state);

/// SW(optimal) - SW(state's matching) for an epsilon-stable state. The gap is
/// at most n * epsilon. Throws PreconditionError when the state is not
/// epsilon-stable (nearest-tick reading, which subsumes exact).
Rational epsilon_sw_gap(const Market& market, const TickGrid& grid, const MarketState& state);

/// Minimum nonzero |val(Z1) - val(Z2)| over all agent pairs; nullopt when all
/// valuations are equal. For epsilon < delta/n every epsilon-stable state
/// maximizes social welfare exactly.
std::optional<Rational> delta_threshold(const Market& market);

}  // namespace doa
