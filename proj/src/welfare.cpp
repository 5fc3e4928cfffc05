#include "doa/welfare.hpp"

#include "doa/errors.hpp"

#include <algorithm>
#include <cassert>
#include <optional>

namespace doa {

namespace {

Rational edge_weight(const Market& market, int b, int s) {
  return market.buyer_valuation(b) - market.seller_valuation(s);
}

// Exhaustive search over subsets of the smaller side. dp[mask] is the best
// total weight using a prefix of the larger side with exactly the columns in
// `mask` consumed. Only positive-weight edges are ever taken (the primal is
// free to leave an edge at zero).
MatchingResult best_matching_by_subsets(const Market& market) {
  bool cols_are_sellers = market.seller_count() <= market.buyer_count();
  int cols = cols_are_sellers ? market.seller_count() : market.buyer_count();
  int rows = cols_are_sellers ? market.buyer_count() : market.seller_count();
  int full = 1 << cols;

  std::vector<Rational> dp(full, Rational(0));
  // choice[r][mask]: column matched to row r when the first r+1 rows end in
  // state `mask`, or -1 when row r stays unmatched.
  std::vector<std::vector<int>> choice(rows, std::vector<int>(full, -1));

  for (int r = 0; r < rows; ++r) {
    std::vector<Rational> next = dp;  // row r unmatched
    auto& pick = choice[r];
    for (int mask = 0; mask < full; ++mask) {
      for (int c = 0; c < cols; ++c) {
        if (mask & (1 << c)) continue;
        int b = cols_are_sellers ? r : c;
        int s = cols_are_sellers ? c : r;
        if (!market.has_edge(b, s)) continue;
        Rational w = edge_weight(market, b, s);
        if (w <= 0) continue;
        Rational cand = dp[mask] + w;
        int to = mask | (1 << c);
        if (cand > next[to]) {
          next[to] = cand;
          pick[to] = c;
        }
      }
    }
    dp = std::move(next);
  }

  int best_mask = 0;
  for (int mask = 1; mask < full; ++mask) {
    if (dp[mask] > dp[best_mask]) best_mask = mask;
  }

  Matching matching(market.buyer_count(), market.seller_count());
  Rational value = dp[best_mask];
  int mask = best_mask;
  for (int r = rows - 1; r >= 0; --r) {
    int c = choice[r][mask];
    if (c >= 0) {
      int b = cols_are_sellers ? r : c;
      int s = cols_are_sellers ? c : r;
      matching.add(b, s);
      mask &= ~(1 << c);
    }
  }
  return {std::move(matching), std::move(value)};
}

// Assignment on the square matrix padded with zero cells; a zero cell stands
// for "leave both endpoints unmatched", so the maximum assignment value equals
// the maximum-weight matching value. Minimizing Hungarian with potentials on
// negated weights; exact rational arithmetic throughout.
struct HungarianOutcome {
  std::vector<int> row_of_col;  // 1-indexed, 0 = free
  std::vector<Rational> u, v;   // minimization potentials, u[i]+v[j] <= cost[i][j]
};

HungarianOutcome solve_assignment_min(const std::vector<std::vector<Rational>>& cost) {
  int n = static_cast<int>(cost.size());
  std::vector<Rational> u(n + 1, Rational(0)), v(n + 1, Rational(0));
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::optional<Rational>> minv(n + 1);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      std::optional<Rational> delta;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        Rational cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (!minv[j] || cur < *minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (!delta || *minv[j] < *delta) {
          delta = *minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += *delta;
          v[j] -= *delta;
        } else if (minv[j]) {
          *minv[j] -= *delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  return {std::move(p), std::move(u), std::move(v)};
}

}  // namespace

Rational PrimalSolution::objective(const Market& market) const {
  Rational total = 0;
  const auto& edges = market.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (selected[k]) total += edge_weight(market, edges[k].first, edges[k].second);
  }
  return total;
}

bool PrimalSolution::feasible(const Market& market) const {
  if (selected.size() != market.edges().size()) return false;
  std::vector<int> row(market.buyer_count(), 0), col(market.seller_count(), 0);
  const auto& edges = market.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (!selected[k]) continue;
    if (++row[edges[k].first] > 1) return false;
    if (++col[edges[k].second] > 1) return false;
  }
  return true;
}

Rational DualSolution::objective() const {
  Rational total = 0;
  for (const auto& y : buyer_utility) total += y;
  for (const auto& y : seller_utility) total += y;
  return total;
}

bool DualSolution::feasible(const Market& market) const {
  for (const auto& y : buyer_utility) {
    if (y < 0) return false;
  }
  for (const auto& y : seller_utility) {
    if (y < 0) return false;
  }
  for (auto [b, s] : market.edges()) {
    if (buyer_utility[b] + seller_utility[s] < edge_weight(market, b, s)) return false;
  }
  return true;
}

MatchingResult max_weight_matching(const Market& market) {
  int small = std::min(market.buyer_count(), market.seller_count());
  if (small <= 8) return best_matching_by_subsets(market);
  auto with_duals = max_weight_matching_with_duals(market);
  return {std::move(with_duals.matching), std::move(with_duals.value)};
}

MatchingWithDuals max_weight_matching_with_duals(const Market& market) {
  int nb = market.buyer_count();
  int ns = market.seller_count();
  int n = std::max(nb, ns);
  if (n == 0) {
    return {Matching(nb, ns), Rational(0), DualSolution{{}, {}}};
  }

  std::vector<std::vector<Rational>> cost(n, std::vector<Rational>(n, Rational(0)));
  for (auto [b, s] : market.edges()) {
    Rational w = edge_weight(market, b, s);
    if (w > 0) cost[b][s] = -w;
  }

  auto outcome = solve_assignment_min(cost);

  Matching matching(nb, ns);
  Rational value = 0;
  for (int j = 1; j <= n; ++j) {
    int i = outcome.row_of_col[j];
    int b = i - 1, s = j - 1;
    if (b < nb && s < ns && market.has_edge(b, s)) {
      Rational w = edge_weight(market, b, s);
      if (w > 0 && cost[b][s] < 0) {
        matching.add(b, s);
        value += w;
      }
    }
  }

  // Map minimization potentials back to the maximization dual and shift the
  // free constant so both sides are non-negative; the shift interval is
  // non-empty because every padded cell is >= 0.
  std::vector<Rational> yb(n), ys(n);
  for (int i = 0; i < n; ++i) yb[i] = -outcome.u[i + 1];
  for (int j = 0; j < n; ++j) ys[j] = -outcome.v[j + 1];
  Rational min_b = yb[0], min_s = ys[0];
  for (const auto& y : yb) min_b = std::min(min_b, y);
  for (const auto& y : ys) min_s = std::min(min_s, y);
  assert(min_b + min_s >= 0);
  for (auto& y : yb) y -= min_b;
  for (auto& y : ys) y += min_b;

  DualSolution duals;
  duals.buyer_utility.assign(yb.begin(), yb.begin() + nb);
  duals.seller_utility.assign(ys.begin(), ys.begin() + ns);
  assert(duals.feasible(market));
  assert(duals.objective() == value);

  return {std::move(matching), std::move(value), std::move(duals)};
}

PrimalSolution primal_from_matching(const Market& market, const Matching& matching) {
  PrimalSolution primal;
  const auto& edges = market.edges();
  primal.selected.assign(edges.size(), 0);
  int covered = 0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto [b, s] = edges[k];
    if (matching.partner_of_buyer(b) == s) {
      primal.selected[k] = 1;
      ++covered;
    }
  }
  if (covered != matching.size()) {
    throw LookupError("matching contains a pair that is not an edge");
  }
  return primal;
}

DualSolution dual_from_prices(const Market& market, const TickGrid& grid,
                              const MarketState& state) {
  DualSolution dual;
  dual.buyer_utility.reserve(market.buyer_count());
  dual.seller_utility.reserve(market.seller_count());
  for (int i = 0; i < market.buyer_count(); ++i) {
    Rational y = market.buyer_valuation(i) - grid.price(state.buyer_ticks[i]);
    if (y < 0) {
      throw PreconditionError("dual_from_prices: negative buyer utility at B" +
                              std::to_string(i));
    }
    dual.buyer_utility.push_back(std::move(y));
  }
  for (int j = 0; j < market.seller_count(); ++j) {
    Rational y = grid.price(state.seller_ticks[j]) - market.seller_valuation(j);
    if (y < 0) {
      throw PreconditionError("dual_from_prices: negative seller utility at S" +
                              std::to_string(j));
    }
    dual.seller_utility.push_back(std::move(y));
  }
  return dual;
}

CertificateReport verify_stable_iff_optimal(const Market& market, const TickGrid& grid,
                                            const MarketState& state) {
  CertificateReport report;

  PrimalSolution primal = primal_from_matching(market, state.matching);
  report.primal_feasible = primal.feasible(market);
  report.primal_value = primal.objective(market);

  DualSolution dual;
  for (int i = 0; i < market.buyer_count(); ++i) {
    dual.buyer_utility.push_back(market.buyer_valuation(i) - grid.price(state.buyer_ticks[i]));
  }
  for (int j = 0; j < market.seller_count(); ++j) {
    dual.seller_utility.push_back(grid.price(state.seller_ticks[j]) - market.seller_valuation(j));
  }
  report.dual_feasible = dual.feasible(market);
  report.dual_value = dual.objective();

  report.optimal_pair =
      report.primal_feasible && report.dual_feasible && report.primal_value == report.dual_value;
  return report;
}

Rational epsilon_sw_gap(const Market& market, const TickGrid& grid, const MarketState& state) {
  if (!is_epsilon_stable(market, grid, state, UnmatchedPriceRule::NearestTick)) {
    throw PreconditionError("epsilon_sw_gap: state is not epsilon-stable");
  }
  return max_weight_matching(market).value - social_welfare(market, state.matching);
}

std::optional<Rational> delta_threshold(const Market& market) {
  std::vector<Rational> vals;
  vals.reserve(market.agent_count());
  vals.insert(vals.end(), market.buyer_valuations().begin(), market.buyer_valuations().end());
  vals.insert(vals.end(), market.seller_valuations().begin(), market.seller_valuations().end());
  std::sort(vals.begin(), vals.end());
  std::optional<Rational> best;
  for (std::size_t k = 1; k < vals.size(); ++k) {
    Rational d = vals[k] - vals[k - 1];
    if (d == 0) continue;
    if (!best || d < *best) best = d;
  }
  return best;
}

}  // namespace doa
