#pragma once

#include "doa/rational.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace doa {

enum class Side : std::uint8_t { Buyer, Seller };

/// Identifies one agent: a side and an index within that side.
struct AgentId {
  Side side = Side::Buyer;
  std::int32_t index = 0;

  static AgentId buyer(std::int32_t i) { return {Side::Buyer, i}; }
  static AgentId seller(std::int32_t i) { return {Side::Seller, i}; }

  auto operator<=>(const AgentId&) const = default;
};

/// "B3" / "S0".
std::string to_string(AgentId id);
std::optional<AgentId> parse_agent(const std::string& text);

/// The epsilon price grid. All submitted prices are integer multiples of
/// epsilon; the top tick is floor(1/epsilon) so every grid price stays in
/// [0, 1]. A buyer can bid at most floor(val/eps) ticks; a seller can offer
/// no less than ceil(val/eps) ticks, clamped to the top tick for valuations
/// that lie above the highest grid price.
class TickGrid {
 public:
  explicit TickGrid(Rational epsilon);

  const Rational& epsilon() const { return epsilon_; }
  Tick top() const { return top_; }

  Rational price(Tick t) const { return Rational(t) * epsilon_; }

  /// Exact tick of a price, or nullopt if the price is off-grid.
  std::optional<Tick> tick_of(const Rational& price) const;

  Tick buyer_cap(const Rational& valuation) const;
  Tick seller_floor(const Rational& valuation) const;

  bool operator==(const TickGrid& other) const { return epsilon_ == other.epsilon_; }

 private:
  Rational epsilon_;
  Tick top_;
};

/// A bipartite trading market: unit-demand buyers, unit-supply sellers,
/// valuations in [0, 1], and the set of buyer-seller pairs allowed to trade.
class Market {
 public:
  Market(std::vector<Rational> buyer_valuations, std::vector<Rational> seller_valuations,
         std::vector<std::pair<int, int>> edges, std::string label = "");

  int buyer_count() const { return static_cast<int>(buyer_vals_.size()); }
  int seller_count() const { return static_cast<int>(seller_vals_.size()); }
  /// n = |buyers| + |sellers|.
  int agent_count() const { return buyer_count() + seller_count(); }
  /// m = |edges|.
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const Rational& buyer_valuation(int i) const;
  const Rational& seller_valuation(int j) const;
  const Rational& valuation(AgentId id) const;

  const std::vector<Rational>& buyer_valuations() const { return buyer_vals_; }
  const std::vector<Rational>& seller_valuations() const { return seller_vals_; }

  /// Sorted, duplicate-free (buyer, seller) index pairs.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool has_edge(int buyer, int seller) const;

  std::span<const int> buyer_neighbors(int buyer) const;
  std::span<const int> seller_neighbors(int seller) const;

  bool is_complete_bipartite() const;

  const std::string& label() const { return label_; }

  bool operator==(const Market& other) const;

 private:
  std::vector<Rational> buyer_vals_;
  std::vector<Rational> seller_vals_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> buyer_nbrs_;
  std::vector<std::vector<int>> seller_nbrs_;
  std::string label_;
};

/// A matching between buyers and sellers; each agent appears at most once.
class Matching {
 public:
  Matching() = default;
  Matching(int buyer_count, int seller_count);

  int size() const { return pair_count_; }
  bool empty() const { return pair_count_ == 0; }

  bool buyer_matched(int i) const { return of_buyer_[i] >= 0; }
  bool seller_matched(int j) const { return of_seller_[j] >= 0; }
  bool matched(AgentId id) const;

  /// Partner seller of a buyer (or -1), and vice versa.
  int partner_of_buyer(int i) const { return of_buyer_[i]; }
  int partner_of_seller(int j) const { return of_seller_[j]; }
  std::optional<AgentId> partner(AgentId id) const;

  void add(int buyer, int seller);
  void erase(int buyer, int seller);

  /// Pairs sorted by buyer index.
  std::vector<std::pair<int, int>> pairs() const;

  bool operator==(const Matching& other) const = default;

 private:
  std::vector<int> of_buyer_;
  std::vector<int> of_seller_;
  int pair_count_ = 0;
};

/// Prices (as ticks) for every agent plus the current matching.
struct MarketState {
  std::vector<Tick> buyer_ticks;
  std::vector<Tick> seller_ticks;
  Matching matching;

  Tick tick_of(AgentId id) const {
    return id.side == Side::Buyer ? buyer_ticks[id.index] : seller_ticks[id.index];
  }

  bool operator==(const MarketState& other) const = default;
};

/// Everyone reveals nothing: buyers bid 0, sellers offer the top grid price,
/// nobody is matched.
MarketState zero_information_state(const Market& market, const TickGrid& grid);

/// Outcome of the validity check. a1: prices bounded by valuations (weak),
/// a2: matches only along edges, a3: within each matched pair the bid covers
/// the offer.
struct ValidityReport {
  bool prices_within_valuations = true;       // a1
  bool matches_on_edges = true;               // a2
  bool bids_cover_offers = true;              // a3
  std::vector<AgentId> price_violations;
  std::vector<std::pair<int, int>> edge_violations;
  std::vector<std::pair<int, int>> spread_violations;

  bool ok() const { return prices_within_valuations && matches_on_edges && bids_cover_offers; }
};

/// Throws GridError if any tick lies outside [0, top].
ValidityReport validate_state(const Market& market, const TickGrid& grid, const MarketState& state);

/// Matched buyer: val - price; matched seller: price - val; unmatched: 0.
/// Throws LookupError for an unknown agent.
Rational utility(const Market& market, const TickGrid& grid, const MarketState& state, AgentId id);

/// Sum of val(B) - val(S) over matched pairs. Throws LookupError if a pair
/// is not an edge of the market.
Rational social_welfare(const Market& market, const Matching& matching);

/// Walrasian check: every edge has bid <= offer, every unmatched agent sits
/// exactly at its valuation, every matched pair trades at one price.
bool is_stable(const Market& market, const TickGrid& grid, const MarketState& state);

/// How condition a2 (unmatched agents priced at their valuation) is read for
/// epsilon-stability. ExactValuation demands price == valuation; NearestTick
/// accepts the closest grid price the agent can legally submit (buyer at
/// floor(val/eps), seller at ceil(val/eps)), which is the terminal condition
/// the mechanism can actually reach when valuations are off-grid.
enum class UnmatchedPriceRule { ExactValuation, NearestTick };

bool is_epsilon_stable(const Market& market, const TickGrid& grid, const MarketState& state,
                       UnmatchedPriceRule rule = UnmatchedPriceRule::ExactValuation);

enum class StabilityKind { Stable, EpsilonStable };

/// Excludes the corner cases: for stable states every edge between two
/// unmatched agents must have bid < offer; epsilon-stable states must in
/// addition have bid <= offer on every edge with at least one unmatched
/// endpoint. Throws PreconditionError when the state is not (epsilon-)stable.
bool is_well_behaved(const Market& market, const TickGrid& grid, const MarketState& state,
                     StabilityKind kind);

/// Counterparts the agent may currently match with: neighbors on the other
/// side whose price gap is >= 0 if they are unmatched, >= one tick if they
/// are matched.
std::vector<AgentId> interested_set(const Market& market, const MarketState& state, AgentId id);

}  // namespace doa
