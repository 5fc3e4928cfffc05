#include "doa/market.hpp"

#include "doa/errors.hpp"

#include <algorithm>
#include <set>

namespace doa {

std::string to_string(AgentId id) {
  return (id.side == Side::Buyer ? "B" : "S") + std::to_string(id.index);
}

std::optional<AgentId> parse_agent(const std::string& text) {
  if (text.size() < 2) return std::nullopt;
  Side side;
  if (text[0] == 'B')
    side = Side::Buyer;
  else if (text[0] == 'S')
    side = Side::Seller;
  else
    return std::nullopt;
  for (std::size_t i = 1; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
  }
  try {
    return AgentId{side, std::stoi(text.substr(1))};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

TickGrid::TickGrid(Rational epsilon) : epsilon_(std::move(epsilon)) {
  if (epsilon_ <= 0 || epsilon_ > 1) {
    throw GridError("epsilon must lie in (0, 1], got " + format_exact(epsilon_));
  }
  top_ = to_int64(floor_to_int(Rational(1) / epsilon_));
}

std::optional<Tick> TickGrid::tick_of(const Rational& price) const {
  Rational q = price / epsilon_;
  if (denominator(q) != 1) return std::nullopt;
  Tick t = to_int64(numerator(q));
  if (t < 0 || t > top_) return std::nullopt;
  return t;
}

Tick TickGrid::buyer_cap(const Rational& valuation) const {
  return to_int64(floor_to_int(valuation / epsilon_));
}

Tick TickGrid::seller_floor(const Rational& valuation) const {
  Tick t = to_int64(ceil_to_int(valuation / epsilon_));
  return std::min(t, top_);
}

Market::Market(std::vector<Rational> buyer_valuations, std::vector<Rational> seller_valuations,
               std::vector<std::pair<int, int>> edges, std::string label)
    : buyer_vals_(std::move(buyer_valuations)),
      seller_vals_(std::move(seller_valuations)),
      edges_(std::move(edges)),
      label_(std::move(label)) {
  for (const auto& v : buyer_vals_) {
    if (v < 0 || v > 1) throw Error("buyer valuation outside [0, 1]: " + format_exact(v));
  }
  for (const auto& v : seller_vals_) {
    if (v < 0 || v > 1) throw Error("seller valuation outside [0, 1]: " + format_exact(v));
  }
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    auto [b, s] = edges_[k];
    if (b < 0 || b >= buyer_count() || s < 0 || s >= seller_count()) {
      throw Error("edge (" + std::to_string(b) + ", " + std::to_string(s) +
                  ") references a missing agent");
    }
    if (k > 0 && edges_[k] == edges_[k - 1]) {
      throw Error("duplicate edge (" + std::to_string(b) + ", " + std::to_string(s) + ")");
    }
  }
  buyer_nbrs_.resize(buyer_vals_.size());
  seller_nbrs_.resize(seller_vals_.size());
  for (auto [b, s] : edges_) {
    buyer_nbrs_[b].push_back(s);
    seller_nbrs_[s].push_back(b);
  }
  for (auto& v : buyer_nbrs_) std::sort(v.begin(), v.end());
  for (auto& v : seller_nbrs_) std::sort(v.begin(), v.end());
}

const Rational& Market::buyer_valuation(int i) const {
  if (i < 0 || i >= buyer_count()) throw LookupError("unknown buyer B" + std::to_string(i));
  return buyer_vals_[i];
}

const Rational& Market::seller_valuation(int j) const {
  if (j < 0 || j >= seller_count()) throw LookupError("unknown seller S" + std::to_string(j));
  return seller_vals_[j];
}

const Rational& Market::valuation(AgentId id) const {
  return id.side == Side::Buyer ? buyer_valuation(id.index) : seller_valuation(id.index);
}

bool Market::has_edge(int buyer, int seller) const {
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(buyer, seller));
}

std::span<const int> Market::buyer_neighbors(int buyer) const {
  if (buyer < 0 || buyer >= buyer_count()) throw LookupError("unknown buyer B" + std::to_string(buyer));
  return buyer_nbrs_[buyer];
}

std::span<const int> Market::seller_neighbors(int seller) const {
  if (seller < 0 || seller >= seller_count())
    throw LookupError("unknown seller S" + std::to_string(seller));
  return seller_nbrs_[seller];
}

bool Market::is_complete_bipartite() const {
  return edge_count() == buyer_count() * seller_count();
}

bool Market::operator==(const Market& other) const {
  return buyer_vals_ == other.buyer_vals_ && seller_vals_ == other.seller_vals_ &&
         edges_ == other.edges_ && label_ == other.label_;
}

Matching::Matching(int buyer_count, int seller_count)
    : of_buyer_(buyer_count, -1), of_seller_(seller_count, -1) {}

bool Matching::matched(AgentId id) const {
  return id.side == Side::Buyer ? buyer_matched(id.index) : seller_matched(id.index);
}

std::optional<AgentId> Matching::partner(AgentId id) const {
  if (id.side == Side::Buyer) {
    int j = of_buyer_[id.index];
    if (j < 0) return std::nullopt;
    return AgentId::seller(j);
  }
  int i = of_seller_[id.index];
  if (i < 0) return std::nullopt;
  return AgentId::buyer(i);
}

void Matching::add(int buyer, int seller) {
  if (of_buyer_[buyer] >= 0 || of_seller_[seller] >= 0) {
    throw Error("agent already matched in pair (" + std::to_string(buyer) + ", " +
                std::to_string(seller) + ")");
  }
  of_buyer_[buyer] = seller;
  of_seller_[seller] = buyer;
  ++pair_count_;
}

void Matching::erase(int buyer, int seller) {
  if (of_buyer_[buyer] != seller) {
    throw LookupError("pair (" + std::to_string(buyer) + ", " + std::to_string(seller) +
                      ") not in matching");
  }
  of_buyer_[buyer] = -1;
  of_seller_[seller] = -1;
  --pair_count_;
}

std::vector<std::pair<int, int>> Matching::pairs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(pair_count_);
  for (int i = 0; i < static_cast<int>(of_buyer_.size()); ++i) {
    if (of_buyer_[i] >= 0) out.emplace_back(i, of_buyer_[i]);
  }
  return out;
}

MarketState zero_information_state(const Market& market, const TickGrid& grid) {
  MarketState st;
  st.buyer_ticks.assign(market.buyer_count(), 0);
  st.seller_ticks.assign(market.seller_count(), grid.top());
  st.matching = Matching(market.buyer_count(), market.seller_count());
  return st;
}

namespace {

void check_shape(const Market& market, const MarketState& state) {
  if (static_cast<int>(state.buyer_ticks.size()) != market.buyer_count() ||
      static_cast<int>(state.seller_ticks.size()) != market.seller_count()) {
    throw Error("state shape does not match market");
  }
}

}  // namespace

ValidityReport validate_state(const Market& market, const TickGrid& grid,
                              const MarketState& state) {
  check_shape(market, state);
  for (int i = 0; i < market.buyer_count(); ++i) {
    Tick t = state.buyer_ticks[i];
    if (t < 0 || t > grid.top())
      throw GridError("buyer B" + std::to_string(i) + " tick off grid: " + std::to_string(t));
  }
  for (int j = 0; j < market.seller_count(); ++j) {
    Tick t = state.seller_ticks[j];
    if (t < 0 || t > grid.top())
      throw GridError("seller S" + std::to_string(j) + " tick off grid: " + std::to_string(t));
  }

  ValidityReport report;
  for (int i = 0; i < market.buyer_count(); ++i) {
    if (state.buyer_ticks[i] > grid.buyer_cap(market.buyer_valuation(i))) {
      report.prices_within_valuations = false;
      report.price_violations.push_back(AgentId::buyer(i));
    }
  }
  for (int j = 0; j < market.seller_count(); ++j) {
    if (state.seller_ticks[j] < grid.seller_floor(market.seller_valuation(j))) {
      report.prices_within_valuations = false;
      report.price_violations.push_back(AgentId::seller(j));
    }
  }
  for (auto [b, s] : state.matching.pairs()) {
    if (!market.has_edge(b, s)) {
      report.matches_on_edges = false;
      report.edge_violations.emplace_back(b, s);
    }
    if (state.buyer_ticks[b] < state.seller_ticks[s]) {
      report.bids_cover_offers = false;
      report.spread_violations.emplace_back(b, s);
    }
  }
  return report;
}

Rational utility(const Market& market, const TickGrid& grid, const MarketState& state,
                 AgentId id) {
  check_shape(market, state);
  const Rational& val = market.valuation(id);  // throws LookupError on bad id
  if (!state.matching.matched(id)) return Rational(0);
  Rational price = grid.price(state.tick_of(id));
  return id.side == Side::Buyer ? val - price : price - val;
}

Rational social_welfare(const Market& market, const Matching& matching) {
  Rational sw = 0;
  for (auto [b, s] : matching.pairs()) {
    if (!market.has_edge(b, s)) {
      throw LookupError("matched pair (B" + std::to_string(b) + ", S" + std::to_string(s) +
                        ") is not an edge");
    }
    sw += market.buyer_valuation(b) - market.seller_valuation(s);
  }
  return sw;
}

namespace {

void require_valid(const Market& market, const TickGrid& grid, const MarketState& state,
                   const char* op) {
  if (!validate_state(market, grid, state).ok()) {
    throw PreconditionError(std::string(op) + ": state is not valid");
  }
}

bool unmatched_at_valuations(const Market& market, const TickGrid& grid, const MarketState& state,
                             UnmatchedPriceRule rule) {
  for (int i = 0; i < market.buyer_count(); ++i) {
    if (state.matching.buyer_matched(i)) continue;
    if (rule == UnmatchedPriceRule::ExactValuation) {
      if (grid.price(state.buyer_ticks[i]) != market.buyer_valuation(i)) return false;
    } else {
      if (state.buyer_ticks[i] != grid.buyer_cap(market.buyer_valuation(i))) return false;
    }
  }
  for (int j = 0; j < market.seller_count(); ++j) {
    if (state.matching.seller_matched(j)) continue;
    if (rule == UnmatchedPriceRule::ExactValuation) {
      if (grid.price(state.seller_ticks[j]) != market.seller_valuation(j)) return false;
    } else {
      if (state.seller_ticks[j] != grid.seller_floor(market.seller_valuation(j))) return false;
    }
  }
  return true;
}

bool matched_pairs_at_equal_prices(const MarketState& state) {
  for (auto [b, s] : state.matching.pairs()) {
    if (state.buyer_ticks[b] != state.seller_ticks[s]) return false;
  }
  return true;
}

}  // namespace

bool is_stable(const Market& market, const TickGrid& grid, const MarketState& state) {
  require_valid(market, grid, state, "is_stable");
  for (auto [b, s] : market.edges()) {
    if (state.buyer_ticks[b] > state.seller_ticks[s]) return false;
  }
  return unmatched_at_valuations(market, grid, state, UnmatchedPriceRule::ExactValuation) &&
         matched_pairs_at_equal_prices(state);
}

bool is_epsilon_stable(const Market& market, const TickGrid& grid, const MarketState& state,
                       UnmatchedPriceRule rule) {
  require_valid(market, grid, state, "is_epsilon_stable");
  for (auto [b, s] : market.edges()) {
    if (state.buyer_ticks[b] - state.seller_ticks[s] > 1) return false;
  }
  return unmatched_at_valuations(market, grid, state, rule) &&
         matched_pairs_at_equal_prices(state);
}

bool is_well_behaved(const Market& market, const TickGrid& grid, const MarketState& state,
                     StabilityKind kind) {
  if (kind == StabilityKind::Stable) {
    if (!is_stable(market, grid, state)) {
      throw PreconditionError("is_well_behaved: state is not stable");
    }
  } else {
    if (!is_epsilon_stable(market, grid, state, UnmatchedPriceRule::ExactValuation)) {
      throw PreconditionError("is_well_behaved: state is not epsilon-stable");
    }
  }
  for (auto [b, s] : market.edges()) {
    bool bm = state.matching.buyer_matched(b);
    bool sm = state.matching.seller_matched(s);
    // a1: a zero-surplus pair left unmatched must keep a strict spread.
    if (!bm && !sm && state.buyer_ticks[b] >= state.seller_ticks[s]) return false;
    // a2 (epsilon-stable only): nobody half-matched may sit above the offer.
    if (kind == StabilityKind::EpsilonStable && (!bm || !sm) &&
        state.buyer_ticks[b] > state.seller_ticks[s]) {
      return false;
    }
  }
  return true;
}

std::vector<AgentId> interested_set(const Market& market, const MarketState& state, AgentId id) {
  std::vector<AgentId> out;
  if (id.side == Side::Buyer) {
    Tick bid = state.buyer_ticks[id.index];
    for (int s : market.buyer_neighbors(id.index)) {
      Tick offer = state.seller_ticks[s];
      bool matched = state.matching.seller_matched(s);
      if ((!matched && bid >= offer) || (matched && bid - offer >= 1)) {
        out.push_back(AgentId::seller(s));
      }
    }
  } else {
    Tick offer = state.seller_ticks[id.index];
    for (int b : market.seller_neighbors(id.index)) {
      Tick bid = state.buyer_ticks[b];
      bool matched = state.matching.buyer_matched(b);
      if ((!matched && bid >= offer) || (matched && bid - offer >= 1)) {
        out.push_back(AgentId::buyer(b));
      }
    }
  }
  return out;
}

}  // namespace doa
