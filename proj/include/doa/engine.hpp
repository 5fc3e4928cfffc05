#pragma once

#include "doa/market.hpp"
#include "doa/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace doa {

/// FreeIncrement: a recognized agent may submit any improving price up to the
/// increment-rule cap and must then match if someone is interested.
/// UnitIncrement: prices move one tick at a time and a step is either a price
/// change or a match, never both; recognition is meant to be uniform random.
enum class Mechanism { FreeIncrement, UnitIncrement };

std::string to_string(Mechanism mechanism);
std::optional<Mechanism> parse_mechanism(const std::string& text);

struct MechanismConfig {
  Mechanism mechanism = Mechanism::FreeIncrement;
  Rational epsilon = Rational(1, 10);
  std::int64_t max_steps = 100000;
};

/// One recognized move: an optional price submission and/or a match target.
struct Action {
  AgentId actor;
  std::optional<Tick> price;
  std::optional<AgentId> match_with;

  bool operator==(const Action&) const = default;
};

enum class RunStatus { Converged, StepCapReached };

struct StepRecord {
  std::int64_t step = 0;  // 1-based
  Action action;
  std::optional<AgentId> displaced;
  int gamma = 0;
  std::int64_t bid_tick_sum = 0;
  std::int64_t offer_tick_sum = 0;
  int active_count = 0;

  bool operator==(const StepRecord&) const = default;
};

struct Trace {
  MechanismConfig config;
  MarketState start;
  std::vector<StepRecord> steps;
  RunStatus status = RunStatus::Converged;
  MarketState final_state;
};

/// Phi_P = sum of offers + sum of (1 - bids); decreases as the book tightens.
Rational phi_p(const Market& market, const TickGrid& grid, std::int64_t bid_tick_sum,
               std::int64_t offer_tick_sum);
/// Phi = sum of all submitted prices.
Rational phi(const TickGrid& grid, std::int64_t bid_tick_sum, std::int64_t offer_tick_sum);

/// Step semantics for one run. Holds the market state, the activity labels of
/// unmatched agents, and the running counters (gamma, tick sums, step count).
///
/// Activity: a fresh label is Active iff the agent has a legal improving
/// submission or an interested counterpart. Fresh labels are computed for an
/// agent when it is displaced and for the actor after its own move; every
/// other unmatched agent can only lose the Active label, never regain it
/// spontaneously. An inactive agent re-enters play when someone matches it.
class Engine {
 public:
  Engine(const Market& market, MechanismConfig config);
  /// Starts from an explicit state; throws PreconditionError unless the state
  /// is valid and every edge has bid <= offer (a valid starting state).
  Engine(const Market& market, MechanismConfig config, MarketState start);

  const Market& market() const { return *market_; }
  const TickGrid& grid() const { return grid_; }
  const MechanismConfig& config() const { return config_; }
  const MarketState& state() const { return state_; }

  std::int64_t steps_taken() const { return step_; }
  int gamma() const { return state_.matching.size(); }
  std::int64_t bid_tick_sum() const { return bid_sum_; }
  std::int64_t offer_tick_sum() const { return offer_sum_; }
  int active_count() const { return active_count_; }
  bool converged() const { return active_count_ == 0; }

  bool is_active(AgentId id) const;
  /// Active agents in canonical order (buyers by index, then sellers).
  std::vector<AgentId> active_agents() const;

  /// Highest legal bid for a buyer: min(lowest neighbor offer + 1 tick,
  /// lowest unmatched-neighbor offer, floor(val/eps)). Mirror for sellers.
  Tick bid_increment_cap(int buyer) const;
  Tick offer_decrement_floor(int seller) const;

  /// Counterparts interested in the agent were it to submit `hypothetical`.
  std::vector<AgentId> interested_in(AgentId id, Tick hypothetical) const;

  /// Everything the agent may do right now. Throws ScheduleError when the
  /// agent is matched or inactive (it cannot be recognized).
  std::vector<Action> legal_actions(AgentId id) const;

  /// Applies one recognized move. Throws RuleViolation, naming the broken
  /// rule, if the action is not legal.
  StepRecord apply(const Action& action);

  /// Phi_P change (in ticks) of the agent's minimal improving action; used by
  /// the stalling scheduler. nullopt when the agent is not active.
  std::optional<std::int64_t> minimal_action_phi_p_delta(AgentId id) const;

 private:
  void init_labels();
  bool state_based_active(AgentId id) const;
  void relabel_after(AgentId actor, std::optional<AgentId> target,
                     std::optional<AgentId> displaced);
  void set_flag(AgentId id, bool active);
  bool flag(AgentId id) const;
  std::vector<AgentId> match_targets(const std::vector<AgentId>& interested) const;

  const Market* market_;
  TickGrid grid_;
  MechanismConfig config_;
  MarketState state_;
  std::vector<Tick> buyer_cap_;
  std::vector<Tick> seller_floor_;
  std::vector<std::uint8_t> buyer_active_;
  std::vector<std::uint8_t> seller_active_;
  std::int64_t step_ = 0;
  std::int64_t bid_sum_ = 0;
  std::int64_t offer_sum_ = 0;
  int active_count_ = 0;
};

class Scheduler;
class StrategySet;

/// Runs the mechanism until no agent is active or the step cap is reached.
/// Strategies are untrusted: an illegal chosen action aborts the run with
/// RuleViolation.
Trace run(const Market& market, const MechanismConfig& config, Scheduler& scheduler,
          StrategySet& strategies, std::optional<MarketState> start = std::nullopt);

/// Step-by-step audit of a trace: replays it through a fresh engine and
/// checks the rule-level invariants along the way.
struct TraceCheckReport {
  bool replay_ok = true;             // every action legal, every record reproduced
  bool eps_conditions_ok = true;     // bid - offer <= 1 tick on edges; pairs at equal prices
  bool gamma_monotone_ok = true;     // match count never drops
  bool lemma1_ok = true;             // complete graphs: bid > offer only inside matched pairs
  bool phi_window_ok = true;         // complete + free increment: Phi_P behavior per gamma window
  bool terminal_eps_stable_ok = true;  // converged runs end epsilon-stable (nearest tick)
  bool unit_increment_ok = true;     // unit mechanism: every price move is one tick
  bool active_monotone_ok = true;    // unit mechanism: active count never grows

  bool lemma1_applicable = false;
  bool phi_applicable = false;
  bool terminal_applicable = false;

  std::vector<std::string> violations;

  bool ok() const {
    return replay_ok && eps_conditions_ok && gamma_monotone_ok && lemma1_ok && phi_window_ok &&
           terminal_eps_stable_ok && unit_increment_ok && active_monotone_ok;
  }
};

TraceCheckReport check_trace_invariants(const Market& market, const Trace& trace);

}  // namespace doa
