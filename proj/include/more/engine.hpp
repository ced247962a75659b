#pragma once

// Reputation engine: time decay, rater-reliability review, constant-time
// incremental group aggregation, the linear-time reference aggregate, and
// the event-loop driver that replays an opinion database.
//
// Group state per agent is (distribution, opinion count, carried weight,
// last update time). The carried weight is the accumulated information mass
// of everything folded into the distribution so far; it decays with the
// state and makes the incremental update an exact weighted average whenever
// nothing decays between opinions.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "distribution.hpp"

namespace more {

// Engine time is integral. The I/O layer maps calendar dates to days, and
// the experiment maps years to 365-day blocks; the engine itself only ever
// sees differences of these values.
using Timestamp = std::int64_t;

struct DecayParams {
  double nu = 0.6;      // retention per decay step, in [0, 1]
  double kappa = 365.0; // grace period: gaps shorter than this do not decay

  void validate() const {
    if (!(nu >= 0.0 && nu <= 1.0))
      throw std::invalid_argument("decay rate nu must lie in [0,1]");
    if (!(kappa > 0.0))
      throw std::invalid_argument("grace period kappa must be positive");
  }
};

// Exponent of the decay factor for a time gap. Inside the grace period the
// exponent is 0 (note pow(0,0) == 1, so even nu == 0 is a no-op there);
// at the boundary it jumps to 2 and then grows linearly. The jump is part
// of the model's contract, not an artifact.
inline double decay_exponent(Timestamp from, Timestamp to, const DecayParams& p) {
  if (to < from) throw std::invalid_argument("decay cannot run backwards in time");
  const double gap = double(to - from);
  return gap < p.kappa ? 0.0 : 1.0 + gap / p.kappa;
}

// Drift toward flat: nu^delta of the original plus the rest flat.
inline Distribution decay(const Distribution& d, Timestamp from, Timestamp to,
                          const DecayParams& p) {
  p.validate();
  const double f = std::pow(p.nu, decay_exponent(from, to, p));
  return mix(f, d, flat(d.space()));
}

// Discount an opinion by its source's reliability: an unreliable rater's
// opinion is pulled toward flat before it carries any weight.
inline Distribution review(const Distribution& o, double reliability) {
  if (!(reliability >= 0.0 && reliability <= 1.0))
    throw std::invalid_argument("reliability must lie in [0,1]");
  return mix(reliability, o, flat(o.space()));
}

// Directed, timestamped assessment: rater's distribution over the ratee's
// quality.
struct Opinion {
  std::string rater;
  std::string ratee;
  Timestamp time = 0;
  Distribution value;
};

// Per-agent running aggregate.
struct GroupOpinionState {
  Distribution dist;
  std::int64_t count = 0;   // opinions folded in (zero-weight ones excluded)
  double weight = 0.0;      // carried information mass of `dist`
  Timestamp last_update = 0;
};

// One incremental update of a group state with an already-reviewed opinion.
//
// The state first decays to the opinion's time; the carried weight shrinks
// by the fraction of information the distribution lost (for an exactly flat
// state, where that ratio is 0/0, the small-deviation limit nu^(2*delta) is
// used, which keeps the no-decay case exact even through opinions that
// cancel to flat). The reviewed opinion then joins as a weighted average.
// A zero-weight (flat) opinion leaves everything but the clock untouched.
//
// WeightFn exists so tests can substitute scaled or sign-flipped weights;
// real callers use `certainty`.
template <class WeightFn = double (*)(const Distribution&)>
GroupOpinionState group_update_state(const GroupOpinionState& s,
                                     const Distribution& reviewed, Timestamp t,
                                     const DecayParams& p,
                                     WeightFn weight_fn = &certainty) {
  p.validate();
  require_same_space(s.dist, reviewed);
  if (t < s.last_update)
    throw std::invalid_argument("opinion predates the group state");

  const double delta = decay_exponent(s.last_update, t, p);
  const double f = std::pow(p.nu, delta);
  const Distribution decayed = mix(f, s.dist, flat(s.dist.space()));

  double carried = 0.0;
  if (s.weight != 0.0) {
    const double before = weight_fn(s.dist);
    const double ratio = before != 0.0 ? weight_fn(decayed) / before : f * f;
    carried = s.weight * ratio;
  }

  const double w = weight_fn(reviewed);
  if (w == 0.0) return GroupOpinionState{decayed, s.count, carried, t};

  const double total = carried + w;
  if (total == 0.0) return GroupOpinionState{decayed, s.count, carried, t};

  std::vector<double> v(decayed.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = (carried * decayed[i] + w * reviewed[i]) / total;
  return GroupOpinionState{Distribution(decayed.space(), std::move(v)),
                           s.count + 1, total, t};
}

// Linear-time reference aggregate: every stored opinion is reviewed with its
// rater's reliability, decayed from its own time to the query time, and the
// results are averaged with their remaining information as weights. Opinions
// that decayed all the way to flat carry zero weight and vanish; when
// everything has, the answer is flat.
template <class ReliabilityFn,
          class WeightFn = double (*)(const Distribution&)>
Distribution group_exact(const SpacePtr& space, const std::vector<Opinion>& ops,
                         Timestamp t, const DecayParams& p,
                         ReliabilityFn reliability_of,
                         WeightFn weight_fn = &certainty) {
  p.validate();
  std::vector<double> num(space->size(), 0.0);
  double den = 0.0;
  for (const Opinion& op : ops) {
    if (op.time > t)
      throw std::invalid_argument("opinion from the future in exact aggregate");
    const Distribution reviewed = review(op.value, reliability_of(op));
    const Distribution dec = decay(reviewed, op.time, t, p);
    const double w = weight_fn(dec);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < num.size(); ++i) num[i] += w * dec[i];
    den += w;
  }
  if (den == 0.0) return flat(space);
  for (double& v : num) v /= den;
  return Distribution(space, std::move(num));
}

inline Distribution group_exact(const SpacePtr& space, const std::vector<Opinion>& ops,
                                Timestamp t, const DecayParams& p,
                                double fixed_reliability) {
  return group_exact(space, ops, t, p,
                     [fixed_reliability](const Opinion&) { return fixed_reliability; });
}

// All agents' group states plus the engine parameters. Unknown agents read
// as flat initial states; they materialize lazily on first update.
class ReputationLedger {
 public:
  ReputationLedger(SpacePtr space, DecayParams params)
      : space_(std::move(space)), params_(params) {
    params_.validate();
    if (!space_) throw std::invalid_argument("ledger needs a space");
  }

  const SpacePtr& space() const { return space_; }
  const DecayParams& params() const { return params_; }

  // 1 minus the distance between the agent's (decayed) group opinion and the
  // ideal point mass. Doubles as the agent's reliability when rating others.
  double reputation(const std::string& agent, Timestamp t) const {
    const GroupOpinionState* s = find(agent);
    if (!s) return 1.0 - emd(flat(space_), target(space_));
    return 1.0 - emd(decay(s->dist, s->last_update, t, params_), target(space_));
  }

  // Group opinion decayed to the query time. Unknown agents are flat.
  Distribution group_opinion(const std::string& agent, Timestamp t) const {
    const GroupOpinionState* s = find(agent);
    if (!s) return flat(space_);
    return decay(s->dist, s->last_update, t, params_);
  }

  // Apply one opinion, reading the rater's reliability from its current
  // (decayed) state.
  void update(const Opinion& op) { update(op, reputation(op.rater, op.time)); }

  // Apply one opinion with an externally chosen rater reliability. Callers
  // that feed mutual simultaneous opinions read both reliabilities before
  // applying either update, so processing order cannot leak into results.
  void update(const Opinion& op, double rater_reliability) {
    if (op.rater == op.ratee)
      throw std::invalid_argument("agents do not rate themselves");
    if (*op.value.space() != *space_)
      throw std::invalid_argument("opinion space does not match ledger space");
    GroupOpinionState& s = ensure(op.ratee, op.time);
    if (op.time < s.last_update)
      throw std::invalid_argument("out-of-order opinion for agent " + op.ratee);
    const Distribution reviewed = review(op.value, rater_reliability);
    s = group_update_state(s, reviewed, op.time, params_);
  }

  const std::map<std::string, GroupOpinionState>& states() const { return states_; }

  // Snapshot restore path: install a state verbatim.
  void restore(const std::string& agent, GroupOpinionState s) {
    if (*s.dist.space() != *space_)
      throw std::invalid_argument("restored state space mismatch");
    states_.insert_or_assign(agent, std::move(s));
  }

 private:
  const GroupOpinionState* find(const std::string& agent) const {
    auto it = states_.find(agent);
    return it == states_.end() ? nullptr : &it->second;
  }

  GroupOpinionState& ensure(const std::string& agent, Timestamp t) {
    auto it = states_.find(agent);
    if (it == states_.end())
      it = states_.emplace(agent, GroupOpinionState{flat(space_), 0, 0.0, t}).first;
    return it->second;
  }

  SpacePtr space_;
  DecayParams params_;
  std::map<std::string, GroupOpinionState> states_;
};

struct OdbTraceRow {
  std::size_t index = 0;  // position in the sorted stream
  Timestamp time = 0;
  std::string ratee;
  double reputation = 0.0;  // ratee's reputation right after the update
};

struct OdbResult {
  ReputationLedger ledger;
  std::vector<OdbTraceRow> trace;
  std::vector<std::string> diagnostics;  // skipped records, one line each
};

// Replay a whole opinion database in ascending time (stable for ties),
// skipping malformed records with a diagnostic instead of aborting.
inline OdbResult process_odb(SpacePtr space, std::vector<Opinion> ops,
                             const DecayParams& params) {
  std::stable_sort(ops.begin(), ops.end(),
                   [](const Opinion& a, const Opinion& b) { return a.time < b.time; });
  OdbResult r{ReputationLedger(std::move(space), params), {}, {}};
  r.trace.reserve(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const Opinion& op = ops[i];
    try {
      r.ledger.update(op);
    } catch (const std::invalid_argument& e) {
      r.diagnostics.push_back("record " + std::to_string(i) + " (" + op.rater +
                              " -> " + op.ratee + "): " + e.what());
      continue;
    }
    r.trace.push_back(
        {i, op.time, op.ratee, r.ledger.reputation(op.ratee, op.time)});
  }
  return r;
}

}  // namespace more
