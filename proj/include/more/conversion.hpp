#pragma once

// Match scores to mutual opinions. Three strategies:
//   naive : winner takes the whole distribution, draws are flat
//   mv    : goal-ratio split of the probability mass
//   gmv   : goal ratio after gifting both sides X bonus goals, optionally
//           rescaled so the corpus-wide extremes span [0, 1]
// Every match yields two opinions at the match date: the away side rates the
// home side and vice versa.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "engine.hpp"

namespace more {

struct MatchResult {
  Timestamp date = 0;
  std::string season;  // used only to scope the points baseline
  std::string home;
  std::string away;
  int home_goals = 0;
  int away_goals = 0;

  void validate() const {
    if (home.empty() || away.empty() || home == away)
      throw std::invalid_argument("match needs two distinct team names");
    if (home_goals < 0 || away_goals < 0)
      throw std::invalid_argument("goals cannot be negative");
  }
  int margin() const { return home_goals - away_goals; }
};

enum class Strategy { Naive, MV, GMV };

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Naive: return "naive";
    case Strategy::MV: return "mv";
    case Strategy::GMV: return "gmv";
  }
  return "?";
}

inline Strategy strategy_from_name(const std::string& name) {
  if (name == "naive") return Strategy::Naive;
  if (name == "mv") return Strategy::MV;
  if (name == "gmv") return Strategy::GMV;
  throw std::invalid_argument("unknown strategy: " + name);
}

struct ConversionConfig {
  Strategy strategy = Strategy::GMV;
  double gift = 1.0;      // GMV bonus goals X
  bool normalize = true;  // GMV only: rescale by corpus extremes

  void validate() const {
    if (strategy == Strategy::GMV && !(gift > 0.0))
      throw std::invalid_argument("GMV gift must be positive");
  }
};

// Corpus-wide extremes of the GMV good-probability, both directions.
struct NormBounds {
  double lo = 0.0;
  double hi = 1.0;
};

using OpinionPair = std::pair<Opinion, Opinion>;  // {about home, about away}

namespace detail {
// Binary opinion with the given good-probability; index 0 is the bad term.
inline Distribution binary_opinion(const SpacePtr& space, double p_good) {
  return Distribution(space, {1.0 - p_good, p_good});
}

inline OpinionPair mutual(const SpacePtr& space, const MatchResult& m,
                          double good_home, double good_away) {
  return {Opinion{m.away, m.home, m.date, binary_opinion(space, good_home)},
          Opinion{m.home, m.away, m.date, binary_opinion(space, good_away)}};
}
}  // namespace detail

// Winner-only view: win is a point mass on good, loss on bad, draws carry no
// information at all (flat, hence zero weight downstream).
inline OpinionPair convert_naive(const SpacePtr& space, const MatchResult& m) {
  m.validate();
  if (m.home_goals > m.away_goals) return detail::mutual(space, m, 1.0, 0.0);
  if (m.home_goals < m.away_goals) return detail::mutual(space, m, 0.0, 1.0);
  return detail::mutual(space, m, 0.5, 0.5);
}

// Goal-ratio split; a goalless draw is flat.
inline OpinionPair convert_mv(const SpacePtr& space, const MatchResult& m) {
  m.validate();
  const double s = double(m.home_goals + m.away_goals);
  if (s == 0.0) return detail::mutual(space, m, 0.5, 0.5);
  return detail::mutual(space, m, double(m.home_goals) / s,
                        double(m.away_goals) / s);
}

// Goal ratio with X gift goals per side: softens blowouts, keeps every
// good-probability strictly inside (0, 1), and collapses to the goal ratio
// as X goes to 0 and to total ignorance as X grows.
inline double gmv_good_probability(int own_goals, int other_goals, double gift) {
  if (!(gift > 0.0)) throw std::invalid_argument("GMV gift must be positive");
  return (double(own_goals) + gift) /
         (double(own_goals + other_goals) + 2.0 * gift);
}

inline OpinionPair convert_gmv(const SpacePtr& space, const MatchResult& m,
                               double gift) {
  m.validate();
  return detail::mutual(space, m,
                        gmv_good_probability(m.home_goals, m.away_goals, gift),
                        gmv_good_probability(m.away_goals, m.home_goals, gift));
}

// Pre-pass over a corpus: extremes of the GMV good-probability across both
// opinion directions of every match.
inline NormBounds compute_norm_bounds(const std::vector<MatchResult>& matches,
                                      double gift) {
  if (matches.empty())
    throw std::invalid_argument("normalization bounds need a non-empty corpus");
  NormBounds b{1.0, 0.0};
  for (const MatchResult& m : matches) {
    const double ph = gmv_good_probability(m.home_goals, m.away_goals, gift);
    const double pa = gmv_good_probability(m.away_goals, m.home_goals, gift);
    b.lo = std::min({b.lo, ph, pa});
    b.hi = std::max({b.hi, ph, pa});
  }
  return b;
}

// Affine rescale of a good-probability onto [0,1] by the corpus extremes.
// A degenerate corpus (all identical) has nothing to spread: 0.5.
// Out-of-range inputs (a probability from outside the bounds corpus) clamp.
inline double gmv_normalize(double p_good, const NormBounds& b) {
  if (b.hi == b.lo) return 0.5;
  const double clamped = std::clamp(p_good, b.lo, b.hi);
  return (clamped - b.lo) / (b.hi - b.lo);
}

// Strategy dispatch. `bounds` is consulted only for normalized GMV.
inline OpinionPair convert(const SpacePtr& space, const MatchResult& m,
                           const ConversionConfig& cfg,
                           const NormBounds* bounds = nullptr) {
  cfg.validate();
  switch (cfg.strategy) {
    case Strategy::Naive: return convert_naive(space, m);
    case Strategy::MV: return convert_mv(space, m);
    case Strategy::GMV: {
      OpinionPair raw = convert_gmv(space, m, cfg.gift);
      if (cfg.normalize && bounds) {
        const double gh = gmv_normalize(raw.first.value[1], *bounds);
        const double ga = gmv_normalize(raw.second.value[1], *bounds);
        return detail::mutual(space, m, gh, ga);
      }
      return raw;
    }
  }
  throw std::logic_error("unreachable strategy");
}

}  // namespace more
