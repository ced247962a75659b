#pragma once

// Relative strength, three-way outcome prediction, and the 3/1/0 points
// baseline the engine is compared against.

#include <stdexcept>
#include <string>
#include <unordered_map>

#include "conversion.hpp"

namespace more {

enum class Outcome { HomeWin, Draw, AwayWin };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::HomeWin: return "home";
    case Outcome::Draw: return "draw";
    case Outcome::AwayWin: return "away";
  }
  return "?";
}

inline Outcome actual_outcome(const MatchResult& m) {
  if (m.home_goals > m.away_goals) return Outcome::HomeWin;
  if (m.home_goals < m.away_goals) return Outcome::AwayWin;
  return Outcome::Draw;
}

// Home share of the combined reputation mass. Two never-rated agents (0/0)
// read as perfectly balanced.
inline double relative_strength(double rep_home, double rep_away) {
  if (!(rep_home >= 0.0 && rep_home <= 1.0) ||
      !(rep_away >= 0.0 && rep_away <= 1.0))
    throw std::invalid_argument("reputations must lie in [0,1]");
  const double total = rep_home + rep_away;
  if (total == 0.0) return 0.5;
  return rep_home / total;
}

struct PredictionConfig {
  double epsilon = 0.05;  // half-width of the draw band around 1/2

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 0.5))
      throw std::invalid_argument("draw band half-width must lie in (0, 0.5)");
  }
};

// Three intervals around 1/2: clearly stronger home side wins, clearly
// stronger away side wins, anything inside the band is called a draw.
inline Outcome predict(double r, const PredictionConfig& cfg) {
  cfg.validate();
  if (!(r >= 0.0 && r <= 1.0))
    throw std::invalid_argument("relative strength must lie in [0,1]");
  if (r > 0.5 + cfg.epsilon) return Outcome::HomeWin;
  if (r < 0.5 - cfg.epsilon) return Outcome::AwayWin;
  return Outcome::Draw;
}

// Season-scoped accumulated points: 3 per win, 1 per draw. The baseline
// predicts whichever side holds strictly more points, and a draw on ties.
class LeagueTable {
 public:
  int points(const std::string& season, const std::string& team) const {
    auto it = points_.find(key(season, team));
    return it == points_.end() ? 0 : it->second;
  }

  void update(const MatchResult& m) {
    m.validate();
    switch (actual_outcome(m)) {
      case Outcome::HomeWin: points_[key(m.season, m.home)] += 3; break;
      case Outcome::AwayWin: points_[key(m.season, m.away)] += 3; break;
      case Outcome::Draw:
        points_[key(m.season, m.home)] += 1;
        points_[key(m.season, m.away)] += 1;
        break;
    }
  }

  Outcome predict(const MatchResult& m) const {
    const int h = points(m.season, m.home);
    const int a = points(m.season, m.away);
    if (h > a) return Outcome::HomeWin;
    if (a > h) return Outcome::AwayWin;
    return Outcome::Draw;
  }

 private:
  // Team names never contain control characters; unit separator is safe.
  static std::string key(const std::string& season, const std::string& team) {
    return season + '\x1f' + team;
  }
  std::unordered_map<std::string, int> points_;
};

}  // namespace more
