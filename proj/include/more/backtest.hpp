#pragma once

// Walk-forward replay of a match corpus. Every match is predicted strictly
// from pre-match state (reputations decayed to the match date, current
// season points), then folded into the engine and the baseline table.
// Matches are binned by relative strength and summarized as per-bin home and
// away success frequencies plus overall three-way accuracies.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "prediction.hpp"

namespace more {

inline constexpr std::size_t kBins = 10;

// Interval index for a relative strength: I_1 = [0, 0.1), ..., I_10 = [0.9, 1].
inline std::size_t bin_of(double r) {
  if (!(r >= 0.0 && r <= 1.0))
    throw std::invalid_argument("relative strength must lie in [0,1]");
  if (r == 1.0) return kBins;
  return std::size_t(std::floor(r * 10.0)) + 1;
}

struct BinStats {
  std::array<std::size_t, kBins> total{};
  std::array<std::size_t, kBins> home_wins{};
  std::array<std::size_t, kBins> away_wins{};
  std::array<std::size_t, kBins> draws{};

  void record(std::size_t bin, Outcome actual) {
    const std::size_t i = bin - 1;
    ++total[i];
    switch (actual) {
      case Outcome::HomeWin: ++home_wins[i]; break;
      case Outcome::AwayWin: ++away_wins[i]; break;
      case Outcome::Draw: ++draws[i]; break;
    }
  }
};

// One predicted match, kept for reporting and no-lookahead checks.
struct PredictionRow {
  Timestamp date = 0;
  std::string home;
  std::string away;
  double r = 0.5;
  std::size_t bin = 6;
  Outcome predicted = Outcome::Draw;
  Outcome baseline = Outcome::Draw;
  Outcome actual = Outcome::Draw;
};

struct BacktestReport {
  ConversionConfig conversion;
  DecayParams decay;
  PredictionConfig prediction;
  std::size_t matches = 0;
  BinStats bins;
  std::size_t engine_correct = 0;
  std::size_t baseline_correct = 0;
  std::vector<PredictionRow> rows;
  std::vector<std::string> diagnostics;

  double engine_accuracy() const {
    return matches == 0 ? 0.0 : double(engine_correct) / double(matches);
  }
  double baseline_accuracy() const {
    return matches == 0 ? 0.0 : double(baseline_correct) / double(matches);
  }
  // Fraction of bin-k matches the home side won; 0-size bins report no value.
  double f_home(std::size_t bin) const {
    return double(bins.home_wins[bin - 1]) / double(bins.total[bin - 1]);
  }
  double f_away(std::size_t bin) const {
    return double(bins.away_wins[bin - 1]) / double(bins.total[bin - 1]);
  }
};

inline BacktestReport run_backtest(const SpacePtr& space,
                                   const std::vector<MatchResult>& matches,
                                   const ConversionConfig& conv,
                                   const DecayParams& decay,
                                   const PredictionConfig& pred) {
  conv.validate();
  decay.validate();
  pred.validate();
  for (std::size_t i = 1; i < matches.size(); ++i)
    if (matches[i].date < matches[i - 1].date)
      throw std::invalid_argument("match corpus must be sorted by date");

  BacktestReport report{conv, decay, pred, 0, {}, 0, 0, {}, {}};
  NormBounds bounds;
  const bool use_bounds =
      conv.strategy == Strategy::GMV && conv.normalize && !matches.empty();
  if (use_bounds) bounds = compute_norm_bounds(matches, conv.gift);

  ReputationLedger ledger(space, decay);
  LeagueTable table;

  for (std::size_t i = 0; i < matches.size(); ++i) {
    const MatchResult& m = matches[i];
    OpinionPair ops{Opinion{"", "", 0, flat(space)}, Opinion{"", "", 0, flat(space)}};
    try {
      m.validate();
      ops = convert(space, m, conv, use_bounds ? &bounds : nullptr);
    } catch (const std::invalid_argument& e) {
      report.diagnostics.push_back("match " + std::to_string(i) + ": " + e.what());
      continue;
    }

    // Predict from pre-match information only.
    const double rep_home = ledger.reputation(m.home, m.date);
    const double rep_away = ledger.reputation(m.away, m.date);
    const double r = relative_strength(rep_home, rep_away);
    PredictionRow row;
    row.date = m.date;
    row.home = m.home;
    row.away = m.away;
    row.r = r;
    row.bin = bin_of(r);
    row.predicted = predict(r, pred);
    row.baseline = table.predict(m);
    row.actual = actual_outcome(m);

    ++report.matches;
    report.bins.record(row.bin, row.actual);
    if (row.predicted == row.actual) ++report.engine_correct;
    if (row.baseline == row.actual) ++report.baseline_correct;
    report.rows.push_back(std::move(row));

    // Fold the result in: both mutual opinions at the match date, home
    // direction first, with both rater reliabilities read pre-match so the
    // order cannot influence the outcome.
    ledger.update(ops.first, rep_away);
    ledger.update(ops.second, rep_home);
    table.update(m);
  }
  return report;
}

// Independent backtests over a (strategy, nu) grid; every run gets fresh
// state. Grid order is preserved in the output.
inline std::vector<BacktestReport> sweep(const SpacePtr& space,
                                         const std::vector<MatchResult>& matches,
                                         const std::vector<Strategy>& strategies,
                                         const std::vector<double>& nus,
                                         double kappa, double gift,
                                         bool normalize,
                                         const PredictionConfig& pred) {
  if (strategies.empty() || nus.empty())
    throw std::invalid_argument("sweep needs non-empty strategy and nu grids");
  std::vector<BacktestReport> out;
  out.reserve(strategies.size() * nus.size());
  for (Strategy s : strategies) {
    for (double nu : nus) {
      ConversionConfig conv{s, gift, normalize};
      DecayParams decay{nu, kappa};
      out.push_back(run_backtest(space, matches, conv, decay, pred));
    }
  }
  return out;
}

}  // namespace more
