// End-to-end league walkthrough on generated data: build a small synthetic
// corpus, backtest the gift-adjusted converter against the 3/1/0 points
// baseline, and print the per-bin frequency table.

#include <iostream>

#include "more/more.hpp"

int main() {
  const more::SynthCorpus corpus = more::gen_synthetic(8, 4, 7);
  std::cout << "generated " << corpus.matches.size() << " matches\n";

  const more::SpacePtr space = more::binary_space();
  const more::ConversionConfig conv{more::Strategy::GMV, 1.0, true};
  const more::DecayParams decay{0.6, 365.0};
  const more::PredictionConfig pred{0.05};

  const more::BacktestReport report =
      more::run_backtest(space, corpus.matches, conv, decay, pred);
  more::write_report_human(std::cout, report);

  more::LeagueTable table;
  for (const more::MatchResult& m : corpus.matches) table.update(m);
  return 0;
}
