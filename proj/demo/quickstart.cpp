// Minimal library tour: three raters score one service over a year, the
// ledger folds each opinion in as it arrives, and reputation is queried
// between arrivals to show time decay pulling it back toward 0.5.

#include <iostream>

#include "more/more.hpp"

int main() {
  const more::SpacePtr space = more::make_space({"bad", "fair", "good"});
  more::ReputationLedger ledger(space, more::DecayParams{0.8, 30.0});

  const auto opine = [&](const char* rater, more::Timestamp day,
                         std::vector<double> probs) {
    ledger.update(more::Opinion{rater, "acme", day,
                                more::Distribution(space, std::move(probs))});
    std::cout << "day " << day << "  " << rater
              << " reported; reputation(acme) now "
              << more::fmt9(ledger.reputation("acme", day)) << "\n";
  };

  std::cout << "initial reputation(acme) = "
            << more::fmt9(ledger.reputation("acme", 0)) << "\n";

  opine("alice", 0, {0.05, 0.15, 0.80});
  opine("bob", 40, {0.10, 0.30, 0.60});
  std::cout << "day 200 (no news)        reputation(acme) = "
            << more::fmt9(ledger.reputation("acme", 200)) << "\n";
  opine("carol", 320, {0.70, 0.20, 0.10});

  std::cout << "day 321                  reputation(acme) = "
            << more::fmt9(ledger.reputation("acme", 321)) << "\n";
  const more::GroupOpinionState s = ledger.states().at("acme");
  std::cout << "group opinion after " << s.count << " opinions:";
  for (std::size_t i = 0; i < s.dist.size(); ++i)
    std::cout << ' ' << space->labels()[i] << '=' << more::fmt9(s.dist[i]);
  std::cout << "\n";
  return 0;
}
