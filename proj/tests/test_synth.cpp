#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "more/io.hpp"
#include "more/synth.hpp"

using namespace more;

TEST_CASE("corpus size: a double round-robin per season") {
  CHECK(gen_synthetic(4, 1, 1).matches.size() == 12);
  CHECK(gen_synthetic(4, 3, 1).matches.size() == 36);
  CHECK(gen_synthetic(20, 10, 1).matches.size() == 3800);
  CHECK(gen_synthetic(5, 1, 1).matches.size() == 20);  // odd count, bye rounds
  CHECK_THROWS_AS(gen_synthetic(1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_synthetic(4, 0, 1), std::invalid_argument);
}

TEST_CASE("every ordered pair meets exactly once per season") {
  const SynthCorpus c = gen_synthetic(6, 2, 3);
  std::map<std::string, std::map<std::pair<std::string, std::string>, int>> seen;
  for (const MatchResult& m : c.matches) {
    CHECK(m.home != m.away);
    CHECK(m.home_goals >= 0);
    CHECK(m.away_goals >= 0);
    ++seen[m.season][{m.home, m.away}];
  }
  REQUIRE(seen.size() == 2);
  for (const auto& [season, pairs] : seen) {
    CHECK(pairs.size() == 30);  // 6*5 ordered pairs
    for (const auto& [pair, count] : pairs) CHECK(count == 1);
  }
}

TEST_CASE("matches come out sorted by date with weekly rounds") {
  const SynthCorpus c = gen_synthetic(8, 2, 5);
  CHECK(std::is_sorted(c.matches.begin(), c.matches.end(),
                       [](const MatchResult& a, const MatchResult& b) {
                         return a.date < b.date;
                       }));
  std::set<Timestamp> dates;
  for (const MatchResult& m : c.matches)
    if (m.season == "S01") dates.insert(m.date);
  CHECK(dates.size() == 14);  // 2*(8-1) rounds
  for (Timestamp d : dates) CHECK(d % 7 == 0);
}

TEST_CASE("determinism by seed") {
  const SynthCorpus a = gen_synthetic(6, 1, 42);
  const SynthCorpus b = gen_synthetic(6, 1, 42);
  REQUIRE(a.matches.size() == b.matches.size());
  for (std::size_t i = 0; i < a.matches.size(); ++i) {
    CHECK(a.matches[i].home == b.matches[i].home);
    CHECK(a.matches[i].home_goals == b.matches[i].home_goals);
    CHECK(a.matches[i].away_goals == b.matches[i].away_goals);
  }
  const SynthCorpus c = gen_synthetic(6, 1, 43);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.matches.size(); ++i)
    if (a.matches[i].home_goals != c.matches[i].home_goals ||
        a.matches[i].away_goals != c.matches[i].away_goals)
      any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("each team hosts every opponent once per season with venues balanced") {
  const SynthCorpus c = gen_synthetic(4, 1, 9);
  std::map<std::string, int> home_count;
  for (const MatchResult& m : c.matches) ++home_count[m.home];
  for (const auto& [team, n] : home_count) CHECK(n == 3);
}

TEST_CASE("the strength law shows: stronger sides beat weaker ones head to head") {
  const SynthCorpus c = gen_synthetic(20, 10, 1);

  // Recover per-team records to identify the extremes empirically.
  std::map<std::string, int> points;
  for (const MatchResult& m : c.matches) {
    if (m.home_goals > m.away_goals) points[m.home] += 3;
    else if (m.home_goals < m.away_goals) points[m.away] += 3;
    else { points[m.home] += 1; points[m.away] += 1; }
  }
  const auto [weakest, strongest] = std::minmax_element(
      points.begin(), points.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });

  int strong_wins = 0, weak_wins = 0;
  for (const MatchResult& m : c.matches) {
    const bool meet = (m.home == strongest->first && m.away == weakest->first) ||
                      (m.home == weakest->first && m.away == strongest->first);
    if (!meet || m.home_goals == m.away_goals) continue;
    const std::string& winner = m.home_goals > m.away_goals ? m.home : m.away;
    if (winner == strongest->first) ++strong_wins;
    else ++weak_wins;
  }
  CHECK(strong_wins + weak_wins > 0);
  CHECK(strong_wins > weak_wins);
  CHECK(double(strong_wins) / double(strong_wins + weak_wins) > 0.5);
}

TEST_CASE("the generator documents its law in the serialized header") {
  const SynthCorpus c = gen_synthetic(4, 1, 7);
  CHECK(!c.law.empty());
  std::ostringstream os;
  serialize_matches(os, c.matches, c.law);
  const std::string out = os.str();
  CHECK(out.find("# ") == 0);
  CHECK(out.find("Poisson") != std::string::npos);
  CHECK(out.find("seed 7") != std::string::npos);

  // And the serialized corpus is itself a valid input.
  std::istringstream in(out);
  CHECK(parse_matches(in).matches.size() == 12);
}
