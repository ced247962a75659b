#pragma once

// Corpus ingestion, CSV emission, and ledger snapshots.
//
// Conventions: CSVs have a header row, fixed column order, '#' comment
// lines, and floats printed with 9 significant digits. Snapshots are
// tab-separated structured text with 17 significant digits so that
// save -> load -> save is byte-identical.

#include <cctype>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "backtest.hpp"
#include "experiment.hpp"

namespace more {

// Unrecoverable input problem: malformed file, reject rate over budget.
// The CLI maps this to its data-error exit code.
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- calendar dates ----
// Proleptic Gregorian day counts with epoch 1970-01-01 = 0; dates before the
// epoch are negative. Algorithms are the standard civil-date conversions.

struct CivilDate {
  int year = 1970;
  int month = 1;
  int day = 1;
};

inline Timestamp days_from_civil(const CivilDate& c) {
  int y = c.year - (c.month <= 2 ? 1 : 0);
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = unsigned(y - era * 400);
  const unsigned doy =
      unsigned((153 * (c.month + (c.month > 2 ? -3 : 9)) + 2) / 5 + c.day - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return Timestamp(era) * 146097 + Timestamp(doe) - 719468;
}

inline CivilDate civil_from_days(Timestamp z) {
  z += 719468;
  const Timestamp era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = unsigned(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const Timestamp y = Timestamp(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return CivilDate{int(y + (m <= 2 ? 1 : 0)), int(m), int(d)};
}

inline Timestamp parse_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw std::invalid_argument("date must be yyyy-mm-dd: " + s);
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw std::invalid_argument("date must be yyyy-mm-dd: " + s);
  CivilDate c{std::stoi(s.substr(0, 4)), std::stoi(s.substr(5, 2)),
              std::stoi(s.substr(8, 2))};
  const Timestamp t = days_from_civil(c);
  const CivilDate back = civil_from_days(t);
  if (back.year != c.year || back.month != c.month || back.day != c.day)
    throw std::invalid_argument("no such calendar date: " + s);
  return t;
}

inline std::string format_date(Timestamp t) {
  const CivilDate c = civil_from_days(t);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", c.year, c.month, c.day);
  return buf;
}

// Engine timestamps in files may be raw day numbers or calendar dates.
inline Timestamp parse_time(const std::string& s) {
  if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) ||
                     s[0] == '-' || s[0] == '+')) {
    bool all_digits = true;
    for (std::size_t i = 1; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) all_digits = false;
    if (all_digits && !(s.size() == 1 && !std::isdigit((unsigned char)s[0])))
      return std::stoll(s);
  }
  return parse_date(s);
}

// ---- number formatting ----

inline std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- CSV plumbing ----

namespace detail {
inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline bool skippable(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t[0] == '#';
}

inline double parse_real(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not a number: " + s);
  return v;
}

inline int parse_int(const std::string& s) {
  std::size_t pos = 0;
  const int v = std::stoi(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not an integer: " + s);
  return v;
}
}  // namespace detail

// ---- match corpora ----
// Columns: date,season,home,away,home_goals,away_goals

struct MatchParse {
  std::vector<MatchResult> matches;  // sorted by date, stable for ties
  std::vector<std::string> rejects;  // "line N: why", per bad row
  std::size_t data_rows = 0;
  std::size_t home_wins = 0;
  std::size_t away_wins = 0;
  std::size_t draws = 0;
};

inline MatchParse parse_matches(std::istream& in) {
  static const std::vector<std::string> header = {"date",       "season",
                                                  "home",       "away",
                                                  "home_goals", "away_goals"};
  MatchParse out;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::skippable(line)) continue;
    const std::vector<std::string> f = detail::split_csv(line);
    if (!saw_header) {
      if (f != header)
        throw data_error("match file needs header "
                         "date,season,home,away,home_goals,away_goals");
      saw_header = true;
      continue;
    }
    ++out.data_rows;
    try {
      if (f.size() != header.size())
        throw std::invalid_argument("expected 6 columns, got " +
                                    std::to_string(f.size()));
      MatchResult m;
      m.date = parse_date(f[0]);
      m.season = f[1];
      m.home = f[2];
      m.away = f[3];
      m.home_goals = detail::parse_int(f[4]);
      m.away_goals = detail::parse_int(f[5]);
      m.validate();
      out.matches.push_back(std::move(m));
    } catch (const std::exception& e) {
      out.rejects.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!saw_header) throw data_error("match file is empty or has no header row");
  if (out.rejects.size() * 100 > out.data_rows)
    throw data_error("rejected " + std::to_string(out.rejects.size()) + " of " +
                     std::to_string(out.data_rows) +
                     " rows, over the 1% budget");
  std::stable_sort(out.matches.begin(), out.matches.end(),
                   [](const MatchResult& a, const MatchResult& b) {
                     return a.date < b.date;
                   });
  for (const MatchResult& m : out.matches) {
    switch (actual_outcome(m)) {
      case Outcome::HomeWin: ++out.home_wins; break;
      case Outcome::AwayWin: ++out.away_wins; break;
      case Outcome::Draw: ++out.draws; break;
    }
  }
  return out;
}

inline void serialize_matches(std::ostream& os,
                              const std::vector<MatchResult>& matches,
                              const std::vector<std::string>& comments = {}) {
  for (const std::string& c : comments) os << "# " << c << "\n";
  os << "date,season,home,away,home_goals,away_goals\n";
  for (const MatchResult& m : matches)
    os << format_date(m.date) << ',' << m.season << ',' << m.home << ','
       << m.away << ',' << m.home_goals << ',' << m.away_goals << "\n";
}

// ---- opinion corpora ----
// Columns: time,rater,ratee,<term 1>,...,<term n>; the header names the
// evaluation space.

struct OpinionParse {
  SpacePtr space;
  std::vector<Opinion> opinions;  // sorted by time, stable for ties
  std::vector<std::string> rejects;
  std::size_t data_rows = 0;
};

inline OpinionParse parse_opinions(std::istream& in) {
  OpinionParse out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::skippable(line)) continue;
    const std::vector<std::string> f = detail::split_csv(line);
    if (!out.space) {
      if (f.size() < 5 || f[0] != "time" || f[1] != "rater" || f[2] != "ratee")
        throw data_error(
            "opinion file needs header time,rater,ratee,<term...> with at "
            "least two terms");
      out.space = make_space({f.begin() + 3, f.end()});
      continue;
    }
    ++out.data_rows;
    try {
      if (f.size() != 3 + out.space->size())
        throw std::invalid_argument("expected " +
                                    std::to_string(3 + out.space->size()) +
                                    " columns, got " + std::to_string(f.size()));
      const Timestamp time = parse_time(f[0]);
      const std::string& rater = f[1];
      const std::string& ratee = f[2];
      if (rater.empty() || ratee.empty() || rater == ratee)
        throw std::invalid_argument("rater and ratee must be distinct");
      std::vector<double> v;
      v.reserve(out.space->size());
      for (std::size_t i = 3; i < f.size(); ++i)
        v.push_back(detail::parse_real(f[i]));
      out.opinions.push_back(
          Opinion{rater, ratee, time, Distribution(out.space, std::move(v))});
    } catch (const std::exception& e) {
      out.rejects.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!out.space) throw data_error("opinion file is empty or has no header row");
  if (out.rejects.size() * 100 > out.data_rows)
    throw data_error("rejected " + std::to_string(out.rejects.size()) + " of " +
                     std::to_string(out.data_rows) +
                     " rows, over the 1% budget");
  std::stable_sort(out.opinions.begin(), out.opinions.end(),
                   [](const Opinion& a, const Opinion& b) {
                     return a.time < b.time;
                   });
  return out;
}

inline void serialize_opinions(std::ostream& os, const SpacePtr& space,
                               const std::vector<Opinion>& ops) {
  os << "time,rater,ratee";
  for (const std::string& l : space->labels()) os << ',' << l;
  os << "\n";
  for (const Opinion& op : ops) {
    os << op.time << ',' << op.rater << ',' << op.ratee;
    for (double v : op.value.probs()) os << ',' << fmt9(v);
    os << "\n";
  }
}

// ---- ledger snapshots ----
// Tab-separated; one agent per row, rows sorted by agent id; floats carry
// 17 significant digits so reload is bit-exact.

inline void save_snapshot(std::ostream& os, const ReputationLedger& ledger) {
  os << "more-snapshot v1\n";
  os << "space";
  for (const std::string& l : ledger.space()->labels()) os << '\t' << l;
  os << "\n";
  os << "nu\t" << fmt17(ledger.params().nu) << "\n";
  os << "kappa\t" << fmt17(ledger.params().kappa) << "\n";
  os << "agent";
  for (const std::string& l : ledger.space()->labels()) os << "\tp_" << l;
  os << "\tcount\tlast_update\tweight\n";
  for (const auto& [agent, s] : ledger.states()) {
    os << agent;
    for (double v : s.dist.probs()) os << '\t' << fmt17(v);
    os << '\t' << s.count << '\t' << s.last_update << '\t' << fmt17(s.weight)
       << "\n";
  }
}

namespace detail {
inline std::vector<std::string> split_tsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string next_content_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw data_error("snapshot truncated");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}
}  // namespace detail

inline ReputationLedger load_snapshot(std::istream& in) {
  if (detail::next_content_line(in) != "more-snapshot v1")
    throw data_error("not a snapshot file (bad magic line)");
  const auto space_f = detail::split_tsv(detail::next_content_line(in));
  if (space_f.size() < 3 || space_f[0] != "space")
    throw data_error("snapshot space line malformed");
  const SpacePtr space = make_space({space_f.begin() + 1, space_f.end()});

  const auto nu_f = detail::split_tsv(detail::next_content_line(in));
  const auto kappa_f = detail::split_tsv(detail::next_content_line(in));
  if (nu_f.size() != 2 || nu_f[0] != "nu" || kappa_f.size() != 2 ||
      kappa_f[0] != "kappa")
    throw data_error("snapshot parameter lines malformed");
  ReputationLedger ledger(
      space, DecayParams{detail::parse_real(nu_f[1]), detail::parse_real(kappa_f[1])});

  detail::next_content_line(in);  // column header, content is fixed
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = detail::split_tsv(line);
    if (f.size() != 4 + space->size())
      throw data_error("snapshot row has wrong column count");
    std::vector<double> v;
    v.reserve(space->size());
    for (std::size_t i = 1; i <= space->size(); ++i)
      v.push_back(detail::parse_real(f[i]));
    GroupOpinionState s{Distribution(space, std::move(v)),
                        std::stoll(f[1 + space->size()]),
                        detail::parse_real(f[3 + space->size()]),
                        std::stoll(f[2 + space->size()])};
    ledger.restore(f[0], std::move(s));
  }
  return ledger;
}

// ---- report and trace emission ----

inline void write_trace_csv(std::ostream& os, const ErrorTrace& t) {
  os << "index,mean_emd,min_emd,max_emd\n";
  for (std::size_t i = 0; i < t.mean.size(); ++i)
    os << (i + 1) << ',' << fmt9(t.mean[i]) << ',' << fmt9(t.lo[i]) << ','
       << fmt9(t.hi[i]) << "\n";
}

inline void write_bins_csv(std::ostream& os, const BacktestReport& r) {
  os << "bin,lo,hi,matches,f_home,f_away,draw_freq\n";
  for (std::size_t k = 1; k <= kBins; ++k) {
    if (r.bins.total[k - 1] == 0) continue;  // absent, not zero
    const double n = double(r.bins.total[k - 1]);
    os << k << ',' << fmt9(0.1 * double(k - 1)) << ',' << fmt9(0.1 * double(k))
       << ',' << r.bins.total[k - 1] << ',' << fmt9(r.f_home(k)) << ','
       << fmt9(r.f_away(k)) << ',' << fmt9(double(r.bins.draws[k - 1]) / n)
       << "\n";
  }
}

inline void write_report_text(std::ostream& os, const BacktestReport& r) {
  os << "strategy\t" << strategy_name(r.conversion.strategy) << "\n";
  if (r.conversion.strategy == Strategy::GMV) {
    os << "gift\t" << fmt9(r.conversion.gift) << "\n";
    os << "normalize\t" << (r.conversion.normalize ? "yes" : "no") << "\n";
  }
  os << "nu\t" << fmt9(r.decay.nu) << "\n";
  os << "kappa\t" << fmt9(r.decay.kappa) << "\n";
  os << "epsilon\t" << fmt9(r.prediction.epsilon) << "\n";
  os << "matches\t" << r.matches << "\n";
  os << "accuracy\t" << fmt9(r.engine_accuracy()) << "\n";
  os << "baseline_accuracy\t" << fmt9(r.baseline_accuracy()) << "\n";
  os << "skipped\t" << r.diagnostics.size() << "\n";
}

inline void write_report_human(std::ostream& os, const BacktestReport& r) {
  os << "strategy " << strategy_name(r.conversion.strategy) << "  nu "
     << fmt9(r.decay.nu) << "  kappa " << fmt9(r.decay.kappa) << "  epsilon "
     << fmt9(r.prediction.epsilon) << "\n";
  os << "matches " << r.matches << "  accuracy " << fmt9(r.engine_accuracy())
     << "  baseline " << fmt9(r.baseline_accuracy()) << "\n";
  os << "bin   range        n   f_home   f_away\n";
  for (std::size_t k = 1; k <= kBins; ++k) {
    if (r.bins.total[k - 1] == 0) continue;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-4zu  [%.1f,%.1f%c  %5zu  %7.4f  %7.4f\n",
                  k, 0.1 * double(k - 1), 0.1 * double(k),
                  k == kBins ? ']' : ')', r.bins.total[k - 1], r.f_home(k),
                  r.f_away(k));
    os << buf;
  }
}

inline void write_sweep_csv(std::ostream& os,
                            const std::vector<BacktestReport>& reports) {
  os << "strategy,nu,kappa,matches,accuracy,baseline_accuracy\n";
  for (const BacktestReport& r : reports)
    os << strategy_name(r.conversion.strategy) << ',' << fmt9(r.decay.nu) << ','
       << fmt9(r.decay.kappa) << ',' << r.matches << ','
       << fmt9(r.engine_accuracy()) << ',' << fmt9(r.baseline_accuracy())
       << "\n";
}

// ---- small file helpers ----

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write " + path);
  out << content;
}

}  // namespace more
