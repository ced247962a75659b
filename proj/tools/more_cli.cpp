// Subcommand CLI over the reputation library: corpus backtests, parameter
// sweeps, the approximation-error experiment, reputation ranking, single
// match prediction, synthetic corpus generation, and ledger snapshots.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "more/more.hpp"

namespace {

namespace fs = std::filesystem;

more::MatchParse load_matches(const std::string& path, bool print_summary) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw more::data_error("cannot open " + path);
  more::MatchParse p = more::parse_matches(in);
  for (const std::string& r : p.rejects) std::cerr << path << ": " << r << "\n";
  if (print_summary)
    std::cout << "loaded " << p.matches.size() << " matches: " << p.home_wins
              << " home wins, " << p.away_wins << " away wins, " << p.draws
              << " draws\n";
  return p;
}

more::OpinionParse load_opinions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw more::data_error("cannot open " + path);
  more::OpinionParse p = more::parse_opinions(in);
  for (const std::string& r : p.rejects) std::cerr << path << ": " << r << "\n";
  return p;
}

void write_text_file(const fs::path& path, const std::string& content) {
  more::write_file(path.string(), content);
}

void emit_backtest_outputs(const more::BacktestReport& r, const fs::path& dir) {
  fs::create_directories(dir);
  std::ostringstream report, bins, rows;
  more::write_report_text(report, r);
  more::write_bins_csv(bins, r);
  rows << "date,home,away,r,bin,predicted,baseline,actual\n";
  for (const more::PredictionRow& row : r.rows)
    rows << more::format_date(row.date) << ',' << row.home << ',' << row.away
         << ',' << more::fmt9(row.r) << ',' << row.bin << ','
         << more::outcome_name(row.predicted) << ','
         << more::outcome_name(row.baseline) << ','
         << more::outcome_name(row.actual) << "\n";
  write_text_file(dir / "report.txt", report.str());
  write_text_file(dir / "bins.csv", bins.str());
  write_text_file(dir / "predictions.csv", rows.str());
}

struct CommonParams {
  std::string strategy = "gmv";
  double nu = 0.6;
  double kappa = 365.0;
  double gift = 1.0;
  double epsilon = 0.05;
  bool no_normalize = false;

  more::ConversionConfig conversion() const {
    return {more::strategy_from_name(strategy), gift, !no_normalize};
  }
  more::DecayParams decay() const { return {nu, kappa}; }
  more::PredictionConfig prediction() const { return {epsilon}; }
};

void add_decay_flags(CLI::App* cmd, CommonParams& p) {
  cmd->add_option("--nu", p.nu, "decay rate in [0,1]")->capture_default_str();
  cmd->add_option("--kappa", p.kappa, "grace period in days")
      ->capture_default_str();
}

void add_strategy_flags(CLI::App* cmd, CommonParams& p) {
  cmd->add_option("--strategy", p.strategy, "score conversion: naive|mv|gmv")
      ->capture_default_str();
  cmd->add_option("--x", p.gift, "gift goals for gmv")->capture_default_str();
  cmd->add_flag("--no-normalize", p.no_normalize,
                "disable gmv corpus normalization");
  cmd->add_option("--epsilon", p.epsilon, "draw band half-width")
      ->capture_default_str();
}

int run_backtest_cmd(const std::string& matches_path, const CommonParams& p,
                     const std::string& out_dir) {
  more::MatchParse corpus = load_matches(matches_path, true);
  more::BacktestReport r =
      more::run_backtest(more::binary_space(), corpus.matches, p.conversion(),
                         p.decay(), p.prediction());
  for (const std::string& d : r.diagnostics) std::cerr << d << "\n";
  more::write_report_human(std::cout, r);
  emit_backtest_outputs(r, out_dir);
  std::cout << "wrote " << out_dir << "/report.txt, bins.csv, predictions.csv\n";
  return 0;
}

int run_sweep_cmd(const std::string& matches_path,
                  std::vector<std::string> strategies, std::vector<double> nus,
                  const CommonParams& p, const std::string& out_dir) {
  more::MatchParse corpus = load_matches(matches_path, true);
  std::vector<more::Strategy> strat;
  strat.reserve(strategies.size());
  for (const std::string& s : strategies)
    strat.push_back(more::strategy_from_name(s));
  std::vector<more::BacktestReport> reports =
      more::sweep(more::binary_space(), corpus.matches, strat, nus, p.kappa,
                  p.gift, !p.no_normalize, p.prediction());
  fs::create_directories(out_dir);
  std::ostringstream combined;
  more::write_sweep_csv(combined, reports);
  write_text_file(fs::path(out_dir) / "sweep.csv", combined.str());
  for (const more::BacktestReport& r : reports) {
    const std::string name = std::string(more::strategy_name(r.conversion.strategy)) +
                             "_nu" + more::fmt9(r.decay.nu);
    emit_backtest_outputs(r, fs::path(out_dir) / name);
    std::cout << name << ": accuracy " << more::fmt9(r.engine_accuracy())
              << " baseline " << more::fmt9(r.baseline_accuracy()) << "\n";
  }
  std::cout << "wrote " << out_dir << "/sweep.csv\n";
  return 0;
}

int run_approx_cmd(const more::ExperimentConfig& cfg, const std::string& out_dir) {
  const more::ErrorTrace t = more::run_experiment(cfg);
  fs::create_directories(out_dir);
  std::ostringstream csv;
  more::write_trace_csv(csv, t);
  write_text_file(fs::path(out_dir) / "trace.csv", csv.str());
  std::size_t peak = 0;
  for (std::size_t i = 1; i < t.mean.size(); ++i)
    if (t.mean[i] > t.mean[peak]) peak = i;
  std::cout << "trace of " << t.mean.size() << " opinions, peak mean EMD "
            << more::fmt9(t.mean[peak]) << " at index " << (peak + 1)
            << ", final " << more::fmt9(t.mean.back()) << "\n";
  std::cout << "wrote " << out_dir << "/trace.csv\n";
  return 0;
}

int run_rank_cmd(const std::string& opinions_path, const std::string& at,
                 double nu, double kappa) {
  {
    // A file with no content at all ranks nobody; that is not a data error.
    std::ifstream probe(opinions_path, std::ios::binary);
    if (!probe) throw more::data_error("cannot open " + opinions_path);
    std::string line;
    bool any = false;
    while (std::getline(probe, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::size_t pos = line.find_first_not_of(" \t");
      if (pos != std::string::npos && line[pos] != '#') {
        any = true;
        break;
      }
    }
    if (!any) {
      std::cout << "agent\treputation\n";
      return 0;
    }
  }
  more::OpinionParse p = load_opinions(opinions_path);
  more::Timestamp t;
  if (at.empty()) {
    t = 0;
    for (const more::Opinion& op : p.opinions) t = std::max(t, op.time);
  } else {
    t = more::parse_time(at);
    // The table reflects what was known at the query time; later opinions
    // do not exist yet from that vantage point.
    std::erase_if(p.opinions,
                  [t](const more::Opinion& op) { return op.time > t; });
  }
  more::OdbResult r =
      more::process_odb(p.space, p.opinions, more::DecayParams{nu, kappa});
  for (const std::string& d : r.diagnostics) std::cerr << d << "\n";
  std::vector<std::pair<std::string, double>> table;
  for (const auto& [agent, state] : r.ledger.states())
    table.emplace_back(agent, r.ledger.reputation(agent, t));
  std::sort(table.begin(), table.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::cout << "agent\treputation\n";
  for (const auto& [agent, rep] : table)
    std::cout << agent << '\t' << more::fmt9(rep) << "\n";
  return 0;
}

int run_predict_cmd(const std::string& matches_path, const std::string& home,
                    const std::string& away, const std::string& date,
                    const CommonParams& p) {
  more::MatchParse corpus = load_matches(matches_path, false);
  const more::Timestamp cutoff = more::parse_date(date);
  const more::SpacePtr space = more::binary_space();
  const more::ConversionConfig conv = p.conversion();

  // History strictly before the queried date; prediction may not peek.
  std::vector<more::MatchResult> history;
  for (const more::MatchResult& m : corpus.matches)
    if (m.date < cutoff) history.push_back(m);

  more::NormBounds bounds;
  const bool use_bounds = conv.strategy == more::Strategy::GMV &&
                          conv.normalize && !history.empty();
  if (use_bounds) bounds = more::compute_norm_bounds(history, conv.gift);

  more::ReputationLedger ledger(space, p.decay());
  for (const more::MatchResult& m : history) {
    const double rep_home = ledger.reputation(m.home, m.date);
    const double rep_away = ledger.reputation(m.away, m.date);
    const more::OpinionPair ops =
        more::convert(space, m, conv, use_bounds ? &bounds : nullptr);
    ledger.update(ops.first, rep_away);
    ledger.update(ops.second, rep_home);
  }
  const double rh = ledger.reputation(home, cutoff);
  const double ra = ledger.reputation(away, cutoff);
  const double r = more::relative_strength(rh, ra);
  std::cout << "home " << home << " reputation " << more::fmt9(rh) << "\n";
  std::cout << "away " << away << " reputation " << more::fmt9(ra) << "\n";
  std::cout << "relative_strength " << more::fmt9(r) << "\n";
  std::cout << "bin " << more::bin_of(r) << "\n";
  std::cout << "prediction " << more::outcome_name(more::predict(r, p.prediction()))
            << "\n";
  return 0;
}

int run_gen_cmd(int teams, int seasons, std::uint64_t seed,
                const std::string& out_path) {
  const more::SynthCorpus corpus = more::gen_synthetic(teams, seasons, seed);
  std::ostringstream os;
  more::serialize_matches(os, corpus.matches, corpus.law);
  more::write_file(out_path, os.str());
  std::cout << "wrote " << corpus.matches.size() << " matches to " << out_path
            << "\n";
  return 0;
}

int run_snapshot_save(const std::string& opinions_path, double nu, double kappa,
                      const std::string& out_path) {
  more::OpinionParse p = load_opinions(opinions_path);
  more::OdbResult r =
      more::process_odb(p.space, p.opinions, more::DecayParams{nu, kappa});
  for (const std::string& d : r.diagnostics) std::cerr << d << "\n";
  std::ostringstream os;
  more::save_snapshot(os, r.ledger);
  more::write_file(out_path, os.str());
  std::cout << "wrote snapshot of " << r.ledger.states().size() << " agents to "
            << out_path << "\n";
  return 0;
}

int run_snapshot_load(const std::string& in_path, const std::string& resave) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw more::data_error("cannot open " + in_path);
  more::ReputationLedger ledger = more::load_snapshot(in);
  std::cout << "loaded " << ledger.states().size() << " agents, nu "
            << more::fmt9(ledger.params().nu) << ", kappa "
            << more::fmt9(ledger.params().kappa) << "\n";
  if (!resave.empty()) {
    std::ostringstream os;
    more::save_snapshot(os, ledger);
    more::write_file(resave, os.str());
    std::cout << "resaved to " << resave << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certainty-weighted reputation engine with time decay"};
  app.require_subcommand(1);

  // backtest
  auto* bt = app.add_subcommand("backtest", "replay a match corpus and report");
  std::string bt_matches, bt_out = "out";
  CommonParams bt_p;
  bt->add_option("--matches", bt_matches, "match CSV")->required();
  add_strategy_flags(bt, bt_p);
  add_decay_flags(bt, bt_p);
  bt->add_option("--out", bt_out, "output directory")->capture_default_str();

  // sweep
  auto* sw = app.add_subcommand("sweep", "backtest a strategy x nu grid");
  std::string sw_matches, sw_out = "sweep_out";
  std::vector<std::string> sw_strategies{"naive", "mv", "gmv"};
  std::vector<double> sw_nus{0.4, 0.6, 0.8, 0.98};
  CommonParams sw_p;
  sw->add_option("--matches", sw_matches, "match CSV")->required();
  sw->add_option("--strategies", sw_strategies, "comma list of strategies")
      ->delimiter(',')
      ->capture_default_str();
  sw->add_option("--nus", sw_nus, "comma list of decay rates")
      ->delimiter(',')
      ->capture_default_str();
  sw->add_option("--kappa", sw_p.kappa, "grace period in days")
      ->capture_default_str();
  sw->add_option("--x", sw_p.gift, "gift goals for gmv")->capture_default_str();
  sw->add_flag("--no-normalize", sw_p.no_normalize,
               "disable gmv corpus normalization");
  sw->add_option("--epsilon", sw_p.epsilon, "draw band half-width")
      ->capture_default_str();
  sw->add_option("--out", sw_out, "output directory")->capture_default_str();

  // approx
  auto* ax = app.add_subcommand(
      "approx", "incremental vs reference aggregate error trace");
  more::ExperimentConfig ax_cfg;
  std::string ax_out = "approx_out";
  ax->add_option("--per-year", ax_cfg.per_year, "opinions per year")
      ->capture_default_str();
  ax->add_option("--years", ax_cfg.years, "years")->capture_default_str();
  ax->add_option("--nu", ax_cfg.decay.nu, "decay rate")->capture_default_str();
  ax->add_option("--kappa", ax_cfg.decay.kappa, "grace period in days")
      ->capture_default_str();
  ax->add_option("--repeats", ax_cfg.repeats, "independent repeats")
      ->capture_default_str();
  ax->add_option("--seed", ax_cfg.seed, "rng seed")->capture_default_str();
  ax->add_option("--space", ax_cfg.space_size, "evaluation space size")
      ->capture_default_str();
  ax->add_option("--out", ax_out, "output directory")->capture_default_str();

  // rank
  auto* rk = app.add_subcommand("rank", "reputation table from an opinion file");
  std::string rk_opinions, rk_at;
  double rk_nu = 0.6, rk_kappa = 365.0;
  rk->add_option("--opinions", rk_opinions, "opinion CSV")->required();
  rk->add_option("--at", rk_at, "query time (day number or yyyy-mm-dd); "
                                "defaults to the last opinion time");
  rk->add_option("--nu", rk_nu, "decay rate")->capture_default_str();
  rk->add_option("--kappa", rk_kappa, "grace period in days")
      ->capture_default_str();

  // predict
  auto* pd = app.add_subcommand("predict", "predict one fixture from history");
  std::string pd_matches, pd_home, pd_away, pd_date;
  CommonParams pd_p;
  pd->add_option("--matches", pd_matches, "match CSV")->required();
  pd->add_option("--home", pd_home, "home team")->required();
  pd->add_option("--away", pd_away, "away team")->required();
  pd->add_option("--date", pd_date, "match date yyyy-mm-dd")->required();
  add_strategy_flags(pd, pd_p);
  add_decay_flags(pd, pd_p);

  // gen
  auto* gn = app.add_subcommand("gen", "generate a synthetic match corpus");
  int gn_teams = 20, gn_seasons = 10;
  std::uint64_t gn_seed = 1;
  std::string gn_out = "synthetic.csv";
  gn->add_option("--teams", gn_teams, "team count")->capture_default_str();
  gn->add_option("--seasons", gn_seasons, "season count")->capture_default_str();
  gn->add_option("--seed", gn_seed, "rng seed")->capture_default_str();
  gn->add_option("--out", gn_out, "output CSV path")->capture_default_str();

  // snapshot
  auto* sn = app.add_subcommand("snapshot", "save or load ledger state");
  auto* sn_save = sn->add_subcommand("save", "process opinions, save ledger");
  std::string sns_opinions, sns_out = "ledger.snapshot";
  double sns_nu = 0.6, sns_kappa = 365.0;
  sn_save->add_option("--opinions", sns_opinions, "opinion CSV")->required();
  sn_save->add_option("--nu", sns_nu, "decay rate")->capture_default_str();
  sn_save->add_option("--kappa", sns_kappa, "grace period in days")
      ->capture_default_str();
  sn_save->add_option("--out", sns_out, "snapshot path")->capture_default_str();
  auto* sn_load = sn->add_subcommand("load", "load a snapshot, optionally resave");
  std::string snl_in, snl_resave;
  sn_load->add_option("--in", snl_in, "snapshot path")->required();
  sn_load->add_option("--resave", snl_resave, "write the loaded state back out");
  sn->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (bt->parsed()) return run_backtest_cmd(bt_matches, bt_p, bt_out);
    if (sw->parsed())
      return run_sweep_cmd(sw_matches, sw_strategies, sw_nus, sw_p, sw_out);
    if (ax->parsed()) return run_approx_cmd(ax_cfg, ax_out);
    if (rk->parsed()) return run_rank_cmd(rk_opinions, rk_at, rk_nu, rk_kappa);
    if (pd->parsed())
      return run_predict_cmd(pd_matches, pd_home, pd_away, pd_date, pd_p);
    if (gn->parsed()) return run_gen_cmd(gn_teams, gn_seasons, gn_seed, gn_out);
    if (sn->parsed()) {
      if (sn_save->parsed())
        return run_snapshot_save(sns_opinions, sns_nu, sns_kappa, sns_out);
      return run_snapshot_load(snl_in, snl_resave);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const more::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
