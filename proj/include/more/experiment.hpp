#pragma once

// Monte-Carlo study of the incremental aggregate against the linear-time
// reference: random opinions about one fixed subject arrive over simulated
// years, both aggregates are maintained, and the per-index earth mover's
// distance between them is averaged over repeats.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "engine.hpp"
#include "rng.hpp"

namespace more {

struct ExperimentConfig {
  int per_year = 10;
  int years = 6;
  DecayParams decay{0.98, 5.0};
  int repeats = 20;
  std::uint64_t seed = 1;
  std::size_t space_size = 2;

  void validate() const {
    if (per_year <= 0 || years <= 0 || repeats <= 0)
      throw std::invalid_argument("experiment dimensions must be positive");
    if (space_size < 2)
      throw std::invalid_argument("space needs at least 2 terms");
    decay.validate();
  }
  int total_opinions() const { return per_year * years; }
};

struct ErrorTrace {
  std::vector<double> mean;  // per opinion index, averaged over repeats
  std::vector<double> lo;    // min over repeats
  std::vector<double> hi;    // max over repeats
};

namespace detail {
inline SpacePtr experiment_space(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i + 1));
  return n == 2 ? binary_space() : make_space(std::move(labels));
}

// A year spans 365 engine days; the k opinions of a year sit at evenly
// spaced offsets inside it. Sources are fresh singletons, one per opinion.
inline std::vector<Opinion> random_opinion_stream(const ExperimentConfig& cfg,
                                                  const SpacePtr& space,
                                                  std::uint64_t stream_seed) {
  std::mt19937_64 gen(stream_seed);
  std::vector<Opinion> ops;
  ops.reserve(std::size_t(cfg.total_opinions()));
  for (int y = 0; y < cfg.years; ++y) {
    for (int i = 0; i < cfg.per_year; ++i) {
      const Timestamp t =
          Timestamp(y) * 365 +
          Timestamp(std::llround(365.0 * double(i) / double(cfg.per_year)));
      std::vector<double> v(space->size());
      double sum = 0.0;
      do {
        sum = 0.0;
        for (double& x : v) {
          x = uniform01(gen);
          sum += x;
        }
      } while (sum == 0.0);
      for (double& x : v) x /= sum;
      ops.push_back(Opinion{"src" + std::to_string(ops.size()), "subject", t,
                            Distribution(space, std::move(v))});
    }
  }
  return ops;
}
}  // namespace detail

// The opinion stream for the configured seed (repeat 0 of run_experiment).
inline std::vector<Opinion> gen_random_opinions(const ExperimentConfig& cfg) {
  cfg.validate();
  const SpacePtr space = detail::experiment_space(cfg.space_size);
  return detail::random_opinion_stream(cfg, space, derive_seed(cfg.seed, 0));
}

// For each repeat and each arriving opinion: advance the incremental state,
// recompute the reference aggregate over the whole history at that moment,
// and record their distance. Sources are unrated singletons, so every
// opinion is reviewed with the initial reliability (1 minus the distance
// between flat and the target, which is 1/2 on every space).
inline ErrorTrace run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const SpacePtr space = detail::experiment_space(cfg.space_size);
  const int total = cfg.total_opinions();
  const double r0 = 1.0 - emd(flat(space), target(space));

  ErrorTrace trace;
  trace.mean.assign(std::size_t(total), 0.0);
  trace.lo.assign(std::size_t(total), 1.0);
  trace.hi.assign(std::size_t(total), 0.0);

  for (int rep = 0; rep < cfg.repeats; ++rep) {
    const std::vector<Opinion> ops = detail::random_opinion_stream(
        cfg, space, derive_seed(cfg.seed, std::uint64_t(rep)));
    GroupOpinionState state{flat(space), 0, 0.0, 0};
    std::vector<Opinion> history;
    history.reserve(ops.size());
    for (int i = 0; i < total; ++i) {
      const Opinion& op = ops[std::size_t(i)];
      history.push_back(op);
      state = group_update_state(state, review(op.value, r0), op.time, cfg.decay);
      const Distribution exact =
          group_exact(space, history, op.time, cfg.decay, r0);
      const double e = emd(exact, state.dist);
      trace.mean[std::size_t(i)] += e;
      trace.lo[std::size_t(i)] = std::min(trace.lo[std::size_t(i)], e);
      trace.hi[std::size_t(i)] = std::max(trace.hi[std::size_t(i)], e);
    }
  }
  for (double& m : trace.mean) m /= double(cfg.repeats);
  return trace;
}

}  // namespace more
