#pragma once

// Ordered evaluation spaces and discrete probability distributions.
// A Distribution is the universal value type of the library: opinions,
// group opinions, and reference points (flat, target) are all Distributions
// over one shared EvaluationSpace.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace more {

// Ordered set of qualitative terms e_1 < ... < e_n. The last term is the
// "best" one: the target distribution puts all mass on it.
class EvaluationSpace {
 public:
  explicit EvaluationSpace(std::vector<std::string> labels)
      : labels_(std::move(labels)) {
    if (labels_.size() < 2)
      throw std::invalid_argument("evaluation space needs at least 2 terms");
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
      if (l.empty())
        throw std::invalid_argument("evaluation space term must be non-empty");
      if (!seen.insert(l).second)
        throw std::invalid_argument("duplicate evaluation space term: " + l);
    }
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  friend bool operator==(const EvaluationSpace& a, const EvaluationSpace& b) {
    return a.labels_ == b.labels_;
  }
  friend bool operator!=(const EvaluationSpace& a, const EvaluationSpace& b) {
    return !(a == b);
  }

 private:
  std::vector<std::string> labels_;
};

using SpacePtr = std::shared_ptr<const EvaluationSpace>;

inline SpacePtr make_space(std::vector<std::string> labels) {
  return std::make_shared<const EvaluationSpace>(std::move(labels));
}

// Convenience binary space used throughout sports scoring.
inline SpacePtr binary_space() { return make_space({"B", "G"}); }

// Probability vector over an EvaluationSpace.
//
// Construction tolerances: a component sum off by more than 1e-6 is a data
// error (rejected); smaller drift above 1e-12 is renormalized; drift at or
// below 1e-12 is kept byte-for-byte so that exact arithmetic (and snapshot
// round-trips) are not perturbed. Tiny negative components (parser noise
// down to -1e-9) clamp to zero.
class Distribution {
 public:
  Distribution(SpacePtr space, std::vector<double> probs)
      : space_(std::move(space)), probs_(std::move(probs)) {
    if (!space_) throw std::invalid_argument("distribution needs a space");
    if (probs_.size() != space_->size())
      throw std::invalid_argument("probability vector size does not match space");
    double sum = 0.0;
    for (double& v : probs_) {
      if (!std::isfinite(v))
        throw std::invalid_argument("non-finite probability component");
      if (v < 0.0) {
        if (v < -1e-9)
          throw std::invalid_argument("negative probability component");
        v = 0.0;
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw std::invalid_argument("probabilities must sum to 1 (got " +
                                  std::to_string(sum) + ")");
    if (std::abs(sum - 1.0) > 1e-12) {
      for (double& v : probs_) v /= sum;
    }
  }

  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return probs_.size(); }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

  friend bool operator==(const Distribution& a, const Distribution& b) {
    return *a.space_ == *b.space_ && a.probs_ == b.probs_;
  }

 private:
  struct unchecked_t {};
  Distribution(SpacePtr space, std::vector<double> probs, unchecked_t)
      : space_(std::move(space)), probs_(std::move(probs)) {}

  friend Distribution mix(double, const Distribution&, const Distribution&);

  SpacePtr space_;
  std::vector<double> probs_;
};

inline void require_same_space(const Distribution& a, const Distribution& b) {
  if (*a.space() != *b.space())
    throw std::invalid_argument("distributions live on different spaces");
}

// Uniform distribution: total ignorance, and the limit of all decay.
inline Distribution flat(const SpacePtr& space) {
  if (!space) throw std::invalid_argument("flat() needs a space");
  return Distribution(space,
                      std::vector<double>(space->size(), 1.0 / double(space->size())));
}

// Point mass on the top term: the ideal assessment.
inline Distribution target(const SpacePtr& space) {
  if (!space) throw std::invalid_argument("target() needs a space");
  std::vector<double> v(space->size(), 0.0);
  v.back() = 1.0;
  return Distribution(space, std::move(v));
}

// Shannon entropy in nats, with the 0 * ln 0 = 0 convention.
// Range [0, ln n]; maximal exactly at flat.
inline double entropy(const Distribution& d) {
  double h = 0.0;
  for (double v : d.probs())
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

// Information content used as an aggregation weight: how far below maximal
// entropy the distribution sits. Zero iff flat, ln n for a point mass.
// Values below 1e-12 snap to exactly zero so that a flat distribution
// carries exactly no weight regardless of libm rounding.
inline double certainty(const Distribution& d) {
  double c = std::log(double(d.size())) - entropy(d);
  if (!(c > 1e-12)) return 0.0;
  return c;
}

// Normalized earth mover's distance between two distributions on the same
// ordered space: mean absolute difference of cumulative sums, scaled by the
// worst case (n - 1 cells of full transport) so the result lies in [0, 1].
inline double emd(const Distribution& p, const Distribution& q) {
  require_same_space(p, q);
  const std::size_t n = p.size();
  double cp = 0.0, cq = 0.0, total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cp += p[i];
    cq += q[i];
    total += std::abs(cp - cq);
  }
  double result = total / double(n - 1);
  return std::clamp(result, 0.0, 1.0);
}

// Convex combination a * d1 + (1 - a) * d2.
// The endpoint branches are exact: a == 1 returns d1's components untouched
// and a == 0 returns d2's, which keeps no-op decay and full decay bit-exact.
inline Distribution mix(double a, const Distribution& d1, const Distribution& d2) {
  require_same_space(d1, d2);
  if (!(a >= 0.0 && a <= 1.0))
    throw std::invalid_argument("mix coefficient outside [0,1]");
  if (a == 1.0) return d1;
  if (a == 0.0) return d2;
  std::vector<double> v(d1.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = d2[i] + a * (d1[i] - d2[i]);
  return Distribution(d1.space(), std::move(v), Distribution::unchecked_t{});
}

}  // namespace more
