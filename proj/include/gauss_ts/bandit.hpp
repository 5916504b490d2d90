#pragma once

// K-armed Gaussian bandit and the Thompson sampling policy over it.
//
// Random stream layout for one episode driven by stream `rng`:
//   - posterior draws and tie-breaks consume `rng` itself,
//   - rewards of arm i come from rng.fork(i + 1).
// Arm reward sequences therefore do not depend on the policy's decisions.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gauss_ts/errors.hpp"
#include "gauss_ts/posterior.hpp"
#include "gauss_ts/rng.hpp"
#include "gauss_ts/stats.hpp"

namespace gauss_ts {

struct ArmParams {
  double mu = 0.0;
  double sigma2 = 1.0;

  friend bool operator==(const ArmParams&, const ArmParams&) = default;
};

class Environment {
 public:
  explicit Environment(std::vector<ArmParams> arms) : arms_(std::move(arms)) {
    if (arms_.size() < 2) throw std::invalid_argument("environment needs at least 2 arms");
    mu_star_ = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < arms_.size(); ++i) {
      const auto& a = arms_[i];
      if (!std::isfinite(a.mu)) {
        throw std::invalid_argument("arm " + std::to_string(i) + ": mu must be finite");
      }
      if (!(a.sigma2 > 0.0) || !std::isfinite(a.sigma2)) {
        throw std::invalid_argument("arm " + std::to_string(i) +
                                    ": sigma2 must be positive and finite");
      }
      mu_star_ = std::max(mu_star_, a.mu);
    }
    gaps_.reserve(arms_.size());
    for (const auto& a : arms_) gaps_.push_back(mu_star_ - a.mu);
  }

  std::size_t size() const noexcept { return arms_.size(); }
  const std::vector<ArmParams>& arms() const noexcept { return arms_; }
  const ArmParams& arm(std::size_t i) const { return arms_.at(i); }
  double mu_star() const noexcept { return mu_star_; }
  const std::vector<double>& gaps() const noexcept { return gaps_; }

  std::size_t optimal_count() const noexcept {
    return static_cast<std::size_t>(std::count(gaps_.begin(), gaps_.end(), 0.0));
  }
  bool has_unique_optimum() const noexcept { return optimal_count() == 1; }
  std::size_t best_arm() const noexcept {
    return static_cast<std::size_t>(std::find(gaps_.begin(), gaps_.end(), 0.0) - gaps_.begin());
  }

 private:
  std::vector<ArmParams> arms_;
  double mu_star_;
  std::vector<double> gaps_;
};

enum class TieBreak { lowest_index, uniform_random };

/// Thompson sampling configuration. Arms listed in `known` use the given value
/// as their sample every round instead of a posterior draw (a point-mass
/// posterior) and are skipped during initialization.
struct PolicySpec {
  PriorAlpha prior{};
  std::map<std::size_t, double> known;
  TieBreak tie_break = TieBreak::uniform_random;

  static PolicySpec thompson(double alpha, TieBreak tb = TieBreak::uniform_random) {
    PolicySpec p;
    p.prior = PriorAlpha(alpha);
    p.tie_break = tb;
    return p;
  }

  static PolicySpec thompson_with_known_arms(double alpha, std::map<std::size_t, double> known,
                                             TieBreak tb = TieBreak::uniform_random) {
    PolicySpec p = thompson(alpha, tb);
    p.known = std::move(known);
    return p;
  }

  bool is_known(std::size_t arm) const { return known.find(arm) != known.end(); }

  void validate(std::size_t num_arms) const {
    for (const auto& [idx, value] : known) {
      if (idx >= num_arms) {
        throw std::invalid_argument("known arm index " + std::to_string(idx) + " out of range");
      }
      if (!std::isfinite(value)) {
        throw std::invalid_argument("known arm " + std::to_string(idx) + ": value must be finite");
      }
    }
    if (known.size() >= num_arms) {
      throw std::invalid_argument("at least one arm must be unknown");
    }
  }

  std::size_t unknown_count(std::size_t num_arms) const { return num_arms - known.size(); }
};

/// Per-round record of one episode. Round t (1-based) is stored at index t-1.
struct RegretTrace {
  std::uint64_t horizon = 0;
  std::vector<std::uint32_t> chosen;
  std::vector<double> cum_regret;
  std::vector<std::uint64_t> pulls;
};

namespace detail {

inline std::size_t select_argmax(std::span<const double> draws, TieBreak tie_break,
                                 RngStream& rng) {
  std::size_t best = 0;
  std::size_t ties = 1;
  for (std::size_t i = 1; i < draws.size(); ++i) {
    if (draws[i] > draws[best]) {
      best = i;
      ties = 1;
    } else if (draws[i] == draws[best]) {
      ++ties;
    }
  }
  if (ties == 1 || tie_break == TieBreak::lowest_index) return best;
  auto pick = rng.uniform_index(ties);
  for (std::size_t i = best; i < draws.size(); ++i) {
    if (draws[i] == draws[best]) {
      if (pick == 0) return i;
      --pick;
    }
  }
  return best;
}

inline void draw_samples(std::span<const SufficientStats> state, const PolicySpec& spec,
                         RngStream& rng, std::span<double> out) {
  for (std::size_t i = 0; i < state.size(); ++i) {
    const auto it = spec.known.find(i);
    out[i] = it != spec.known.end() ? it->second
                                    : sample_posterior_mean(rng, state[i], spec.prior);
  }
}

inline double regret_of(std::span<const double> gaps, std::span<const std::uint64_t> pulls) {
  double total = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) total += gaps[i] * static_cast<double>(pulls[i]);
  return total;
}

}  // namespace detail

/// One Thompson sampling decision: sample each arm's mean, return the argmax.
inline std::size_t step_thompson(std::span<const SufficientStats> state, const PolicySpec& spec,
                                 RngStream& rng) {
  std::vector<double> draws(state.size());
  detail::draw_samples(state, spec, rng, draws);
  return detail::select_argmax(draws, spec.tie_break, rng);
}

/// Number of rounds spent on forced initialization.
inline std::uint64_t initialization_rounds(const Environment& env, const PolicySpec& spec) {
  return spec.unknown_count(env.size()) * spec.prior.n0;
}

/// Runs one episode and calls on_round(t, arm, cum_regret) after every round
/// t = 1..horizon. Returns the final pull counts. Memory is O(K).
template <class OnRound>
std::vector<std::uint64_t> simulate(const Environment& env, const PolicySpec& spec,
                                    std::uint64_t horizon, RngStream rng, OnRound&& on_round) {
  spec.validate(env.size());
  const std::size_t k = env.size();
  const std::uint64_t init = initialization_rounds(env, spec);
  if (horizon < init) {
    throw std::invalid_argument("horizon " + std::to_string(horizon) +
                                " too small: initialization needs " + std::to_string(init) +
                                " rounds");
  }

  std::vector<RngStream> reward_rng;
  reward_rng.reserve(k);
  for (std::size_t i = 0; i < k; ++i) reward_rng.push_back(rng.fork(i + 1));

  std::vector<std::size_t> unknown;
  for (std::size_t i = 0; i < k; ++i) {
    if (!spec.is_known(i)) unknown.push_back(i);
  }

  std::vector<SufficientStats> state(k);
  std::vector<std::uint64_t> pulls(k, 0);
  std::vector<double> draws(k);
  const auto& gaps = env.gaps();

  for (std::uint64_t t = 1; t <= horizon; ++t) {
    std::size_t arm;
    if (t <= init) {
      arm = unknown[(t - 1) % unknown.size()];
    } else {
      detail::draw_samples(state, spec, rng, draws);
      arm = detail::select_argmax(draws, spec.tie_break, rng);
    }
    const auto& p = env.arm(arm);
    state[arm].push(sample_normal(reward_rng[arm], p.mu, p.sigma2));
    ++pulls[arm];
    on_round(t, arm, detail::regret_of(gaps, pulls));
  }
  return pulls;
}

inline RegretTrace run_episode(const Environment& env, const PolicySpec& spec,
                               std::uint64_t horizon, RngStream rng) {
  RegretTrace trace;
  trace.horizon = horizon;
  trace.chosen.reserve(horizon);
  trace.cum_regret.reserve(horizon);
  trace.pulls = simulate(env, spec, horizon, std::move(rng),
                         [&](std::uint64_t, std::size_t arm, double regret) {
                           trace.chosen.push_back(static_cast<std::uint32_t>(arm));
                           trace.cum_regret.push_back(regret);
                         });
  return trace;
}

/// Checkpoints floor(10^{k/8}) <= horizon, deduplicated, with the horizon itself
/// appended when it is not already on the grid.
inline std::vector<std::uint64_t> log_checkpoints(std::uint64_t horizon) {
  std::vector<std::uint64_t> out;
  for (int k = 0;; ++k) {
    const auto c = static_cast<std::uint64_t>(std::floor(std::pow(10.0, k / 8.0) + 1e-9));
    if (c > horizon) break;
    if (out.empty() || out.back() != c) out.push_back(c);
  }
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

/// Mean and standard error across replications at each checkpoint.
struct ReplicationSummary {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> mean;
  std::vector<double> std_error;
  /// per_rep[r][c]: regret of replication r at checkpoints[c].
  std::vector<std::vector<double>> per_rep;

  std::vector<double> finals() const {
    std::vector<double> out;
    out.reserve(per_rep.size());
    for (const auto& row : per_rep) out.push_back(row.back());
    return out;
  }
};

/// Reduces a per-replication matrix in replication order, so the result does
/// not depend on how the replications were scheduled.
inline ReplicationSummary aggregate(std::vector<std::uint64_t> checkpoints,
                                    std::vector<std::vector<double>> per_rep) {
  ReplicationSummary s;
  const std::size_t nc = checkpoints.size();
  const auto reps = static_cast<double>(per_rep.size());
  s.mean.assign(nc, 0.0);
  s.std_error.assign(nc, 0.0);
  for (std::size_t c = 0; c < nc; ++c) {
    double sum = 0.0;
    for (const auto& row : per_rep) sum += row.at(c);
    const double mean = sum / reps;
    double sq = 0.0;
    for (const auto& row : per_rep) sq += (row[c] - mean) * (row[c] - mean);
    s.mean[c] = mean;
    s.std_error[c] = per_rep.size() > 1 ? std::sqrt(sq / (reps - 1.0) / reps) : 0.0;
  }
  s.checkpoints = std::move(checkpoints);
  s.per_rep = std::move(per_rep);
  return s;
}

/// Runs `reps` independent episodes, replication r on RngStream(base_seed, r),
/// on `jobs` worker threads (0 = hardware concurrency).
inline ReplicationSummary run_replications(const Environment& env, const PolicySpec& spec,
                                           std::uint64_t horizon, std::uint64_t reps,
                                           std::uint64_t base_seed,
                                           std::vector<std::uint64_t> checkpoints = {},
                                           unsigned jobs = 0) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (checkpoints.empty()) checkpoints = log_checkpoints(horizon);
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) || checkpoints.back() > horizon ||
      checkpoints.front() < 1) {
    throw std::invalid_argument("checkpoints must be sorted and lie in [1, horizon]");
  }
  spec.validate(env.size());
  if (horizon < initialization_rounds(env, spec)) {
    throw std::invalid_argument("horizon too small for initialization");
  }

  std::vector<std::vector<double>> per_rep(reps);
  auto run_one = [&](std::uint64_t r) {
    std::vector<double> row;
    row.reserve(checkpoints.size());
    std::size_t next = 0;
    simulate(env, spec, horizon, RngStream(base_seed, r),
             [&](std::uint64_t t, std::size_t, double regret) {
               while (next < checkpoints.size() && checkpoints[next] == t) {
                 row.push_back(regret);
                 ++next;
               }
             });
    per_rep[r] = std::move(row);
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(jobs, reps));
  if (workers <= 1) {
    for (std::uint64_t r = 0; r < reps; ++r) run_one(r);
  } else {
    std::atomic<std::uint64_t> next_rep{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t r; (r = next_rep.fetch_add(1)) < reps;) {
          try {
            run_one(r);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next_rep = reps;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  return aggregate(std::move(checkpoints), std::move(per_rep));
}

}  // namespace gauss_ts
