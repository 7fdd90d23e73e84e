#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "levyexit/model_spec.hpp"
#include "levyexit/pricing.hpp"

namespace levyexit {

enum class HorizonMode { Fixed, Exponential };

struct PathConfig {
  double step = 0.01;
  HorizonMode horizon_mode = HorizonMode::Exponential;
  double horizon = 1.0;  // used when Fixed; Exponential draws zeta ~ Exp(spec.kill_q)
  bool bridge_extremes = true;
  std::uint64_t seed = 20240601;
  int workers = 0;  // 0: hardware concurrency
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_paths = 0;
};

/// Path statistics the oracle can estimate. Each is a per-path value whose mean is reported.
struct Functional {
  enum class Kind {
    RangeBelow,        // 1{S - I <= x} at the horizon
    RangeJoint,        // 1{S - I <= x, I <= y, X - I <= z}
    MaxBelow,          // 1{S <= level}
    MinAbove,          // 1{I >= level}
    FirstPassageUp,    // 1{T^x < horizon}
    OvershootBelow,    // 1{T^x < horizon, X - x <= level}
    DrawdownHit,       // 1{V_x < horizon}
    DrawupHit,         // 1{V^x < horizon}
    RangeExitBottom,   // 1{U_x < horizon, X = I}
    RangeExitTop,      // 1{U_x < horizon, X = S}
    ExitUp,            // 1{T_a^b < horizon, exit above b}
    ExitDown,          // 1{T_a^b < horizon, exit below -a}
    BarrierPayoff,     // discounted KO call plus rebates
  };
  Kind kind = Kind::RangeBelow;
  double x = 0.0, y = 0.0, z = 0.0;
  double a = 0.0, b = 0.0;
  double level = 0.0;
  BarrierContract contract;

  static Functional range_below(double x);
  static Functional range_joint(double x, double y, double z);
  static Functional max_below(double level);
  static Functional min_above(double level);
  static Functional first_passage_up(double x);
  static Functional overshoot_below(double x, double level);
  static Functional drawdown_hit(double x);
  static Functional drawup_hit(double x);
  static Functional range_exit_bottom(double x);
  static Functional range_exit_top(double x);
  static Functional exit_up(double a, double b);
  static Functional exit_down(double a, double b);
  static Functional barrier_payoff(const BarrierContract& c);
};

/// xoshiro256** with SplitMix64 seeding; stream k of a seed never overlaps stream j.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next();
  double uniform_open();  // in (0, 1]
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }
  result_type operator()() { return next(); }

 private:
  std::array<std::uint64_t, 4> s_;
};

RngStream rng_stream(std::uint64_t seed, std::uint64_t index);

/// Paths are grouped in blocks of this size; block b always uses stream b.
inline constexpr std::uint64_t kPathsPerBlock = 1024;

McEstimate simulate_functional(const LevyModelSpec& spec, const PathConfig& config, const Functional& f,
                               std::uint64_t n_paths);
/// All statistics from the same paths.
std::vector<McEstimate> simulate_functionals(const LevyModelSpec& spec, const PathConfig& config,
                                             const std::vector<Functional>& fs, std::uint64_t n_paths);

}  // namespace levyexit
