#include "levyexit/mc_oracle.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "levyexit/errors.hpp"

namespace levyexit {

using K = Functional::Kind;

Functional Functional::range_below(double x) { Functional f; f.kind = K::RangeBelow; f.x = x; return f; }
Functional Functional::range_joint(double x, double y, double z) {
  Functional f; f.kind = K::RangeJoint; f.x = x; f.y = y; f.z = z; return f;
}
Functional Functional::max_below(double level) { Functional f; f.kind = K::MaxBelow; f.level = level; return f; }
Functional Functional::min_above(double level) { Functional f; f.kind = K::MinAbove; f.level = level; return f; }
Functional Functional::first_passage_up(double x) { Functional f; f.kind = K::FirstPassageUp; f.x = x; return f; }
Functional Functional::overshoot_below(double x, double level) {
  Functional f; f.kind = K::OvershootBelow; f.x = x; f.level = level; return f;
}
Functional Functional::drawdown_hit(double x) { Functional f; f.kind = K::DrawdownHit; f.x = x; return f; }
Functional Functional::drawup_hit(double x) { Functional f; f.kind = K::DrawupHit; f.x = x; return f; }
Functional Functional::range_exit_bottom(double x) { Functional f; f.kind = K::RangeExitBottom; f.x = x; return f; }
Functional Functional::range_exit_top(double x) { Functional f; f.kind = K::RangeExitTop; f.x = x; return f; }
Functional Functional::exit_up(double a, double b) { Functional f; f.kind = K::ExitUp; f.a = a; f.b = b; return f; }
Functional Functional::exit_down(double a, double b) { Functional f; f.kind = K::ExitDown; f.a = a; f.b = b; return f; }
Functional Functional::barrier_payoff(const BarrierContract& c) {
  Functional f; f.kind = K::BarrierPayoff; f.contract = c; f.a = c.log_lower(); f.b = c.log_upper(); return f;
}

namespace {

std::uint64_t splitmix(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  const std::uint64_t mix = splitmix(s) ^ (stream * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL);
  std::uint64_t t = mix;
  for (auto& w : s_) w = splitmix(t);
}

std::uint64_t RngStream::next() {
  const std::uint64_t r = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return r;
}

double RngStream::uniform_open() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

RngStream rng_stream(std::uint64_t seed, std::uint64_t index) { return RngStream(seed, index); }

namespace {

struct Segment {
  double x0, x1, hi, lo;
  bool jump;
};

struct Running {
  double x = 0.0, sup = 0.0, inf = 0.0;
};

struct Slot {
  bool settled = false;
  double value = 0.0;
};

double payoff_at_horizon(const Functional& f, const Running& r) {
  switch (f.kind) {
    case K::RangeBelow: return r.sup - r.inf <= f.x ? 1.0 : 0.0;
    case K::RangeJoint: return (r.sup - r.inf <= f.x && r.inf <= f.y && r.x - r.inf <= f.z) ? 1.0 : 0.0;
    case K::MaxBelow: return r.sup <= f.level ? 1.0 : 0.0;
    case K::MinAbove: return r.inf >= f.level ? 1.0 : 0.0;
    case K::BarrierPayoff: {
      const auto& c = f.contract;
      return std::exp(-c.discount_rate * c.maturity) * std::max(0.0, c.y0 * std::exp(r.x) - c.strike);
    }
    default: return 0.0;
  }
}

/// Which of a lower and an upper crossing in one diffusive step happened first;
/// the level nearer the starting point is taken.
bool lower_first(double x0, double lower, double upper) { return x0 - lower < upper - x0; }

void observe(const Functional& f, const Running& r, const Segment& s, Slot& slot) {
  auto settle = [&](double v) { slot.settled = true; slot.value = v; };
  switch (f.kind) {
    case K::RangeBelow:
    case K::RangeJoint:
      if (std::max(r.sup, s.hi) - std::min(r.inf, s.lo) > f.x) settle(0.0);
      break;
    case K::MaxBelow:
      if (s.hi > f.level) settle(0.0);
      break;
    case K::MinAbove:
      if (s.lo < f.level) settle(0.0);
      break;
    case K::FirstPassageUp:
      if (s.hi >= f.x) settle(1.0);
      break;
    case K::OvershootBelow:
      if (s.hi >= f.x) settle((s.jump ? s.x1 - f.x : 0.0) <= f.level ? 1.0 : 0.0);
      break;
    case K::DrawdownHit:
      if (s.lo < r.sup - f.x) settle(1.0);
      break;
    case K::DrawupHit:
      if (s.hi > r.inf + f.x) settle(1.0);
      break;
    case K::RangeExitBottom:
    case K::RangeExitTop:
    case K::ExitUp:
    case K::ExitDown:
    case K::BarrierPayoff: {
      double lower, upper;
      if (f.kind == K::RangeExitBottom || f.kind == K::RangeExitTop) {
        lower = r.sup - f.x;
        upper = r.inf + f.x;
      } else {
        lower = -f.a;
        upper = f.b;
      }
      const bool dn = s.lo <= lower, up = s.hi >= upper;
      if (!dn && !up) break;
      const bool bottom = dn && (!up || lower_first(s.x0, lower, upper));
      if (f.kind == K::BarrierPayoff) {
        const auto& c = f.contract;
        settle(std::exp(-c.discount_rate * c.maturity) * (bottom ? c.rebate_down : c.rebate_up));
      } else {
        const bool want_bottom = f.kind == K::RangeExitBottom || f.kind == K::ExitDown;
        settle(bottom == want_bottom ? 1.0 : 0.0);
      }
      break;
    }
  }
}

struct JumpTable {
  std::vector<double> cum;  // cumulative intensities
  std::vector<double> rate;
  std::vector<int> sign;
  double total = 0.0;
};

JumpTable jump_table(const LevyModelSpec& spec) {
  JumpTable t;
  auto add = [&](const std::vector<JumpComponent>& js, int sign) {
    for (const auto& j : js) {
      t.total += j.weight / j.rate;
      t.cum.push_back(t.total);
      t.rate.push_back(j.rate);
      t.sign.push_back(sign);
    }
  };
  add(spec.pos_jumps, 1);
  add(spec.neg_jumps, -1);
  return t;
}

struct BlockSums {
  std::vector<double> sum, sumsq;
};

class Simulator {
 public:
  Simulator(const LevyModelSpec& spec, const PathConfig& cfg, const std::vector<Functional>& fs)
      : spec_(spec), cfg_(cfg), fs_(fs), jumps_(jump_table(spec)) {}

  BlockSums run_block(std::uint64_t block, std::uint64_t count) const {
    BlockSums out{std::vector<double>(fs_.size(), 0.0), std::vector<double>(fs_.size(), 0.0)};
    RngStream rng = rng_stream(cfg_.seed, block);
    std::normal_distribution<double> normal;
    std::vector<Slot> slots(fs_.size());
    for (std::uint64_t p = 0; p < count; ++p) {
      path(rng, normal, slots);
      for (std::size_t i = 0; i < fs_.size(); ++i) {
        out.sum[i] += slots[i].value;
        out.sumsq[i] += slots[i].value * slots[i].value;
      }
    }
    return out;
  }

 private:
  double exponential(RngStream& rng, double rate) const { return -std::log(rng.uniform_open()) / rate; }

  void path(RngStream& rng, std::normal_distribution<double>& normal, std::vector<Slot>& slots) const {
    for (auto& s : slots) s = Slot{};
    const double horizon =
        cfg_.horizon_mode == HorizonMode::Fixed ? cfg_.horizon : exponential(rng, spec_.kill_q);
    const double inf = std::numeric_limits<double>::infinity();
    double next_jump = jumps_.total > 0.0 ? exponential(rng, jumps_.total) : inf;
    double t = 0.0;
    Running r;
    std::size_t open = slots.size();
    auto feed = [&](const Segment& seg) {
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].settled) continue;
        observe(fs_[i], r, seg, slots[i]);
        if (slots[i].settled) --open;
      }
      r.x = seg.x1;
      r.sup = std::max(r.sup, seg.hi);
      r.inf = std::min(r.inf, seg.lo);
    };
    const double s2 = spec_.sigma * spec_.sigma;
    while (open > 0) {
      const double t1 = std::min({t + cfg_.step, next_jump, horizon});
      const double dt = t1 - t;
      if (dt > 0.0) {
        Segment seg{r.x, r.x + spec_.mu * dt, 0.0, 0.0, false};
        if (spec_.sigma > 0.0) seg.x1 += spec_.sigma * std::sqrt(dt) * normal(rng);
        const double d = seg.x1 - seg.x0;
        if (cfg_.bridge_extremes && spec_.sigma > 0.0) {
          seg.hi = 0.5 * (seg.x0 + seg.x1 + std::sqrt(d * d - 2.0 * s2 * dt * std::log(rng.uniform_open())));
          seg.lo = 0.5 * (seg.x0 + seg.x1 - std::sqrt(d * d - 2.0 * s2 * dt * std::log(rng.uniform_open())));
        } else {
          seg.hi = std::max(seg.x0, seg.x1);
          seg.lo = std::min(seg.x0, seg.x1);
        }
        feed(seg);
      }
      t = t1;
      if (open == 0 || t >= horizon) break;
      if (t == next_jump) {
        const double u = rng.uniform_open() * jumps_.total;
        std::size_t k = 0;
        while (k + 1 < jumps_.cum.size() && u > jumps_.cum[k]) ++k;
        const double size = jumps_.sign[k] * exponential(rng, jumps_.rate[k]);
        Segment seg{r.x, r.x + size, std::max(r.x, r.x + size), std::min(r.x, r.x + size), true};
        feed(seg);
        next_jump = t + exponential(rng, jumps_.total);
      }
    }
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (!slots[i].settled) slots[i].value = payoff_at_horizon(fs_[i], r);
  }

  const LevyModelSpec& spec_;
  const PathConfig& cfg_;
  const std::vector<Functional>& fs_;
  JumpTable jumps_;
};

}  // namespace

std::vector<McEstimate> simulate_functionals(const LevyModelSpec& spec, const PathConfig& cfg,
                                             const std::vector<Functional>& fs, std::uint64_t n_paths) {
  require_valid(spec);
  if (!(cfg.step > 0.0)) fail(ErrorCode::InvalidParams, "MC step must be positive");
  if (n_paths < 1000) fail(ErrorCode::InvalidParams, "MC needs at least 1000 paths");
  if (cfg.horizon_mode == HorizonMode::Exponential && !(spec.kill_q > 0.0))
    fail(ErrorCode::InvalidParams, "exponential horizon needs kill_q > 0");
  if (cfg.horizon_mode == HorizonMode::Fixed && !(cfg.horizon > 0.0))
    fail(ErrorCode::InvalidParams, "fixed horizon must be positive");

  Simulator sim(spec, cfg, fs);
  const std::uint64_t blocks = (n_paths + kPathsPerBlock - 1) / kPathsPerBlock;
  std::vector<BlockSums> partial(blocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t b; (b = next.fetch_add(1)) < blocks;)
      partial[b] = sim.run_block(b, std::min(kPathsPerBlock, n_paths - b * kPathsPerBlock));
  };
  unsigned nw = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers) : std::max(1u, std::thread::hardware_concurrency());
  nw = static_cast<unsigned>(std::min<std::uint64_t>(nw, blocks));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < nw; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<McEstimate> out(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    double s = 0.0, ss = 0.0;
    for (const auto& p : partial) {
      s += p.sum[i];
      ss += p.sumsq[i];
    }
    const double n = static_cast<double>(n_paths);
    const double mean = s / n;
    const double var = std::max(0.0, (ss - n * mean * mean) / (n - 1.0));
    out[i] = McEstimate{mean, std::sqrt(var / n), n_paths};
  }
  return out;
}

McEstimate simulate_functional(const LevyModelSpec& spec, const PathConfig& cfg, const Functional& f,
                               std::uint64_t n_paths) {
  return simulate_functionals(spec, cfg, {f}, n_paths)[0];
}

}  // namespace levyexit
