#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "rng.hpp"
#include "scheme.hpp"

namespace skmod {

enum class SchemeId { Uncoded, Sk, Proposed, Coupled };

inline const char* scheme_name(SchemeId s) {
  switch (s) {
    case SchemeId::Uncoded: return "uncoded";
    case SchemeId::Sk: return "sk";
    case SchemeId::Proposed: return "proposed";
    case SchemeId::Coupled: return "coupled";
  }
  return "?";
}

inline bool parse_scheme(const std::string& name, SchemeId& out) {
  if (name == "uncoded") out = SchemeId::Uncoded;
  else if (name == "sk") out = SchemeId::Sk;
  else if (name == "proposed") out = SchemeId::Proposed;
  else if (name == "coupled") out = SchemeId::Coupled;
  else return false;
  return true;
}

struct RngSpec {
  std::uint64_t master_seed = 1;
};

struct SimResult {
  std::uint64_t trials = 0;
  std::uint64_t symbol_errors = 0;
  std::uint64_t bit_errors = 0;
  std::vector<std::uint64_t> aliasing_by_round;  // feedback rounds only
  std::vector<double> mean_power_fwd;
  std::vector<double> mean_power_fb;
  double ser = 0.0, ser_ci95 = 0.0;  // CI values are 95% half-widths
  double ber = 0.0, ber_ci95 = 0.0;
  std::uint64_t master_seed = 0;
};

namespace detail {

// Per-trial variate block, always drawn in the same order (message, forward
// noise, feedback noise, dither) so a trial's realization depends only on
// (master_seed, trial index), never on scheduling or scheme internals.
struct TrialDraw {
  Message w = 0;
  std::vector<double> z;   // forward noise, one per round
  std::vector<double> zt;  // feedback noise, rounds 1..N-1
  std::vector<double> v;   // dither, rounds 1..N-1

  void draw(SchemeId scheme, const SystemConfig& cfg, const DerivedParams& dp,
            std::uint64_t message_levels, int n, TrialRng& rng) {
    w = rng.next_below(message_levels);
    z.resize(static_cast<std::size_t>(n));
    double sigma = std::sqrt(cfg.sigma2);
    for (auto& zi : z) zi = sigma * rng.next_gaussian();
    if (scheme == SchemeId::Proposed || scheme == SchemeId::Coupled) {
      zt.resize(static_cast<std::size_t>(n - 1));
      double sigma_fb = std::sqrt(cfg.sigma2_fb);
      for (auto& zi : zt) zi = sigma_fb * rng.next_gaussian();
      if (scheme == SchemeId::Proposed) {
        v.resize(static_cast<std::size_t>(n - 1));
        for (auto& vi : v) vi = rng.next_dither(dp.d);
      }
    }
  }
};

inline void run_one(SchemeId scheme, const SystemConfig& cfg, const DerivedParams& dp,
                    const PamConstellation& c, const TrialDraw& in, TrialRecord& rec) {
  switch (scheme) {
    case SchemeId::Uncoded: run_trial_uncoded(cfg, c, in.w, in.z[0], rec); break;
    case SchemeId::Sk: run_trial_sk(cfg, dp, c, in.w, in.z, rec); break;
    case SchemeId::Proposed: run_trial_proposed(cfg, dp, c, in.w, in.z, in.zt, in.v, rec); break;
    case SchemeId::Coupled: run_trial_coupled(cfg, dp, c, in.w, in.z, in.zt, rec); break;
  }
}

struct ChunkStats {
  std::uint64_t symbol_errors = 0;
  std::uint64_t bit_errors = 0;
  std::vector<std::uint64_t> aliasing;
  std::vector<double> power_fwd;
  std::vector<double> power_fb;
};

constexpr std::uint64_t kChunkTrials = 8192;

}  // namespace detail

// Seeded error-rate estimate. Trials are split into fixed-size chunks pulled
// by a worker pool; chunk statistics are merged in chunk order afterwards, so
// the result is byte-identical for any worker count.
inline SimResult estimate(SchemeId scheme, const SystemConfig& cfg, std::uint64_t trials,
                          RngSpec rng, unsigned workers = 0) {
  if (trials < 1) throw config_error("estimate: trials must be >= 1");
  validate(cfg);
  int n = (scheme == SchemeId::Uncoded) ? 1 : cfg.n_rounds;
  int bits = (scheme == SchemeId::Uncoded) ? cfg.rate_bits_per_use : cfg.total_bits();
  DerivedParams dp;
  if (scheme != SchemeId::Uncoded) dp = derive_params(cfg);
  PamConstellation c = build_constellation(static_cast<unsigned>(bits));

  std::uint64_t n_chunks = (trials + detail::kChunkTrials - 1) / detail::kChunkTrials;
  std::vector<detail::ChunkStats> chunks(n_chunks);

  unsigned hw = std::thread::hardware_concurrency();
  unsigned pool = workers ? workers : (hw ? hw : 1);
  if (pool > n_chunks) pool = static_cast<unsigned>(n_chunks);

  std::atomic<std::uint64_t> next_chunk{0};
  auto worker = [&]() {
    detail::TrialDraw in;
    TrialRecord rec;
    for (;;) {
      std::uint64_t ci = next_chunk.fetch_add(1, std::memory_order_relaxed);
      if (ci >= n_chunks) break;
      detail::ChunkStats& st = chunks[ci];
      st.aliasing.assign(static_cast<std::size_t>(n > 1 ? n - 1 : 0), 0);
      st.power_fwd.assign(static_cast<std::size_t>(n), 0.0);
      st.power_fb.assign(static_cast<std::size_t>(n > 1 ? n - 1 : 0), 0.0);
      std::uint64_t begin = ci * detail::kChunkTrials;
      std::uint64_t end = std::min(trials, begin + detail::kChunkTrials);
      for (std::uint64_t t = begin; t < end; ++t) {
        TrialRng trng(rng.master_seed, t);
        in.draw(scheme, cfg, dp, c.levels, n, trng);
        detail::run_one(scheme, cfg, dp, c, in, rec);
        st.symbol_errors += rec.decode_error ? 1 : 0;
        st.bit_errors += static_cast<std::uint64_t>(rec.bit_errors);
        for (std::size_t r = 0; r < rec.aliasing.size(); ++r) st.aliasing[r] += rec.aliasing[r];
        for (std::size_t r = 0; r < rec.tx_power_fwd.size(); ++r)
          st.power_fwd[r] += rec.tx_power_fwd[r];
        for (std::size_t r = 0; r < rec.tx_power_fb.size(); ++r)
          st.power_fb[r] += rec.tx_power_fb[r];
      }
    }
  };

  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (unsigned i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }

  SimResult res;
  res.trials = trials;
  res.master_seed = rng.master_seed;
  res.aliasing_by_round.assign(static_cast<std::size_t>(n > 1 ? n - 1 : 0), 0);
  res.mean_power_fwd.assign(static_cast<std::size_t>(n), 0.0);
  res.mean_power_fb.assign(static_cast<std::size_t>(n > 1 ? n - 1 : 0), 0.0);
  for (const auto& st : chunks) {  // fixed merge order
    res.symbol_errors += st.symbol_errors;
    res.bit_errors += st.bit_errors;
    for (std::size_t r = 0; r < res.aliasing_by_round.size(); ++r)
      res.aliasing_by_round[r] += st.aliasing[r];
    for (std::size_t r = 0; r < res.mean_power_fwd.size(); ++r)
      res.mean_power_fwd[r] += st.power_fwd[r];
    for (std::size_t r = 0; r < res.mean_power_fb.size(); ++r)
      res.mean_power_fb[r] += st.power_fb[r];
  }
  double tn = static_cast<double>(trials);
  for (auto& p : res.mean_power_fwd) p /= tn;
  for (auto& p : res.mean_power_fb) p /= tn;
  res.ser = static_cast<double>(res.symbol_errors) / tn;
  res.ser_ci95 = 1.96 * std::sqrt(res.ser * (1.0 - res.ser) / tn);
  double total_bits = tn * static_cast<double>(bits);
  res.ber = static_cast<double>(res.bit_errors) / total_bits;
  res.ber_ci95 = 1.96 * std::sqrt(res.ber * (1.0 - res.ber) / total_bits);
  return res;
}

// One proposed and one coupled execution per trial on identical noise; the
// sample paths must agree bit-for-bit until the first aliasing event.
struct CouplingReport {
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  std::uint64_t no_alias_trials = 0;
  std::vector<std::uint64_t> first_alias_round;       // histogram over feedback rounds
  std::vector<std::uint64_t> coupled_alias_by_round;  // per-round flag counts in the coupled run
  std::uint64_t coupled_decode_errors = 0;
  std::uint64_t coupled_any_event = 0;  // any aliasing flag or decode error
  std::uint64_t proposed_decode_errors = 0;
  bool has_violation = false;
  std::uint64_t first_violation_trial = 0;
};

inline CouplingReport verify_coupling(const SystemConfig& cfg, std::uint64_t trials, RngSpec rng) {
  if (trials < 1) throw config_error("verify_coupling: trials must be >= 1");
  validate(cfg);
  if (cfg.n_rounds < 2) throw config_error("verify_coupling: needs n_rounds >= 2");
  DerivedParams dp = derive_params(cfg);
  PamConstellation c = build_constellation(static_cast<unsigned>(cfg.total_bits()));
  int n = cfg.n_rounds;

  CouplingReport rep;
  rep.trials = trials;
  rep.first_alias_round.assign(static_cast<std::size_t>(n - 1), 0);
  rep.coupled_alias_by_round.assign(static_cast<std::size_t>(n - 1), 0);

  detail::TrialDraw in;
  TrialRecord prop, coup;
  auto bits_equal = [](double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
  };
  for (std::uint64_t t = 0; t < trials; ++t) {
    TrialRng trng(rng.master_seed, t);
    in.draw(SchemeId::Proposed, cfg, dp, c.levels, n, trng);
    run_trial_proposed(cfg, dp, c, in.w, in.z, in.zt, in.v, prop);
    run_trial_coupled(cfg, dp, c, in.w, in.z, in.zt, coup);

    std::size_t first = static_cast<std::size_t>(n - 1);
    for (std::size_t k = 0; k + 1 < static_cast<std::size_t>(n); ++k) {
      if (prop.aliasing[k]) {
        first = k;
        break;
      }
    }
    bool ok = true;
    // flags and estimation errors must agree through the first flagged round
    std::size_t flag_limit = std::min(first + 1, static_cast<std::size_t>(n - 1));
    for (std::size_t k = 0; k < flag_limit; ++k)
      if (prop.aliasing[k] != coup.aliasing[k]) ok = false;
    std::size_t eps_limit = (first == static_cast<std::size_t>(n - 1))
                                ? static_cast<std::size_t>(n)
                                : first + 1;
    for (std::size_t k = 0; k < eps_limit; ++k)
      if (!bits_equal(prop.eps[k], coup.eps[k])) ok = false;
    if (first == static_cast<std::size_t>(n - 1)) {
      ++rep.no_alias_trials;
      if (prop.w_decoded != coup.w_decoded) ok = false;  // clean paths decode identically
    } else {
      ++rep.first_alias_round[first];
    }
    if (!ok) {
      if (!rep.has_violation) {
        rep.has_violation = true;
        rep.first_violation_trial = t;
      }
      ++rep.violations;
    }

    bool any_event = coup.decode_error;
    for (std::size_t k = 0; k + 1 < static_cast<std::size_t>(n); ++k) {
      rep.coupled_alias_by_round[k] += coup.aliasing[k];
      if (coup.aliasing[k]) any_event = true;
    }
    rep.coupled_any_event += any_event ? 1 : 0;
    rep.coupled_decode_errors += coup.decode_error ? 1 : 0;
    rep.proposed_decode_errors += prop.decode_error ? 1 : 0;
  }
  return rep;
}

// Unbiased per-round sample variance of the estimation error, with the
// Gaussian-case standard error var*sqrt(2/(trials-1)).
struct VarianceProfile {
  std::vector<double> var;
  std::vector<double> se;
};

inline VarianceProfile variance_profile(SchemeId scheme, const SystemConfig& cfg,
                                        std::uint64_t trials, RngSpec rng) {
  if (trials < 2) throw config_error("variance_profile: trials must be >= 2");
  validate(cfg);
  int n = (scheme == SchemeId::Uncoded) ? 1 : cfg.n_rounds;
  int bits = (scheme == SchemeId::Uncoded) ? cfg.rate_bits_per_use : cfg.total_bits();
  DerivedParams dp;
  if (scheme != SchemeId::Uncoded) dp = derive_params(cfg);
  PamConstellation c = build_constellation(static_cast<unsigned>(bits));

  std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sumsq(static_cast<std::size_t>(n), 0.0);
  detail::TrialDraw in;
  TrialRecord rec;
  for (std::uint64_t t = 0; t < trials; ++t) {
    TrialRng trng(rng.master_seed, t);
    in.draw(scheme, cfg, dp, c.levels, n, trng);
    detail::run_one(scheme, cfg, dp, c, in, rec);
    for (std::size_t r = 0; r < rec.eps.size(); ++r) {
      sum[r] += rec.eps[r];
      sumsq[r] += rec.eps[r] * rec.eps[r];
    }
  }
  VarianceProfile out;
  out.var.resize(static_cast<std::size_t>(n));
  out.se.resize(static_cast<std::size_t>(n));
  double tn = static_cast<double>(trials);
  for (std::size_t r = 0; r < out.var.size(); ++r) {
    out.var[r] = (sumsq[r] - sum[r] * sum[r] / tn) / (tn - 1.0);
    out.se[r] = out.var[r] * std::sqrt(2.0 / (tn - 1.0));
  }
  return out;
}

}  // namespace skmod
