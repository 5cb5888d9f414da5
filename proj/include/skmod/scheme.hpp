#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "numerics.hpp"
#include "pam.hpp"

namespace skmod {

// Physical setup shared by all schemes. Powers and variances are linear.
struct SystemConfig {
  double P = 1.0;         // forward power constraint
  double P_fb = 1.0;      // feedback power constraint
  double sigma2 = 0.1;    // forward noise variance
  double sigma2_fb = 0.0; // feedback noise variance, 0 = noiseless feedback
  int n_rounds = 1;
  int rate_bits_per_use = 1;
  double pe_target = 1e-3;
  double p_m = 0.0;       // per-round aliasing budget; 0 selects pe_target/(2N)

  double snr() const { return P / sigma2; }
  bool noiseless_fb() const { return sigma2_fb == 0.0; }
  double snr_fb() const {
    return noiseless_fb() ? std::numeric_limits<double>::infinity() : P_fb / sigma2_fb;
  }
  double dsnr() const { return snr_fb() / snr(); }
  double pm_effective() const { return p_m > 0.0 ? p_m : pe_target / (2.0 * n_rounds); }
  int total_bits() const { return n_rounds * rate_bits_per_use; }
};

// Scheme constants fixed before any trial runs.
struct DerivedParams {
  double lambda = 0.0;
  double d = 0.0;      // modulo interval, sqrt(12 * P_fb)
  double alpha = 0.0;  // forward scaling of the wrapped error description
  std::vector<double> gamma;     // gamma[n]: feedback scaling, rounds 1..N-1
  std::vector<double> beta;      // beta[n]: estimate update gain applied after round n+2's reception
  std::vector<double> sigma_n2;  // sigma_n2[n]: estimation-error variance entering round n+1
};

// Everything observable from one protocol execution.
struct TrialRecord {
  Message w_true = 0;
  Message w_decoded = 0;
  std::vector<double> eps;        // estimation error after each round
  std::vector<double> eps_tilde;  // wrapped error description recovered per feedback round
  std::vector<std::uint8_t> aliasing;  // per feedback round: did gamma*eps + noise leave [-d/2, d/2)
  bool decode_error = false;
  std::vector<double> tx_power_fwd;  // X_n^2
  std::vector<double> tx_power_fb;   // feedback transmit value squared
  int bit_errors = 0;
};

inline void validate(const SystemConfig& cfg) {
  if (!(cfg.P > 0.0) || !(cfg.P_fb > 0.0)) throw config_error("config: powers must be positive");
  if (!(cfg.sigma2 > 0.0)) throw config_error("config: sigma2 must be positive");
  if (!(cfg.sigma2_fb >= 0.0)) throw config_error("config: sigma2_fb must be nonnegative");
  if (cfg.n_rounds < 1) throw config_error("config: n_rounds must be >= 1");
  if (cfg.rate_bits_per_use < 1 || cfg.total_bits() > 40)
    throw config_error("config: total bits N*R must be in [1, 40]");
  if (!(cfg.pe_target > 0.0 && cfg.pe_target < 1.0))
    throw config_error("config: pe_target outside (0,1)");
  double pm = cfg.pm_effective();
  if (!(pm > 0.0 && pm < 1.0)) throw config_error("config: p_m outside (0,1)");
  if (!cfg.noiseless_fb() && !(cfg.dsnr() > 1.0))
    throw config_error("config: proposed scheme needs excess feedback snr (dsnr > 1)");
}

// lambda, d, alpha and the per-round gamma/beta/sigma^2 ladder. The variance
// recursion sigma_{n+1}^2 = sigma_n^2 * (1 + snr*x) / (1 + snr), with
// x = sigma2_fb/(lambda*P_fb), is the minimum-variance update and equals the
// closed form snr_after_n gives in analysis.hpp. Noiseless feedback sets x=0.
inline DerivedParams derive_params(const SystemConfig& cfg) {
  validate(cfg);
  DerivedParams dp;
  double pm = cfg.pm_effective();
  double qi = qfunc_inv(pm / 2.0);
  dp.lambda = 3.0 / (qi * qi);
  dp.d = std::sqrt(12.0 * cfg.P_fb);
  dp.alpha = std::sqrt(cfg.P / (dp.lambda * cfg.P_fb));

  double x = cfg.noiseless_fb() ? 0.0 : cfg.sigma2_fb / (dp.lambda * cfg.P_fb);
  if (x >= 1.0)
    throw feasibility_error("error floor violated: lambda * feedback snr <= 1");

  double snr = cfg.snr();
  double sigma = std::sqrt(cfg.sigma2);
  int n = cfg.n_rounds;
  dp.sigma_n2.resize(static_cast<std::size_t>(n));
  dp.gamma.resize(static_cast<std::size_t>(n - 1));
  dp.beta.resize(static_cast<std::size_t>(n - 1));

  dp.sigma_n2[0] = 1.0 / snr;
  double shrink = (1.0 + snr * x) / (1.0 + snr);
  double gain = std::sqrt(snr * (1.0 - x)) / (1.0 + snr);
  for (int k = 0; k + 1 < n; ++k) {
    double s2 = dp.sigma_n2[static_cast<std::size_t>(k)];
    dp.gamma[static_cast<std::size_t>(k)] =
        std::sqrt((dp.lambda * cfg.P_fb - cfg.sigma2_fb) / s2);
    dp.beta[static_cast<std::size_t>(k)] = std::sqrt(s2) / sigma * gain;
    dp.sigma_n2[static_cast<std::size_t>(k) + 1] = s2 * shrink;
  }
  return dp;
}

namespace detail {

inline void size_record(TrialRecord& rec, int n) {
  rec.eps.resize(static_cast<std::size_t>(n));
  rec.eps_tilde.resize(static_cast<std::size_t>(n - 1));
  rec.aliasing.resize(static_cast<std::size_t>(n - 1));
  rec.tx_power_fwd.resize(static_cast<std::size_t>(n));
  rec.tx_power_fb.resize(static_cast<std::size_t>(n - 1));
}

inline void finish_record(TrialRecord& rec, Message w, double theta_hat,
                          const PamConstellation& c) {
  rec.w_true = w;
  rec.w_decoded = decode_min_distance(theta_hat, c);
  rec.decode_error = (rec.w_decoded != w);
  rec.bit_errors = bit_errors_between(rec.w_decoded, w);
}

// Shared body of the proposed and coupled runners. Both must execute the
// no-aliasing arithmetic on identical operands in identical order, so the
// wrapped error description is formed from t = fma(gamma, eps, noise) and the
// modulo is applied as a conditional integer-multiple-of-d correction rather
// than through a separately reassociated expression. with_modulo selects at
// runtime so only one compiled body exists per binary.
inline void run_core(bool with_modulo, const SystemConfig& cfg, const DerivedParams& dp,
                     const PamConstellation& c, Message w, std::span<const double> noise_fwd,
                     std::span<const double> noise_fb, std::span<const double> dither,
                     TrialRecord& rec) {
  int n = cfg.n_rounds;
  std::size_t rounds = static_cast<std::size_t>(n);
  if (noise_fwd.size() != rounds || noise_fb.size() + 1 != rounds ||
      (with_modulo && dither.size() + 1 != rounds))
    throw config_error("run_trial: noise/dither sequence length mismatch");
  size_record(rec, n);

  double sqrt_p = std::sqrt(cfg.P);
  double theta = gray_encode(w, c);
  double x1 = sqrt_p * theta;
  double y = x1 + noise_fwd[0];
  double theta_hat = y / sqrt_p;
  rec.tx_power_fwd[0] = x1 * x1;
  rec.eps[0] = theta_hat - theta;

  double half_d = 0.5 * dp.d;
  for (std::size_t k = 0; k + 1 < rounds; ++k) {
    double eps_n = rec.eps[k];
    double t = std::fma(dp.gamma[k], eps_n, noise_fb[k]);
    bool wrapped = (t < -half_d) || (t >= half_d);
    rec.aliasing[k] = wrapped ? 1 : 0;

    double eps_tilde;
    if (with_modulo) {
      double fb_tx = mod_reduce(dp.gamma[k] * theta_hat + dither[k], dp.d);
      rec.tx_power_fb[k] = fb_tx * fb_tx;
      if (wrapped) {
        double mult = std::floor(t / dp.d + 0.5);
        if (mult == 0.0) mult = (t < 0.0) ? -1.0 : 1.0;  // quotient rounded back in range
        eps_tilde = t - mult * dp.d;
      } else {
        eps_tilde = t;  // bitwise the coupled-system value
      }
    } else {
      double fb_tx = dp.gamma[k] * theta_hat;
      rec.tx_power_fb[k] = fb_tx * fb_tx;
      eps_tilde = t;
    }
    rec.eps_tilde[k] = eps_tilde;

    double x = dp.alpha * eps_tilde;
    y = x + noise_fwd[k + 1];
    rec.tx_power_fwd[k + 1] = x * x;
    theta_hat = std::fma(-dp.beta[k], y, theta_hat);
    rec.eps[k + 1] = theta_hat - theta;
  }
  finish_record(rec, w, theta_hat, c);
}

}  // namespace detail

// Modulo scheme of record: Terminal B sends a dithered, wrapped, scaled copy
// of its current estimate; Terminal A unwraps the estimation error and sends
// it back scaled to power P.
inline void run_trial_proposed(const SystemConfig& cfg, const DerivedParams& dp,
                               const PamConstellation& c, Message w,
                               std::span<const double> noise_fwd,
                               std::span<const double> noise_fb, std::span<const double> dither,
                               TrialRecord& rec) {
  detail::run_core(true, cfg, dp, c, w, noise_fwd, noise_fb, dither, rec);
}

inline TrialRecord run_trial_proposed(const SystemConfig& cfg, const DerivedParams& dp, Message w,
                                      std::span<const double> noise_fwd,
                                      std::span<const double> noise_fb,
                                      std::span<const double> dither) {
  TrialRecord rec;
  run_trial_proposed(cfg, dp, build_constellation(static_cast<unsigned>(cfg.total_bits())), w,
                     noise_fwd, noise_fb, dither, rec);
  return rec;
}

// Analysis twin with the modulo removed: feedback power is unconstrained and
// the dither cancels, but aliasing flags are still recorded from the same
// predicate so sample paths can be compared against the proposed runner.
inline void run_trial_coupled(const SystemConfig& cfg, const DerivedParams& dp,
                              const PamConstellation& c, Message w,
                              std::span<const double> noise_fwd,
                              std::span<const double> noise_fb, TrialRecord& rec) {
  detail::run_core(false, cfg, dp, c, w, noise_fwd, noise_fb, {}, rec);
}

inline TrialRecord run_trial_coupled(const SystemConfig& cfg, const DerivedParams& dp, Message w,
                                     std::span<const double> noise_fwd,
                                     std::span<const double> noise_fb) {
  TrialRecord rec;
  run_trial_coupled(cfg, dp, build_constellation(static_cast<unsigned>(cfg.total_bits())), w,
                    noise_fwd, noise_fb, rec);
  return rec;
}

// Noiseless-feedback baseline: B feeds back its estimate over a clean channel,
// A retransmits the estimation error at full power each round.
inline void run_trial_sk(const SystemConfig& cfg, const DerivedParams& dp,
                         const PamConstellation& c, Message w, std::span<const double> noise_fwd,
                         TrialRecord& rec) {
  if (!cfg.noiseless_fb()) throw config_error("run_trial_sk: requires noiseless feedback");
  int n = cfg.n_rounds;
  std::size_t rounds = static_cast<std::size_t>(n);
  if (noise_fwd.size() != rounds) throw config_error("run_trial: noise sequence length mismatch");
  detail::size_record(rec, n);

  double sqrt_p = std::sqrt(cfg.P);
  double theta = gray_encode(w, c);
  double x1 = sqrt_p * theta;
  double y = x1 + noise_fwd[0];
  double theta_hat = y / sqrt_p;
  rec.tx_power_fwd[0] = x1 * x1;
  rec.eps[0] = theta_hat - theta;

  for (std::size_t k = 0; k + 1 < rounds; ++k) {
    double eps_n = rec.eps[k];
    double fb_tx = theta_hat;  // estimate echoed verbatim over the clean channel
    rec.tx_power_fb[k] = fb_tx * fb_tx;
    rec.eps_tilde[k] = eps_n;
    rec.aliasing[k] = 0;

    double alpha_n = sqrt_p / std::sqrt(dp.sigma_n2[k]);
    double x = alpha_n * eps_n;
    y = x + noise_fwd[k + 1];
    rec.tx_power_fwd[k + 1] = x * x;
    theta_hat = std::fma(-dp.beta[k], y, theta_hat);
    rec.eps[k + 1] = theta_hat - theta;
  }
  detail::finish_record(rec, w, theta_hat, c);
}

inline TrialRecord run_trial_sk(const SystemConfig& cfg, const DerivedParams& dp, Message w,
                                std::span<const double> noise_fwd) {
  TrialRecord rec;
  run_trial_sk(cfg, dp, build_constellation(static_cast<unsigned>(cfg.total_bits())), w, noise_fwd,
               rec);
  return rec;
}

// Single-shot PAM baseline at the full message size.
inline void run_trial_uncoded(const SystemConfig& cfg, const PamConstellation& c, Message w,
                              double z1, TrialRecord& rec) {
  detail::size_record(rec, 1);
  double sqrt_p = std::sqrt(cfg.P);
  double theta = gray_encode(w, c);
  double x1 = sqrt_p * theta;
  rec.tx_power_fwd[0] = x1 * x1;
  double theta_hat = (x1 + z1) / sqrt_p;
  rec.eps[0] = theta_hat - theta;
  detail::finish_record(rec, w, theta_hat, c);
}

inline TrialRecord run_trial_uncoded(const SystemConfig& cfg, Message w, double z1) {
  TrialRecord rec;
  run_trial_uncoded(cfg, build_constellation(static_cast<unsigned>(cfg.total_bits())), w, z1, rec);
  return rec;
}

}  // namespace skmod
