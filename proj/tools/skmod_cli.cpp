// Command-line front-end: capacity-gap tables, achievability-bound terms,
// seeded simulations, and the exact sample-path coupling check.
//
// Exit codes: 0 success, 1 usage/config error, 2 infeasible operating point
// (error floor), 3 coupling violation detected.

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <skmod/skmod.hpp>

namespace {

using nlohmann::ordered_json;

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ordered_json make_manifest(const std::string& command, ordered_json params,
                           std::optional<std::uint64_t> seed = std::nullopt) {
  ordered_json m;
  m["command"] = command;
  m["version"] = skmod::kVersion;
  m["params"] = std::move(params);
  if (seed) m["seed"] = *seed;
  m["timestamp"] = iso_timestamp();
  return m;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw skmod::config_error("cannot open output file: " + out_path);
  f << text;
}

std::string manifest_comment_block(const ordered_json& manifest) {
  std::ostringstream os;
  os << "# command=" << manifest["command"].get<std::string>() << "\n";
  os << "# version=" << manifest["version"].get<std::string>() << "\n";
  os << "# params=" << manifest["params"].dump() << "\n";
  if (manifest.contains("seed")) os << "# seed=" << manifest["seed"].dump() << "\n";
  os << "# timestamp=" << manifest["timestamp"].get<std::string>() << "\n";
  return os.str();
}

skmod::PmPolicy parse_policy(const std::string& name) {
  return name == "theorem" ? skmod::PmPolicy::TheoremSplit : skmod::PmPolicy::FigureSearch;
}

// Normalized config: unit transmit powers, noise variances set from the
// dB-domain signal-to-noise ratios. A missing feedback ratio means a clean
// feedback channel.
skmod::SystemConfig config_from_flags(double snr_db, std::optional<double> dsnr_db, int rate,
                                      int rounds, double pm) {
  skmod::SystemConfig cfg;
  double snr = skmod::from_db(snr_db);
  cfg.sigma2 = 1.0 / snr;
  cfg.sigma2_fb = dsnr_db ? 1.0 / (snr * skmod::from_db(*dsnr_db)) : 0.0;
  cfg.n_rounds = rounds;
  cfg.rate_bits_per_use = rate;
  cfg.p_m = pm;
  return cfg;
}

struct GapCurveArgs {
  int rate = 1;
  double pe = 1e-6;
  std::vector<double> dsnr_db;
  int n_max = 36;
  std::string policy = "figure";
  std::string format = "csv";
  std::string out;
};

int cmd_gap_curve(const GapCurveArgs& a) {
  ordered_json params;
  params["rate"] = a.rate;
  params["pe"] = a.pe;
  params["dsnr_db"] = a.dsnr_db;
  params["n_max"] = a.n_max;
  params["policy"] = a.policy;
  params["format"] = a.format;
  ordered_json manifest = make_manifest("gap-curve", std::move(params));

  struct CurveOut {
    double dsnr_db;
    skmod::GapCurve curve;
  };
  std::vector<CurveOut> curves;
  for (double ddb : a.dsnr_db)
    curves.push_back({ddb, skmod::gap_curve(a.rate, a.pe, skmod::from_db(ddb), a.n_max,
                                            parse_policy(a.policy))});

  if (a.format == "json") {
    ordered_json doc;
    doc["manifest"] = manifest;
    doc["curves"] = ordered_json::array();
    for (const auto& c : curves) {
      ordered_json jc;
      jc["dsnr_db"] = c.dsnr_db;
      jc["n_opt"] = c.curve.n_opt;
      jc["points"] = ordered_json::array();
      for (const auto& pt : c.curve.points) {
        ordered_json jp;
        jp["n"] = pt.n_rounds;
        if (pt.feasible) {
          jp["snr_db"] = pt.snr_db;
          jp["gap_db"] = pt.gap_db;
        } else {
          jp["snr_db"] = nullptr;
          jp["gap_db"] = nullptr;
        }
        jp["feasible"] = pt.feasible;
        jc["points"].push_back(std::move(jp));
      }
      doc["curves"].push_back(std::move(jc));
    }
    emit(a.out, doc.dump(2) + "\n");
    return 0;
  }

  std::ostringstream os;
  os << manifest_comment_block(manifest);
  os << "dsnr_db,n,snr_db,gap_db,feasible\n";
  for (const auto& c : curves) {
    for (const auto& pt : c.curve.points) {
      os << fmt_g(c.dsnr_db) << ',' << pt.n_rounds << ',';
      if (pt.feasible)
        os << fmt_g(pt.snr_db) << ',' << fmt_g(pt.gap_db) << ",true\n";
      else
        os << ",,false\n";
    }
  }
  // one summary row per curve; the marker value in the last column keeps the
  // five-column schema while separating summaries from data rows
  for (const auto& c : curves) {
    os << fmt_g(c.dsnr_db) << ',' << c.curve.n_opt << ',';
    if (c.curve.n_opt > 0) {
      const auto& pt = c.curve.points[static_cast<std::size_t>(c.curve.n_opt - 1)];
      os << fmt_g(pt.snr_db) << ',' << fmt_g(pt.gap_db) << ",summary\n";
    } else {
      os << ",,summary\n";
    }
  }
  emit(a.out, os.str());
  return 0;
}

struct TheoremArgs {
  double pe = 1e-6;
  int rounds = 1;
  double snr_db = 30.0;
  double dsnr_db = 20.0;
  std::string out;
};

int cmd_theorem(const TheoremArgs& a) {
  ordered_json params;
  params["pe"] = a.pe;
  params["rounds"] = a.rounds;
  params["snr_db"] = a.snr_db;
  params["dsnr_db"] = a.dsnr_db;
  ordered_json manifest = make_manifest("theorem", std::move(params));

  double snr = skmod::from_db(a.snr_db);
  double dsnr = skmod::from_db(a.dsnr_db);
  skmod::TheoremTerms t = skmod::theorem1_gap(a.pe, a.rounds, snr, dsnr);

  ordered_json doc;
  doc["manifest"] = manifest;
  doc["lambda"] = t.lambda;
  doc["psi1_db"] = t.psi1_db;
  doc["psi2_db"] = t.psi2_db;
  doc["psi3_db"] = t.psi3_db;
  doc["gap_db"] = t.gap_db;
  doc["approx_gap_db"] = skmod::theorem1_gap_approx(a.pe, a.rounds, dsnr);
  emit(a.out, doc.dump(2) + "\n");
  return 0;
}

struct SimulateArgs {
  std::string scheme = "proposed";
  double snr_db = 10.0;
  std::optional<double> dsnr_db;
  int rate = 1;
  int rounds = 1;
  double pm = 0.0;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  bool with_variance = false;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
  ordered_json params;
  params["scheme"] = a.scheme;
  params["snr_db"] = a.snr_db;
  if (a.dsnr_db) params["dsnr_db"] = *a.dsnr_db;
  else params["dsnr_db"] = nullptr;
  params["rate"] = a.rate;
  params["rounds"] = a.rounds;
  params["pm"] = a.pm;
  params["trials"] = a.trials;
  params["workers"] = a.workers;
  params["variance_profile"] = a.with_variance;
  ordered_json manifest = make_manifest("simulate", std::move(params), a.seed);

  skmod::SchemeId scheme;
  if (!skmod::parse_scheme(a.scheme, scheme))
    throw skmod::config_error("unknown scheme: " + a.scheme);
  skmod::SystemConfig cfg = config_from_flags(a.snr_db, a.dsnr_db, a.rate, a.rounds, a.pm);
  skmod::SimResult res = skmod::estimate(scheme, cfg, a.trials, {a.seed}, a.workers);

  ordered_json doc;
  doc["manifest"] = manifest;
  ordered_json r;
  r["scheme"] = a.scheme;
  r["trials"] = res.trials;
  r["symbol_errors"] = res.symbol_errors;
  r["bit_errors"] = res.bit_errors;
  r["ser"] = res.ser;
  r["ser_ci95"] = res.ser_ci95;
  r["ber"] = res.ber;
  r["ber_ci95"] = res.ber_ci95;
  r["aliasing_by_round"] = res.aliasing_by_round;
  ordered_json freq = ordered_json::array();
  for (auto c : res.aliasing_by_round)
    freq.push_back(static_cast<double>(c) / static_cast<double>(res.trials));
  r["aliasing_freq_by_round"] = std::move(freq);
  r["mean_power_fwd"] = res.mean_power_fwd;
  r["mean_power_fb"] = res.mean_power_fb;
  doc["result"] = std::move(r);
  if (a.with_variance) {
    skmod::VarianceProfile vp = skmod::variance_profile(scheme, cfg, a.trials, {a.seed});
    ordered_json jv;
    jv["var"] = vp.var;
    jv["se"] = vp.se;
    doc["variance_profile"] = std::move(jv);
  }
  emit(a.out, doc.dump(2) + "\n");
  return 0;
}

struct VerifyArgs {
  double snr_db = 10.0;
  double dsnr_db = 20.0;
  int rate = 1;
  int rounds = 4;
  double pm = 0.05;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_verify_coupling(const VerifyArgs& a) {
  ordered_json params;
  params["snr_db"] = a.snr_db;
  params["dsnr_db"] = a.dsnr_db;
  params["rate"] = a.rate;
  params["rounds"] = a.rounds;
  params["pm"] = a.pm;
  params["trials"] = a.trials;
  ordered_json manifest = make_manifest("verify-coupling", std::move(params), a.seed);

  skmod::SystemConfig cfg = config_from_flags(a.snr_db, a.dsnr_db, a.rate, a.rounds, a.pm);
  skmod::CouplingReport rep = skmod::verify_coupling(cfg, a.trials, {a.seed});

  ordered_json doc;
  doc["manifest"] = manifest;
  ordered_json r;
  r["trials"] = rep.trials;
  r["violations"] = rep.violations;
  r["passed"] = rep.violations == 0;
  r["no_alias_trials"] = rep.no_alias_trials;
  r["first_alias_round"] = rep.first_alias_round;
  r["coupled_alias_by_round"] = rep.coupled_alias_by_round;
  ordered_json freq = ordered_json::array();
  for (auto c : rep.coupled_alias_by_round)
    freq.push_back(static_cast<double>(c) / static_cast<double>(rep.trials));
  r["coupled_alias_freq"] = std::move(freq);
  r["coupled_decode_errors"] = rep.coupled_decode_errors;
  r["coupled_any_event"] = rep.coupled_any_event;
  r["proposed_decode_errors"] = rep.proposed_decode_errors;
  if (rep.has_violation) r["first_violation_trial"] = rep.first_violation_trial;
  doc["report"] = std::move(r);
  emit(a.out, doc.dump(2) + "\n");
  return rep.violations == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modulo-arithmetic interactive coding over AWGN with noisy feedback"};
  app.require_subcommand(1);

  GapCurveArgs gc;
  CLI::App* gap = app.add_subcommand("gap-curve", "Capacity-gap vs round-count table");
  gap->add_option("--rate", gc.rate, "Bits per channel use")->default_val(1);
  gap->add_option("--pe", gc.pe, "Target symbol error probability")->default_val(1e-6);
  gap->add_option("--dsnr-db", gc.dsnr_db,
                  "Feedback-to-forward SNR ratio in dB (repeat for multiple curves)")
      ->required();
  gap->add_option("--n-max", gc.n_max, "Largest round count")->default_val(36);
  gap->add_option("--policy", gc.policy, "Error-budget split")
      ->check(CLI::IsMember({"figure", "theorem"}))
      ->default_val("figure");
  gap->add_option("--format", gc.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_val("csv");
  gap->add_option("--out", gc.out, "Output file (default stdout)");

  TheoremArgs th;
  CLI::App* thm = app.add_subcommand("theorem", "Achievability-bound terms at one operating point");
  thm->add_option("--pe", th.pe, "Target symbol error probability")->default_val(1e-6);
  thm->add_option("--rounds", th.rounds, "Interaction rounds")->required();
  thm->add_option("--snr-db", th.snr_db, "Forward SNR in dB")->required();
  thm->add_option("--dsnr-db", th.dsnr_db, "Feedback-to-forward SNR ratio in dB")->required();
  thm->add_option("--out", th.out, "Output file (default stdout)");

  SimulateArgs sim;
  CLI::App* sc = app.add_subcommand("simulate", "Seeded Monte Carlo error-rate estimate");
  sc->add_option("--scheme", sim.scheme, "Transmission scheme")
      ->check(CLI::IsMember({"uncoded", "sk", "proposed", "coupled"}))
      ->required();
  sc->add_option("--snr-db", sim.snr_db, "Forward SNR in dB")->required();
  sc->add_option("--dsnr-db", sim.dsnr_db,
                 "Feedback-to-forward SNR ratio in dB (omit for a clean feedback channel)");
  sc->add_option("--rate", sim.rate, "Bits per channel use")->default_val(1);
  sc->add_option("--rounds", sim.rounds, "Interaction rounds")->default_val(1);
  sc->add_option("--pm", sim.pm, "Per-round aliasing budget (0: derived from the 1e-3 default)")
      ->default_val(0.0);
  sc->add_option("--trials", sim.trials, "Trial count")
      ->check(CLI::PositiveNumber)
      ->default_val(10000);
  sc->add_option("--seed", sim.seed, "Master seed")->default_val(1);
  sc->add_option("--workers", sim.workers, "Worker threads (0: hardware)")->default_val(0);
  sc->add_flag("--variance-profile", sim.with_variance,
               "Also emit the per-round estimation-error variance table");
  sc->add_option("--out", sim.out, "Output file (default stdout)");

  VerifyArgs vc;
  CLI::App* ver = app.add_subcommand("verify-coupling", "Exact sample-path coupling check");
  ver->add_option("--snr-db", vc.snr_db, "Forward SNR in dB")->default_val(10.0);
  ver->add_option("--dsnr-db", vc.dsnr_db, "Feedback-to-forward SNR ratio in dB")
      ->default_val(20.0);
  ver->add_option("--rate", vc.rate, "Bits per channel use")->default_val(1);
  ver->add_option("--rounds", vc.rounds, "Interaction rounds")->default_val(4);
  ver->add_option("--pm", vc.pm, "Per-round aliasing budget")->default_val(0.05);
  ver->add_option("--trials", vc.trials, "Trial count")
      ->check(CLI::PositiveNumber)
      ->default_val(10000);
  ver->add_option("--seed", vc.seed, "Master seed")->default_val(1);
  ver->add_option("--out", vc.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(gap)) return cmd_gap_curve(gc);
    if (app.got_subcommand(thm)) return cmd_theorem(th);
    if (app.got_subcommand(sc)) return cmd_simulate(sim);
    if (app.got_subcommand(ver)) return cmd_verify_coupling(vc);
  } catch (const skmod::feasibility_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {  // config errors included
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
