// Prints the capacity-gap landscape: how far from the Shannon limit the
// interactive scheme operates as the round count and feedback quality vary.

#include <cstdio>

#include <skmod/skmod.hpp>

int main() {
  using namespace skmod;
  const double pe = 1e-6;

  std::printf("capacity gap in dB at pe = %.0e (uncoded PAM gap: %.2f dB)\n\n", pe,
              gamma0_db(pe));
  for (int rate : {1, 4}) {
    std::printf("rate %d bit/use\n", rate);
    std::printf("  %-14s", "rounds:");
    for (int n : {1, 2, 5, 10, 15, 20, 25, 30}) std::printf("%8d", n);
    std::printf("\n");
    for (double dsnr_db : {6.0, 10.0, 20.0, 30.0}) {
      std::printf("  dsnr %4.0f dB  ", dsnr_db);
      for (int n : {1, 2, 5, 10, 15, 20, 25, 30}) {
        double gap = capacity_gap_db(required_snr(rate, pe, n, from_db(dsnr_db)), rate);
        std::printf("%8.3f", gap);
      }
      auto curve = gap_curve(rate, pe, from_db(dsnr_db), 36);
      std::printf("   best n: %d\n", curve.n_opt);
    }
    std::printf("  noiseless     ");
    for (int n : {1, 2, 5, 10, 15, 20, 25, 30}) {
      double gap = capacity_gap_db(required_snr(rate, pe, n, 1e100), rate);
      std::printf("%8.3f", gap);
    }
    std::printf("\n\n");
  }

  std::printf("achievability bound at snr = 60 dB, dsnr = 20 dB, 19 rounds:\n");
  auto t = theorem1_gap(pe, 19, from_db(60.0), from_db(20.0));
  std::printf("  lambda = %.6f  psi1 = %.4f dB  psi2 = %.2e dB  psi3 = %.2e dB\n",
              t.lambda, t.psi1_db, t.psi2_db, t.psi3_db);
  std::printf("  gap = %.4f dB  (high-snr approximation: %.4f dB)\n", t.gap_db,
              theorem1_gap_approx(pe, 19, from_db(20.0)));

  std::printf("\nhalf-bandwidth feedback vs full-bandwidth forward coding:\n");
  for (double snr_db : {15.0, 20.0, 23.0, 26.0}) {
    auto b = bandwidth_tradeoff(snr_db, 0.41, gamma0_db(pe));
    std::printf("  snr %4.1f dB: feedback %.3f bit/use vs forward-only %.3f bit/use -> %s\n",
                snr_db, b.rate_feedback, b.rate_fec,
                b.feedback_wins ? "feedback wins" : "coding wins");
  }
  return 0;
}
