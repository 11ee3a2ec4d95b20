// Compares the three reference topologies (random, gamma = 3, gamma = 2) on
// structure, load spread and simulated throughput at a single traffic level.

#include <iostream>

#include "lrdnet/lrdnet.hpp"

int main() {
  using namespace lrdnet;
  const double lambda = 0.05;
  ExperimentPlan plan;
  const double d = calibrate_d(plan.m1, plan.m2, lambda, 1, plan_calibration(plan, lambda));
  std::cout << "lambda=" << lambda << " calibrated d=" << d << "\n\n";

  for (double alpha : {0.0, 0.5, 1.0}) {
    const Graph giant = plan_giant(plan, alpha, 1);
    const auto topo = describe_topology(giant, alpha, 1);

    SimConfig cfg;
    cfg.graph = giant;
    cfg.traffic = {plan.m1, plan.m2, d};
    const auto m = run(cfg);

    std::cout << "alpha=" << alpha << " gamma=" << gamma_label(alpha) << '\n'
              << "  giant component " << topo.n_giant << " vertices, path length " << topo.cpl << '\n'
              << "  load mean " << topo.load.mean << ", normalized std " << topo.load.normalized_std << '\n'
              << "  generated " << m.generated << ", delivered " << m.delivered << ", mean delivery time "
              << m.mean_delivery_time << ", still queued " << m.in_flight_at_end << "\n";
  }
}
