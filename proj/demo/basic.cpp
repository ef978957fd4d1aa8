// Build the default network, generate one interval, match, and assign.

#include <iostream>

#include "mtr/mtr.hpp"

int main() {
  auto net = mtr::build_network(1, mtr::default_network_spec());
  auto profile = mtr::default_generation_profile();
  profile.count_curve.assign(static_cast<std::size_t>(profile.intervals_per_day), 120.0);

  auto batch = mtr::generate_interval(profile, net, 8, 42);
  mtr::MatchContext ctx(net, batch.drivers, batch.riders);
  auto built = mtr::build_matches(ctx, mtr::reduction_preset("Medium4"));
  auto sol = mtr::imp_greedy(built.final_graph);

  std::vector<mtr::Trip> all(batch.riders);
  all.insert(all.end(), batch.drivers.begin(), batch.drivers.end());
  auto check = mtr::verify_solution(built.final_graph, sol, &net, all);

  std::cout << batch.drivers.size() << " drivers, " << batch.riders.size() << " riders, "
            << built.final_graph.size() << " feasible matches\n"
            << sol.value << " riders served by " << sol.matches.size() << " drivers"
            << (check ? "" : " (verification failed: " + check.diagnostic + ")") << "\n";
  return check ? 0 : 1;
}
