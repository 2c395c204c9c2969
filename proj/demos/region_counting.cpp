// Region counts of single-layer LIF networks on the plane: the bound, a
// construction that attains it, and what random initialisations reach.
//
//   demo_region_counting [seed]

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "spike_regions/spike_regions.hpp"

using namespace spike_regions;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
  Rng rng(seed);

  std::cout << "first-layer regions on R^2 (random: 20 nets, seed " << seed << ")\n";
  std::cout << std::setw(3) << "T" << std::setw(4) << "n1" << std::setw(10) << "bound" << std::setw(10) << "attained"
            << std::setw(12) << "random max" << std::setw(12) << "random avg" << "\n";
  for (int T = 1; T <= 4; ++T)
    for (std::size_t n1 = 2; n1 <= 4; ++n1) {
      const BigInt bound = count_bound(static_cast<long>(n1), 2, T);
      const auto gp = count_exact_2d(first_layer_families(general_position_layer(n1, T))).regions;
      std::uint64_t best = 0, sum = 0;
      for (int k = 0; k < 20; ++k) {
        const auto r = count_exact_2d(first_layer_families(random_network<Rational>(rng, 2, {n1}, T))).regions;
        best = std::max(best, r);
        sum += r;
      }
      std::cout << std::setw(3) << T << std::setw(4) << n1 << std::setw(10) << bound << std::setw(10) << gp
                << std::setw(12) << best << std::setw(12) << std::fixed << std::setprecision(1) << sum / 20.0 << "\n";
    }

  // A deeper network: the first layer fixes the partition, later layers
  // can only merge its pieces.
  const auto deep = random_network<Rational>(rng, 2, {4, 3}, 3, RandomNetOptions{64, 8, false});
  const auto exact = constant_regions_2d(deep);
  std::cout << "\n2-layer net (widths 4,3, T=3, beta = theta = 1), exact on its enclosing box:\n  spike-train patterns per layer:";
  for (auto c : exact.report.layer_counts) std::cout << ' ' << c;
  std::cout << "\n  distinct outputs: " << exact.report.distinct_outputs
            << "\n  connected constant regions: " << *exact.report.connected_constant_regions
            << "\n  cells: " << *exact.report.cells << "\n";

  const auto& b = exact.complex.box;
  const Box<double> box{{b.xlo.convert_to<double>(), b.xhi.convert_to<double>()},
                        {b.ylo.convert_to<double>(), b.yhi.convert_to<double>()}};
  for (std::size_t N : {100u, 1000u, 10000u, 100000u}) {
    const auto s = sample_patterns(network_cast<double>(deep), box, N, seed);
    std::cout << "  sampled N=" << std::setw(6) << N << ": layer-1 patterns " << s.layer_counts[0] << ", outputs "
              << s.distinct_outputs << "\n";
  }
}
