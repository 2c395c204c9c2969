// Exact approximation errors of the two-layer step-function construction:
// sup error of a ramp against first-layer width, and the L2 error of the
// staircase network. Writes CSV to stdout.
//
//   demo_approximation_error > errors.csv

#include <iostream>

#include "spike_regions/spike_regions.hpp"

using namespace spike_regions;

int main() {
  const Rational gamma(3);
  auto ramp = [gamma](std::span<const Rational> x) { return Rational(gamma * x[0]); };
  const auto target = ramp_target(gamma, Rational(0), Rational(1));
  const Domain1D<Rational> dom{Rational(0), Rational(1)};

  std::cout << "# ramp 3x on [0,1): exact errors of the N-cell step network\n";
  std::cout << "n1,n2,sup_error,l2_error_sq,predicted_sup\n";
  for (std::size_t N = 1; N <= 32; N *= 2) {
    const auto spec = grid_approximant<Rational>(ramp, {{Rational(0), Rational(1)}}, N);
    const auto net = step_network(spec);
    std::cout << net.widths()[0] << ',' << net.widths()[1] << ',' << sup_error_exact(net, target, dom) << ','
              << l2_error_exact(net, target, dom) << ',' << gamma / Rational(static_cast<long>(2 * N)) << '\n';
  }

  std::cout << "# staircase: l2 error of the step network on [0,K]\n";
  std::cout << "K,eps,l2_error_sq,l2_over_K_eps3\n";
  for (long K : {1L, 2L, 4L, 8L})
    for (const Rational& eps : {Rational(1) / 10, Rational(1) / 5}) {
      const Rational l2 = l2_error_staircase(staircase_net(K, eps), K, eps);
      std::cout << K << ',' << eps << ',' << l2 << ',' << Rational(l2 / (Rational(K) * eps * eps * eps)) << '\n';
    }
}
