#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace spike_regions;
using testing_util::bits;
using testing_util::Q;

namespace {

Network<Rational> single_neuron(Rational beta, Rational theta, Rational u0, Rational w, Rational b, int T) {
  Network<Rational> net;
  net.T = T;
  net.layers.push_back({Matrix<Rational>(1, 1, w), {b}, {u0}, beta, theta});
  net.decoder = RateDecoder{};
  return net;
}

SpikeTrain train(const std::string& s) {
  std::vector<std::uint8_t> v = bits(s);
  return SpikeTrain(1, v.size(), v);
}

// Independent per-neuron iteration of the LIF recurrence.
std::vector<SpikeTrain> reference_trains(const Network<Rational>& net, const std::vector<Rational>& x) {
  std::vector<std::vector<Rational>> in(static_cast<std::size_t>(net.T), x);
  std::vector<SpikeTrain> out;
  for (const auto& l : net.layers) {
    SpikeTrain s(l.width(), static_cast<std::size_t>(net.T));
    std::vector<std::vector<Rational>> next(static_cast<std::size_t>(net.T), std::vector<Rational>(l.width()));
    for (std::size_t i = 0; i < l.width(); ++i) {
      Rational u = l.u0[i];
      for (int t = 0; t < net.T; ++t) {
        Rational arg = l.beta * u + l.b[i] - l.theta;
        for (std::size_t j = 0; j < l.input_width(); ++j) arg += l.W(i, j) * in[t][j];
        const bool fire = arg >= 0;
        u = fire ? arg : Rational(arg + l.theta);
        s.set(i, t, fire);
        next[t][i] = fire ? 1 : 0;
      }
    }
    out.push_back(s);
    in = next;
  }
  return out;
}

}  // namespace

TEST(EncodeDirect, RepeatsInputAcrossTime) {
  const std::vector<Rational> x{Q(7, 10)};
  const auto e = encode_direct(std::span<const Rational>(x), 3);
  EXPECT_EQ(e, (Matrix<Rational>{{Q(7, 10), Q(7, 10), Q(7, 10)}}));
  const std::vector<Rational> z{Q(0), Q(0)};
  EXPECT_EQ(encode_direct(std::span<const Rational>(z), 1), (Matrix<Rational>{{Q(0)}, {Q(0)}}));
  const std::vector<Rational> y{Q(1), Q(-2)};
  EXPECT_EQ(encode_direct(std::span<const Rational>(y), 2), (Matrix<Rational>{{Q(1), Q(1)}, {Q(-2), Q(-2)}}));
  EXPECT_THROW(encode_direct(std::span<const Rational>(y), 0), ValidationError);
}

TEST(Simulate, SingleNeuronAccumulates) {
  const auto net = single_neuron(Q(1), Q(1), Q(0), Q(1), Q(0), 5);
  const auto tr = simulate(net, std::vector<Rational>{Q(7, 10)});
  EXPECT_EQ(tr.output_spikes().to_string(), "01101");
  EXPECT_EQ(tr.layers[0].potential(0, 0), Q(0));
  EXPECT_EQ(tr.layers[0].potential(0, 2), Q(4, 10));
}

TEST(Simulate, MemorylessNeuronFiresAtThreshold) {
  for (const auto& u0 : {Q(0), Q(5), Q(-3)}) {
    const auto net = single_neuron(Q(0), Q(1), u0, Q(1), Q(0), 3);
    EXPECT_EQ(simulate(net, std::vector<Rational>{Q(1)}).output_spikes().to_string(), "111");
  }
}

TEST(Simulate, HeavisideFiresAtZero) {
  EXPECT_TRUE(heaviside(Q(0)));
  EXPECT_FALSE(heaviside(Q(-1, 1000000)));
  EXPECT_TRUE(heaviside(0.0));
}

TEST(Simulate, DimensionMismatchThrows) {
  const auto net = single_neuron(Q(1), Q(1), Q(0), Q(1), Q(0), 2);
  EXPECT_THROW(simulate(net, std::vector<Rational>{Q(1), Q(2)}), DimensionError);
}

TEST(Simulate, MatchesIndependentRecurrenceAndReplays) {
  Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n_in = uniform_int(rng, 1, 3);
    std::vector<std::size_t> widths;
    for (long l = uniform_int(rng, 1, 3); l > 0; --l) widths.push_back(uniform_int(rng, 1, 4));
    const auto net = random_network<Rational>(rng, n_in, widths, static_cast<int>(uniform_int(rng, 1, 6)));
    std::vector<Rational> x;
    for (std::size_t j = 0; j < n_in; ++j) x.push_back(testing_util::random_rational(rng, -2, 2, 64));
    const auto tr = simulate(net, x);
    const auto ref = reference_trains(net, x);
    for (std::size_t l = 0; l < net.depth(); ++l) EXPECT_EQ(tr.layers[l].spikes, ref[l]);
    EXPECT_TRUE(replay_matches(net, std::span<const Rational>(x), tr));
    auto tampered = tr;
    tampered.layers[0].potential(0, 1) += Q(1, 1000);
    EXPECT_FALSE(replay_matches(net, std::span<const Rational>(x), tampered));
  }
}

TEST(Simulate, ScalingOneLayerKeepsSpikes) {
  Rng rng(5);
  for (int k = 0; k < 30; ++k) {
    const auto net = random_network<Rational>(rng, 2, {3, 2}, 4);
    auto scaled = net;
    const Rational c = Q(uniform_int(rng, 1, 50), 7);
    auto& l = scaled.layers[uniform_int(rng, 0, 1)];
    for (std::size_t i = 0; i < l.W.rows(); ++i)
      for (std::size_t j = 0; j < l.W.cols(); ++j) l.W(i, j) *= c;
    for (auto& v : l.b) v *= c;
    for (auto& v : l.u0) v *= c;
    l.theta *= c;
    const std::vector<Rational> x{testing_util::random_rational(rng, -2, 2, 64),
                                  testing_util::random_rational(rng, -2, 2, 64)};
    const auto a = simulate(net, x), b = simulate(scaled, x);
    for (std::size_t d = 0; d < 2; ++d) EXPECT_EQ(a.layers[d].spikes, b.layers[d].spikes);
  }
}

TEST(Decode, RateCountAndMembrane) {
  EXPECT_EQ(decode<Rational>(RateDecoder{}, train("1010")), std::vector<Rational>{Q(1, 2)});
  EXPECT_EQ(decode<Rational>(CountDecoder{}, train("110")), std::vector<Rational>{Q(2)});
  const MembranePotentialDecoder<Rational> m{{Q(1), Q(1)}, Matrix<Rational>(1, 1, Q(0)), {Q(3)}};
  for (const char* s : {"00", "01", "10", "11"})
    EXPECT_EQ(decode<Rational>(m, train(s)), std::vector<Rational>{Q(6)});
}

TEST(Decode, FirstSpikeTime) {
  FirstSpikeTimeDecoder<Rational> d;
  EXPECT_EQ(decode<Rational>(d, train("0010")), std::vector<Rational>{Q(1, 3)});
  EXPECT_EQ(decode<Rational>(d, train("0000")), std::vector<Rational>{Q(1, 5)});  // 1/(T+1)
  d.transform = SpikeTimeTransform::Identity;
  d.f0 = Q(9);
  EXPECT_EQ(decode<Rational>(d, train("0000")), std::vector<Rational>{Q(9)});
  EXPECT_EQ(decode<Rational>(d, train("1000")), std::vector<Rational>{Q(1)});
}

TEST(Decode, MembraneReadoutIsAffineInSpikes) {
  Rng rng(3);
  const std::size_t n = 3, T = 4;
  MembranePotentialDecoder<Rational> m{{}, Matrix<Rational>(2, n), {Q(1, 3), Q(-2)}};
  for (std::size_t t = 0; t < T; ++t) m.a.push_back(testing_util::random_rational(rng, -2, 2, 16));
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < n; ++c) m.V(r, c) = testing_util::random_rational(rng, -2, 2, 16);
  for (int k = 0; k < 20; ++k) {
    SpikeTrain s(n, T);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t t = 0; t < T; ++t) s.set(i, t, uniform_int(rng, 0, 1));
    const auto base = decode<Rational>(m, s);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t t = 0; t < T; ++t) {
        auto flipped = s;
        flipped.set(i, t, !s(i, t));
        const auto out = decode<Rational>(m, flipped);
        const Rational sign = s(i, t) ? Q(-1) : Q(1);
        for (std::size_t r = 0; r < 2; ++r) EXPECT_EQ(out[r] - base[r], sign * m.a[t] * m.V(r, i));
      }
  }
}

TEST(Realize, ZeroReadoutGivesZero) {
  auto net = single_neuron(Q(1), Q(1), Q(0), Q(1), Q(0), 3);
  net.decoder = membrane_decoder<Rational>(3, Matrix<Rational>(1, 1, Q(0)), {Q(0)});
  for (const auto& x : {Q(-5), Q(0), Q(7, 10), Q(100)})
    EXPECT_EQ(realize(net, std::vector<Rational>{x}), std::vector<Rational>{Q(0)});
}

TEST(Validate, RejectsBrokenInvariants) {
  auto net = single_neuron(Q(3, 2), Q(1), Q(0), Q(1), Q(0), 1);
  EXPECT_THROW(validate(net), ValidationError);
  net = single_neuron(Q(1), Q(0), Q(0), Q(1), Q(0), 1);
  EXPECT_THROW(validate(net), ValidationError);
  net = single_neuron(Q(1), Q(1), Q(0), Q(1), Q(0), 0);
  EXPECT_THROW(validate(net), ValidationError);
  net = single_neuron(Q(1), Q(1), Q(0), Q(1), Q(0), 1);
  net.layers.push_back({Matrix<Rational>(1, 2, Q(1)), {Q(0)}, {Q(0)}, Q(1), Q(1)});
  EXPECT_THROW(validate(net), DimensionError);
}
