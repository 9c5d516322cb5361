#include <cmath>
#include <random>

#include "doctest.h"
#include "qbackbone/errors.hpp"
#include "qbackbone/interface.hpp"
#include "qbackbone/linkbudget.hpp"

using namespace qbackbone;

namespace {

HybridFrame make_frame(std::uint64_t id = 0, std::uint64_t payload = 100000) {
  return HybridFrame{id, 0.0, payload, FrameHeader{"Munich", "Nuremberg", payload}};
}

double mean_of(int n, const auto& draw) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(draw());
  return sum / n;
}

}  // namespace

TEST_CASE("classical latency") {
  CHECK(classical_latency_s(0.0) == 0.0);
  CHECK(classical_latency_s(150.0) == doctest::Approx(7.343e-4).epsilon(1e-6 / 7.343e-4));
  CHECK(classical_latency_s(5.0) == doctest::Approx(2.448e-5).epsilon(1e-7 / 2.448e-5));
  CHECK_THROWS_AS(classical_latency_s(-1.0), std::domain_error);
}

TEST_CASE("access link survivors") {
  Rng rng(3);
  CHECK(access_link_survivors(12345, 1.0, rng) == 12345);
  CHECK(access_link_survivors(0, 0.4, rng) == 0);
  CHECK(access_link_survivors(500, 0.0, rng) == 0);

  const double eta = fiber_transmittance({5.0, 0.2});
  const double sigma = std::sqrt(1e5 * eta * (1.0 - eta));
  CHECK(sigma == doctest::Approx(127.8).epsilon(0.1 / 127.8));
  const double m = mean_of(100, [&] { return access_link_survivors(100000, eta, rng); });
  CHECK(std::abs(m - 1e5 * eta) <= 3.0 * sigma / 10.0);
}

TEST_CASE("egress with an empty memory drops every survivor") {
  Rng rng(1);
  QuantumMemoryPair mem(MemoryCapacity::unlimited());
  auto [out, msg] = egress_process(make_frame(), 100, mem, 0.5, 1.0, 0.01, rng);
  CHECK(out.attempts == 0);
  CHECK(out.successes == 0);
  CHECK(out.pairs_consumed == 0);
  CHECK(out.dropped_for_no_pair == 100);
  CHECK(msg.consumed.empty());
  CHECK(msg.arrival_time_s == doctest::Approx(1.01));
}

TEST_CASE("egress with surplus pairs and certain success") {
  Rng rng(1);
  QuantumMemoryPair mem(MemoryCapacity::unlimited());
  mem.store_pairs(1000);
  auto [out, msg] = egress_process(make_frame(), 100, mem, 1.0, 0.0, 0.0, rng);
  CHECK(out.occupancy_at_arrival == 1000);
  CHECK(out.attempts == 100);
  CHECK(out.successes == 100);
  CHECK(out.pairs_consumed == 100);
  CHECK(out.dropped_for_no_pair == 0);
  CHECK(msg.consumed == PairIndexRange{0, 100});
  CHECK(mem.occupancy() == 900);
  CHECK(mem.mirrored());
}

TEST_CASE("egress consumes pairs on failed attempts too") {
  Rng rng(5);
  QuantumMemoryPair mem(MemoryCapacity::unlimited());
  mem.store_pairs(40);
  auto [out, msg] = egress_process(make_frame(), 100, mem, 0.0, 0.0, 0.0, rng);
  CHECK(out.attempts == 40);
  CHECK(out.successes == 0);
  CHECK(out.teleport_failures() == 40);
  CHECK(out.dropped_for_no_pair == 60);
  CHECK(mem.occupancy() == 0);
}

TEST_CASE("teleport success is binomial with p = 0.5") {
  Rng rng(77);
  const std::uint64_t survivors = 79433;
  const double m = mean_of(100, [&] {
    QuantumMemoryPair mem(MemoryCapacity::unlimited());
    mem.store_pairs(200000);
    return egress_process(make_frame(), survivors, mem, 0.5, 0.0, 0.0, rng).first.successes;
  });
  const double sigma = std::sqrt(survivors * 0.25);
  CHECK(std::abs(m - 39716.5) <= 3.0 * sigma / 10.0);
}

TEST_CASE("ingress reconstruction") {
  Rng rng(9);
  const double eta = fiber_transmittance({5.0, 0.2});

  SUBCASE("no successes delivers nothing") {
    QuantumMemoryPair mem(MemoryCapacity::unlimited());
    auto [out, msg] = egress_process(make_frame(), 50, mem, 0.5, 0.0, 0.0, rng);
    CHECK(ingress_reconstruct(msg, out, eta, mem, rng) == 0);
  }
  SUBCASE("lossless outgoing link delivers every success") {
    QuantumMemoryPair mem(MemoryCapacity::unlimited());
    mem.store_pairs(5000);
    auto [out, msg] = egress_process(make_frame(), 5000, mem, 0.5, 0.0, 0.0, rng);
    CHECK(ingress_reconstruct(msg, out, 1.0, mem, rng) == out.successes);
    CHECK(mem.awaiting_corrections() == 0);
  }
  SUBCASE("end-to-end expectation with a pair surplus") {
    // Composition of Binomial thinnings: 1e5 * eta^2 * 0.5.
    const double p = eta * eta * 0.5;
    CHECK(1e5 * p == doctest::Approx(31548).epsilon(1.0 / 31548));
    const double m = mean_of(100, [&] {
      QuantumMemoryPair mem(MemoryCapacity::unlimited());
      mem.store_pairs(200000);
      const auto survivors = access_link_survivors(100000, eta, rng);
      auto [out, msg] = egress_process(make_frame(), survivors, mem, 0.5, 0.0, 0.0, rng);
      return ingress_reconstruct(msg, out, eta, mem, rng);
    });
    CHECK(std::abs(m - 1e5 * p) <= 3.0 * std::sqrt(1e5 * p * (1 - p)) / 10.0);
  }
  SUBCASE("delivered is binomial in successes") {
    const double m = mean_of(100, [&] {
      QuantumMemoryPair mem(MemoryCapacity::unlimited());
      mem.store_pairs(39717);
      auto [out, msg] = egress_process(make_frame(), 39717, mem, 1.0, 0.0, 0.0, rng);
      return ingress_reconstruct(msg, out, eta, mem, rng);
    });
    CHECK(std::abs(m - 39717 * eta) <= 3.0 * std::sqrt(39717 * eta * (1 - eta)) / 10.0);
  }
}

TEST_CASE("ingress rejects messages that disagree with the slots it holds") {
  Rng rng(2);
  QuantumMemoryPair mem(MemoryCapacity::unlimited());
  mem.store_pairs(100);
  auto [out1, msg1] = egress_process(make_frame(0), 10, mem, 0.5, 0.0, 0.0, rng);
  auto [out2, msg2] = egress_process(make_frame(1), 10, mem, 0.5, 0.0, 0.0, rng);

  SUBCASE("out of order") {
    CHECK_THROWS_AS(ingress_reconstruct(msg2, out2, 1.0, mem, rng), ProtocolViolation);
  }
  SUBCASE("tampered range") {
    ClassicalMessage bad = msg1;
    bad.consumed.end += 1;
    TeleportOutcome bad_out = out1;
    bad_out.consumed = bad.consumed;
    CHECK_THROWS_AS(ingress_reconstruct(bad, bad_out, 1.0, mem, rng), ProtocolViolation);
  }
  SUBCASE("message and outcome disagree") {
    ClassicalMessage bad = msg1;
    bad.success_count += 1;
    CHECK_THROWS_AS(ingress_reconstruct(bad, out1, 1.0, mem, rng), ProtocolViolation);
  }
  SUBCASE("in order") {
    CHECK_NOTHROW(ingress_reconstruct(msg1, out1, 1.0, mem, rng));
    CHECK_NOTHROW(ingress_reconstruct(msg2, out2, 1.0, mem, rng));
  }
}

TEST_CASE("per-frame accounting identity over random inputs") {
  std::mt19937_64 gen(31);
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    QuantumMemoryPair mem(gen() % 3 ? MemoryCapacity::slots(1 + gen() % 5000) : MemoryCapacity::unlimited());
    mem.store_pairs(gen() % 8000);
    const std::uint64_t payload = 1 + gen() % 20000;
    const double eta_in = (gen() % 1000) / 1000.0, eta_out = (gen() % 1000) / 1000.0;
    const double p = (gen() % 1001) / 1000.0;
    const std::uint64_t pre = mem.occupancy();
    const auto survivors = access_link_survivors(payload, eta_in, rng);
    auto [out, msg] = egress_process(make_frame(i, payload), survivors, mem, p, 0.0, 0.0, rng);
    const auto delivered = ingress_reconstruct(msg, out, eta_out, mem, rng);
    CHECK(out.attempts == std::min(survivors, pre));
    CHECK(out.pairs_consumed == out.attempts);
    CHECK(out.successes <= out.attempts);
    CHECK(payload == (payload - survivors) + out.dropped_for_no_pair + out.teleport_failures() +
                         (out.successes - delivered) + delivered);
  }
}
