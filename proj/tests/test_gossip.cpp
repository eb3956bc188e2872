#include <catch_amalgamated.hpp>

#include <cbt/analytic.hpp>
#include <cbt/gossip.hpp>

#include <set>

using namespace cbt;
using namespace cbt::gossip;

namespace {

GossipConfig sync_config(std::int64_t n, std::int64_t phi = 1) {
  GossipConfig cfg;
  cfg.n = n;
  cfg.phi = phi;
  cfg.activation = Activation::Synchronous;
  return cfg;
}

}  // namespace

TEST_CASE("two users: one slot to complete", "[gossip]") {
  const KeyedHashScheme scheme(1);
  GossipEngine engine(sync_config(2), scheme);
  Rng rng(1);
  const auto idx = engine.inject(generate_sat(UserId{0}, 0, 0, scheme));
  engine.step(rng);
  const auto& d = engine.flight(idx);
  CHECK(d.holder_count() == 2);
  CHECK(*d.delay_to(2) == 1);
  CHECK(d.sat.verifications == std::map<UserId, SlotTime>{{UserId{1}, 1}});
  CHECK(engine.clock() == 1);
}

TEST_CASE("asynchronous receipts stay inside the slot", "[gossip]") {
  const KeyedHashScheme scheme(1);
  GossipConfig cfg;
  cfg.n = 2;
  GossipEngine engine(cfg, scheme, 5);
  Rng rng(3);
  const auto idx = engine.inject(generate_sat(UserId{1}, 5, 0, scheme), 0.25);
  const double done = engine.run_until(idx, 2, rng);
  const auto& d = engine.flight(idx);
  CHECK(done >= 5.25);
  CHECK(done < static_cast<double>(engine.clock()));
  CHECK(d.sat.verifications.at(UserId{0}) == static_cast<SlotTime>(std::floor(done)));
}

TEST_CASE("level of a single holder has zero delay", "[gossip]") {
  const auto summary = run_dissemination({}, {1.0 / 1000, 0.5}, 20, 4);
  CHECK(summary.levels[0].holders == 1);
  CHECK(summary.levels[0].mean == 0.0);
  CHECK(summary.levels[0].max == 0);
  CHECK(summary.levels[1].mean > 0.0);
}

TEST_CASE("spread is monotone and records verifications", "[gossip][property]") {
  const KeyedHashScheme scheme(9);
  for (auto activation : {Activation::Asynchronous, Activation::Synchronous}) {
    for (auto mode : {Mode::Push, Mode::Pull, Mode::Hybrid}) {
      GossipConfig cfg;
      cfg.n = 300;
      cfg.mode = mode;
      cfg.activation = activation;
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        GossipEngine engine(cfg, scheme);
        const auto idx = engine.inject(generate_sat(UserId{7}, 0, 0, scheme));
        engine.run_until(idx, cfg.n, rng);
        const auto& d = engine.flight(idx);
        REQUIRE(d.holder_counts.front() == 1);
        for (std::size_t i = 1; i < d.holder_counts.size(); ++i) {
          REQUIRE(d.holder_counts[i] >= d.holder_counts[i - 1]);
          REQUIRE(d.holder_counts[i] <= cfg.n);
        }
        REQUIRE(d.holders.front() == 7);
        REQUIRE(std::set<std::uint32_t>(d.holders.begin(), d.holders.end()).size() == d.holders.size());
        REQUIRE(static_cast<std::int64_t>(d.sat.verifications.size()) == cfg.n - 1);
        for (std::size_t i = 1; i < d.receipt_times.size(); ++i) REQUIRE(d.receipt_times[i] >= d.receipt_times[i - 1]);
        // Once complete, further slots change nothing.
        engine.step(rng);
        REQUIRE(d.holder_count() == cfg.n);
      }
    }
  }
}

TEST_CASE("verifications cover the reached level", "[gossip]") {
  const KeyedHashScheme scheme(2);
  GossipConfig cfg;
  cfg.n = 1000;
  Rng rng(11);
  GossipEngine engine(cfg, scheme);
  const auto idx = engine.inject(generate_sat(UserId{0}, 0, 0, scheme));
  const std::int64_t target = holders_for_level(0.9, cfg.n);
  engine.run_until(idx, target, rng);
  CHECK(static_cast<std::int64_t>(engine.flight(idx).sat.verifications.size()) >= target - 1);
}

TEST_CASE("phi targets are distinct and never the sender", "[gossip]") {
  const KeyedHashScheme scheme(2);
  GossipEngine engine(sync_config(4, 3), scheme);
  Rng rng(5);
  const auto idx = engine.inject(generate_sat(UserId{2}, 0, 0, scheme));
  engine.step(rng);
  CHECK(engine.flight(idx).holder_count() == 4);
}

TEST_CASE("pull step needs a holder to ask", "[gossip]") {
  const KeyedHashScheme scheme(2);
  GossipEngine engine(sync_config(2), scheme);
  Rng rng(5);
  const auto idx = engine.inject(generate_sat(UserId{0}, 0, 0, scheme));
  engine.pull_step(rng);
  CHECK(engine.flight(idx).holder_count() == 2);

  GossipEngine empty(sync_config(10), scheme);
  CHECK_THROWS_AS(empty.step(rng), ParameterError);
}

TEST_CASE("an unverifiable transaction never spreads and hits the slot cap", "[gossip]") {
  const KeyedHashScheme scheme(2);
  auto sat = generate_sat(UserId{0}, 0, 0, scheme);
  sat.signature.front() ^= std::byte{1};
  GossipEngine engine(sync_config(10), scheme);
  Rng rng(5);
  const auto idx = engine.inject(sat);
  CHECK_THROWS_AS(engine.run_until(idx, 2, rng), RunError);
  CHECK(engine.flight(idx).holder_count() == 1);
  CHECK(engine.flight(idx).rejected > 0);
  CHECK(slot_cap(10) == 1230);
}

TEST_CASE("complete dissemination finishes well inside the cap", "[gossip]") {
  for (std::int64_t n : {2, 10, 100, 1000, 10000}) {
    GossipConfig cfg;
    cfg.n = n;
    const auto s = run_dissemination(cfg, {1.0}, n == 10000 ? 5 : 20, 8);
    CHECK(s.levels[0].max < slot_cap(n));
  }
}

TEST_CASE("same seed, same holder sequences", "[gossip]") {
  const auto a = run_dissemination({}, {0.5, 1.0}, 30, 123, true);
  const auto b = run_dissemination({}, {0.5, 1.0}, 30, 123, true, 1);
  CHECK(a.holder_counts == b.holder_counts);
  CHECK(a.levels[1].mean == b.levels[1].mean);
  const auto c = run_dissemination({}, {0.5, 1.0}, 30, 124, true);
  CHECK(a.holder_counts != c.holder_counts);
}

TEST_CASE("early phase grows exponentially", "[gossip][statistical]") {
  const auto s = run_dissemination({}, {1.0}, 1000, 31, true);
  std::size_t longest = 0;
  for (const auto& t : s.holder_counts) longest = std::max(longest, t.size());
  std::vector<double> mean(longest, 0.0);
  for (const auto& t : s.holder_counts) {
    for (std::size_t i = 0; i < longest; ++i) mean[i] += static_cast<double>(i < t.size() ? t[i] : t.back());
  }
  for (double& m : mean) m /= static_cast<double>(s.holder_counts.size());
  for (std::size_t i = 1; i < longest && mean[i] <= 100.0; ++i) CHECK(mean[i] / mean[i - 1] >= 1.5);
}

TEST_CASE("delays follow the logistic model below gamma 0.99", "[gossip][statistical]") {
  const std::vector<double> levels{0.5, 0.9, 0.99, 1.0};
  const auto s = run_dissemination({}, levels, 400, 17);
  for (std::size_t k = 0; k < 3; ++k) {
    const double analytic = analytic::gossip_dissemination_delay({1000, 0, 1, levels[k], 1000});
    CHECK(std::abs(s.levels[k].mean - analytic) / analytic < 0.10);
  }
  CHECK(s.levels[3].mean > 13.5);
  CHECK(s.levels[3].mean < 15.5);
}

TEST_CASE("gossip config validation", "[gossip]") {
  GossipConfig cfg;
  cfg.n = 1;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.n = 5;
  cfg.phi = 5;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  CHECK_THROWS_AS(holders_for_level(0.0, 10), ParameterError);
  CHECK(holders_for_level(0.999, 1000) == 999);
  CHECK(holders_for_level(0.9995, 1000) == 1000);
  CHECK(holders_for_level(1e-9, 1000) == 1);
}
