#include <catch_amalgamated.hpp>

#include <cbt/ledger.hpp>
#include <cbt/runner.hpp>

#include <sstream>

using namespace cbt;

namespace {

SatId sat_id(std::uint32_t origin, std::uint64_t seq = 0, SlotTime generated = 0) {
  return SatId{UserId{origin}, generated, seq};
}

std::vector<double> t_hats(const DistributedSpectrumLedger& l) {
  std::vector<double> out;
  for (const auto& e : l.saq()) out.push_back(e.t_hat);
  return out;
}

bool saq_sorted(const DistributedSpectrumLedger& l) {
  for (std::size_t i = 1; i < l.saq().size(); ++i) {
    const auto& a = l.saq()[i - 1];
    const auto& b = l.saq()[i];
    if (std::tie(a.t_hat, a.id.origin, a.id) > std::tie(b.t_hat, b.id.origin, b.id)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("queue order follows the consensus timestamp", "[ledger]") {
  DistributedSpectrumLedger l(UserId{0}, {100, 1000, 0});
  l.enqueue(sat_id(1), 5.0);
  l.enqueue(sat_id(2), 3.0);
  CHECK(t_hats(l) == std::vector<double>{3.0, 5.0});

  DistributedSpectrumLedger tie(UserId{0}, {100, 1000, 0});
  tie.enqueue(sat_id(7), 4.0);
  tie.enqueue(sat_id(2), 4.0);
  CHECK(tie.saq().front().id.origin == UserId{2});

  CHECK_THROWS_AS(l.enqueue(sat_id(1), 9.0), DuplicateError);
}

TEST_CASE("fairness puts the least served origin first", "[ledger]") {
  ConsensusPolicy fair;
  fair.scheduling = Scheduling::FairnessGuarantee;
  DistributedSpectrumLedger l(UserId{0}, {100, 1000, 0}, fair);
  const UserId a{1};
  const UserId b{2};
  for (std::uint64_t s = 0; s < 3; ++s) l.enqueue(sat_id(a.value, s), static_cast<double>(s));
  l.serve(0);
  REQUIRE(l.sah().size() == 3);
  CHECK(l.served_count(a) == 3);
  CHECK(l.served_count(b) == 0);

  l.enqueue(sat_id(a.value, 10), 1.0);
  l.enqueue(sat_id(b.value, 0), 9.0);
  CHECK(l.saq().front().id.origin == b);

  // Plain FVFS would keep timestamp order.
  DistributedSpectrumLedger plain(UserId{0}, {100, 1000, 0});
  for (std::uint64_t s = 0; s < 3; ++s) plain.enqueue(sat_id(a.value, s), static_cast<double>(s));
  plain.serve(0);
  plain.enqueue(sat_id(a.value, 10), 1.0);
  plain.enqueue(sat_id(b.value, 0), 9.0);
  CHECK(plain.saq().front().id.origin == a);
}

TEST_CASE("fairness window forgets old service", "[ledger]") {
  ConsensusPolicy fair;
  fair.scheduling = Scheduling::FairnessGuarantee;
  fair.fairness_window = 2;
  DistributedSpectrumLedger l(UserId{0}, {100, 1000, 0}, fair);
  l.enqueue(sat_id(1, 0), 0.0);
  l.serve(0);
  CHECK(l.served_count(UserId{1}) == 1);
  l.serve(1000);
  CHECK(l.served_count(UserId{1}) == 1);
  l.serve(2000);
  CHECK(l.served_count(UserId{1}) == 0);
}

TEST_CASE("serve_epoch honours the service rate", "[ledger]") {
  Rng rng(1);
  DistributedSpectrumLedger small(UserId{0}, {100, 1000, 0});
  for (std::uint32_t u = 0; u < 3; ++u) small.enqueue(sat_id(u), u);
  CHECK(small.serve_epoch(0, rng).size() == 3);
  CHECK(small.saq().empty());

  DistributedSpectrumLedger big(UserId{0}, {100, 1000, 0});
  for (std::uint32_t u = 0; u < 150; ++u) big.enqueue(sat_id(u), u);
  const auto served = big.serve_epoch(1000, rng);
  REQUIRE(served.size() == 100);
  for (std::uint32_t u = 0; u < 100; ++u) CHECK(served[u].origin == UserId{u});
  REQUIRE(big.saq().size() == 50);
  CHECK(big.saq().front().id.origin == UserId{100});
  CHECK(saq_sorted(big));
  for (std::size_t i = 0; i < big.sah().size(); ++i) {
    CHECK(big.sah()[i].served_at >= 1000);
    CHECK(big.sah()[i].served_at < 2000);
    if (i) CHECK(big.sah()[i].served_at >= big.sah()[i - 1].served_at);
  }

  DistributedSpectrumLedger empty(UserId{0}, {100, 1000, 0});
  CHECK(empty.serve_epoch(0, rng).empty());
  CHECK(empty.header().epoch == 1);
}

TEST_CASE("serve_epoch rejects off-boundary and repeated spans", "[ledger]") {
  Rng rng(1);
  DistributedSpectrumLedger l(UserId{0}, {100, 1000, 0});
  CHECK_THROWS_AS(l.serve_epoch(500, rng), SequencingError);
  l.serve_epoch(1000, rng);
  CHECK_THROWS_AS(l.serve_epoch(1000, rng), SequencingError);
  CHECK_THROWS_AS(l.serve_epoch(0, rng), SequencingError);
  CHECK_NOTHROW(l.serve_epoch(2000, rng));
  CHECK_THROWS_AS(l.update_header(50, 1000, 2500), SequencingError);
  l.update_header(50, 1000, 3000);
  CHECK(l.header().n_v == 50);
}

TEST_CASE("admit rejects invalid signatures", "[ledger]") {
  const KeyedHashScheme scheme(3);
  DistributedSpectrumLedger l(UserId{9}, {100, 1000, 0});
  auto good = generate_sat(UserId{1}, 0, 0, scheme);
  record_verification(good, UserId{2}, 2, scheme);
  auto bad = generate_sat(UserId{3}, 0, 0, scheme);
  bad.id.generated_at = 1;
  CHECK(l.admit(std::make_shared<const SpectrumAccessTransaction>(good), scheme, 10) == 1.0);
  CHECK_THROWS_AS(l.admit(std::make_shared<const SpectrumAccessTransaction>(bad), scheme, 10), ValidityError);
  CHECK(l.saq().size() == 1);
  CHECK_FALSE(l.contains(bad.id));
}

TEST_CASE("ledger dump is line oriented", "[ledger]") {
  const KeyedHashScheme scheme(3);
  DistributedSpectrumLedger l(UserId{9}, {100, 1000, 0});
  auto sat = generate_sat(UserId{1}, 0, 0, scheme);
  record_verification(sat, UserId{2}, 2, scheme);
  record_verification(sat, UserId{4}, 3, scheme);
  l.admit(std::make_shared<const SpectrumAccessTransaction>(sat), scheme, 10);
  l.enqueue(sat_id(5, 0, 1), 7.5);
  std::ostringstream os;
  l.dump(os);
  CHECK(os.str() ==
        "# ledger owner=9 epoch=0 n_v=100 mu=1000\n"
        "saq 1:0:0 1 0 2:2,4:3 1.66667\n"
        "saq 5:1:0 5 1 - 7.5\n");
  l.serve(1000);
  std::ostringstream after;
  l.dump(after);
  CHECK(after.str() ==
        "# ledger owner=9 epoch=1 n_v=100 mu=1000\n"
        "sah 1:0:0 1 0 1000\n"
        "sah 5:1:0 5 1 1000\n");
}

TEST_CASE("queue stays sorted under random traffic", "[ledger][property]") {
  Rng rng(77);
  DistributedSpectrumLedger l(UserId{0}, {7, 10, 0});
  std::uniform_real_distribution<double> stamp(0.0, 50.0);
  std::uniform_int_distribution<std::uint32_t> who(0, 20);
  std::uint64_t seq = 0;
  std::size_t enqueued = 0;
  for (SlotTime boundary = 0; boundary < 2000; boundary += 10) {
    const int arrivals = std::uniform_int_distribution<int>(0, 9)(rng);
    for (int k = 0; k < arrivals; ++k) {
      l.enqueue(sat_id(who(rng), seq++), std::floor(stamp(rng)));
      ++enqueued;
      REQUIRE(saq_sorted(l));
    }
    const std::size_t before = l.saq().size();
    const auto served = l.serve_epoch(boundary, rng);
    REQUIRE(served.size() == std::min<std::size_t>(before, 7));
    REQUIRE(saq_sorted(l));
    REQUIRE(l.saq().size() + l.sah().size() == enqueued);
  }
}
