#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "reccalc/optstop.hpp"
#include "reccalc/recordlaw.hpp"
#include "reccalc/simulate.hpp"
#include "reccalc/stats.hpp"

namespace sim = reccalc::sim;
namespace rl = reccalc::recordlaw;
namespace os = reccalc::optstop;
namespace pa = reccalc::parallel;
using reccalc::rng::Stream;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("point sampler basics") {
  Stream rng(7, 0);
  CHECK(sim::sample_ppp_rect(0.0, 1.0, rng).empty());
  const auto atoms = sim::sample_ppp_rect(4.0, 4.0, rng);  // [0,4] x [0,1]
  for (const auto& a : atoms) {
    CHECK(a.x >= 0.0);
    CHECK(a.x <= 4.0);
    CHECK(a.y >= 0.0);
    CHECK(a.y <= 1.0);
  }
  CHECK_THROWS_AS((void)sim::sample_ppp_rect(kInf, 1.0, rng),
                  std::domain_error);
}

TEST_CASE("record extraction edge cases") {
  const auto empty = sim::extract_records({}, 2.0, 1.0);
  CHECK(empty.records.empty());
  const auto single = sim::extract_records({{0.5, 0.25}}, 2.0, 1.0);
  CHECK(single.records.size() == 1);
  CHECK(single.box_areas[0] == doctest::Approx(1.5 * 0.75));
  const auto two = sim::extract_records({{1.0, 0.9}, {0.2, 0.4}}, 2.0, 1.0);
  CHECK(two.records.size() == 2);  // rising staircase
  const auto shadowed =
      sim::extract_records({{0.2, 0.9}, {1.0, 0.4}}, 2.0, 1.0);
  CHECK(shadowed.records.size() == 1);
}

TEST_CASE("record sequence is increasing with decreasing boxes") {
  Stream rng(11, 3);
  const auto atoms = sim::sample_ppp_rect(6.0, 6.0, rng);
  const auto rec = sim::extract_records(atoms, 6.0, 1.0);
  for (std::size_t i = 1; i < rec.records.size(); ++i) {
    CHECK(rec.records[i].x > rec.records[i - 1].x);
    CHECK(rec.records[i].y > rec.records[i - 1].y);
    CHECK(rec.box_areas[i] < rec.box_areas[i - 1]);
  }
}

TEST_CASE("records around a horizontal cut") {
  const std::vector<sim::Atom> atoms = {
      {0.1, 0.2}, {0.3, 0.8}, {0.5, 0.4}, {0.7, 0.6}, {0.9, 0.45}};
  const auto [upper, lower] = sim::extract_records_cut(atoms, 1.0, 1.0, 0.5);
  // below the cut the heights 0.2, 0.4, 0.45 are all running maxima
  CHECK(upper.records.size() == 3);
  CHECK(lower.records.size() == 2);  // 0.8 then 0.6
  CHECK(lower.records[0].y == 0.8);
  CHECK(lower.records[1].y == 0.6);
}

TEST_CASE("chain paths decrease and absorb at zero") {
  Stream rng(3, 5);
  for (int rep = 0; rep < 200; ++rep) {
    const auto p = sim::sample_P_chain(3.0, rng);
    CHECK(p.states.back() == 0.0);
    double prev = p.start;
    for (double x : p.states) {
      CHECK(x < prev);
      prev = x;
    }
    const auto q = sim::sample_Q_chain(3.0, rng);
    CHECK(q.states.back() == 0.0);
    const auto c = sim::sample_corange_chain(3.0, rng);
    CHECK(c.states.back() == 0.0);
    for (std::size_t i = 1; i < c.states.size(); ++i) {
      CHECK(c.states[i] < c.states[i - 1]);
    }
  }
}

TEST_CASE("joint box-area draws are increasing in the index") {
  Stream rng(17, 2);
  for (int rep = 0; rep < 100; ++rep) {
    for (auto kind : {sim::EuKind::A, sim::EuKind::B, sim::EuKind::C}) {
      const auto v = sim::sample_eu_joint(kind, 4, rng);
      CHECK(v.size() == 4);
      for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
    }
  }
}

TEST_CASE("policy outcomes are internally consistent") {
  Stream rng(23, 9);
  for (int rep = 0; rep < 500; ++rep) {
    for (auto problem : {sim::Problem::FI, sim::Problem::VC, sim::Problem::HC,
                         sim::Problem::Duration, sim::Problem::BinPack}) {
      const auto out = sim::run_policy(problem, 6.0, 1.5, rng);
      if (out.success) CHECK(out.stopped);
      if (out.stopped && problem != sim::Problem::BinPack) {
        CHECK(out.stop_x >= 0.0);
        CHECK(out.stop_x <= 6.0);
      }
    }
  }
  CHECK_THROWS_AS((void)sim::run_policy(sim::Problem::HC, kInf, 1.0, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)sim::run_policy(sim::Problem::FI, 1.0, 0.0, rng),
                  std::domain_error);
}

TEST_CASE("vanishing threshold never stops") {
  const auto est =
      sim::mc_policy_success(sim::Problem::FI, kInf, 1e-12, 5000, 31, 0);
  CHECK(est.mean == 0.0);
}

TEST_CASE("record-count histogram matches the closed form") {
  const double t = 1.0;
  const std::uint64_t n = 1000000;
  const int cells = 7;
  const auto counts = pa::mc_bincount(
      n, 6021, 0, cells, [t](Stream& rng, std::uint64_t) {
        const auto atoms = sim::sample_ppp_rect(t, t, rng);
        return std::min<int>(
            static_cast<int>(sim::extract_records(atoms, t, 1.0).records.size()),
            6);
      });
  std::vector<double> obs, expd;
  double tail = 1.0;
  for (int j = 0; j < cells; ++j) {
    obs.push_back(static_cast<double>(counts[j]));
    const double pj = (j < cells - 1) ? rl::p_count(t, j) : tail;
    expd.push_back(pj * static_cast<double>(n));
    if (j < cells - 1) tail -= pj;
  }
  CHECK(reccalc::stats::chi2_gof(obs, expd).p_value > 0.001);
}

TEST_CASE("infinite and finite simulators agree with the values") {
  const double tf = os::t_F();
  const auto fi = sim::mc_policy_success(sim::Problem::FI, 30.0, tf, 200000,
                                         8401, 0);
  CHECK(std::abs(fi.mean - os::value_FI(30.0)) < 4.0 * fi.std_error);
  const auto fi_inf =
      sim::mc_policy_success(sim::Problem::FI, kInf, tf, 200000, 8402, 0);
  CHECK(std::abs(fi_inf.mean - os::value_FI(kInf)) < 4.0 * fi_inf.std_error);
  const auto vc_inf = sim::mc_policy_success(sim::Problem::VC, kInf,
                                             os::t_P(), 200000, 8403, 0);
  CHECK(std::abs(vc_inf.mean - os::value_VC(kInf)) < 4.0 * vc_inf.std_error);
}

TEST_CASE("duration reward matches t q_1(t,s)") {
  const auto est = sim::mc_policy_reward(5.0, 1.0, 300000, 9301, 0);
  CHECK(std::abs(est.mean - os::duration_value(5.0, 1.0)) <
        4.0 * est.std_error);
}

TEST_CASE("two observers on the shared square") {
  const auto hv = sim::mc_horver(25.0, 200000, 4117, 0);
  CHECK(hv.disagree.mean > 0.0);
  CHECK(std::abs(hv.hor.mean - hv.ver.mean) <
        4.0 * std::hypot(hv.hor.std_error, hv.ver.std_error));
}

TEST_CASE("decomposition parts sum to the policy value") {
  const double s = os::t_F();
  const auto d = sim::decompose_p1(s, 200000, 5511, 0);
  CHECK(std::abs(d.part1.mean + d.part2.mean - d.total.mean) < 1e-12);
  CHECK(std::abs(d.total.mean - os::value_FI(kInf)) < 4.0 * d.total.std_error);
}

TEST_CASE("identical seeds reproduce identical estimates") {
  const auto a =
      sim::mc_policy_success(sim::Problem::VC, 4.0, 1.0, 30000, 777, 1);
  const auto b =
      sim::mc_policy_success(sim::Problem::VC, 4.0, 1.0, 30000, 777, 2);
  const auto c =
      sim::mc_policy_success(sim::Problem::VC, 4.0, 1.0, 30000, 777, 0);
  CHECK(a.mean == b.mean);
  CHECK(a.mean == c.mean);
  CHECK(a.std_error == b.std_error);
  const auto again =
      sim::mc_policy_success(sim::Problem::VC, 4.0, 1.0, 30000, 777, 2);
  CHECK(a.mean == again.mean);
}

TEST_CASE("per-trial streams are keyed by seed and index") {
  Stream a(42, 10), b(42, 10);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  Stream c(42, 11), d(42, 10), e(43, 10);
  bool index_differs = false, seed_differs = false;
  for (int i = 0; i < 10; ++i) {
    const auto ref = d.next_u64();
    index_differs = index_differs || (c.next_u64() != ref);
    seed_differs = seed_differs || (e.next_u64() != ref);
  }
  CHECK(index_differs);
  CHECK(seed_differs);
}
