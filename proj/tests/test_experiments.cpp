#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "mhull/errors.hpp"
#include "mhull/experiments.hpp"
#include "oracles.hpp"

using namespace mhull;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("mhull-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string csv_of(const std::vector<SweepRecord>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

}  // namespace

TEST_CASE("SplitMix64 reference outputs") {
  // First outputs for seed 0 from the published reference implementation.
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("APolicy parsing") {
  CHECK(APolicy::parse("one", 0).kind == APolicy::Kind::One);
  CHECK(APolicy::parse("all", 0).kind == APolicy::Kind::All);
  const auto s = APolicy::parse("sample:3", 9);
  CHECK(s.kind == APolicy::Kind::Sample);
  CHECK(s.sample_size == 3);
  CHECK(s.seed == 9);
  CHECK_THROWS_AS(APolicy::parse("sample:0", 1), InvalidArgument);
  CHECK_THROWS_AS(APolicy::parse("sample:x", 1), ParseError);
  CHECK_THROWS_AS(APolicy::parse("some", 1), InvalidArgument);
}

TEST_CASE("select_residues") {
  CHECK(select_residues(10, APolicy::one()) == std::vector<i64>{1});
  CHECK(select_residues(10, APolicy::all()) == std::vector<i64>{1, 3, 7, 9});
  CHECK(select_residues(10, APolicy::sample(9, 1)) == std::vector<i64>{1, 3, 7, 9});
  for (i64 m = 3; m < 400; ++m) {
    const auto a = select_residues(m, APolicy::sample(2, 42));
    REQUIRE(a == select_residues(m, APolicy::sample(2, 42)));
    REQUIRE(a.size() == std::min<std::size_t>(2, static_cast<std::size_t>(oracle::totient(m))));
    REQUIRE(std::is_sorted(a.begin(), a.end()));
    REQUIRE(std::adjacent_find(a.begin(), a.end()) == a.end());
    for (i64 x : a) REQUIRE(std::gcd(x, m) == 1);
  }
  // Different seeds should not always agree.
  int differ = 0;
  for (i64 m = 100; m < 200; ++m) {
    differ += select_residues(m, APolicy::sample(2, 1)) != select_residues(m, APolicy::sample(2, 2));
  }
  CHECK(differ > 50);
}

TEST_CASE("run_sweep examples") {
  const PruneConfig cfg;
  const auto one = run_sweep(3, 7, APolicy::one(), cfg);
  std::vector<i64> v;
  for (const auto& r : one) v.push_back(r.v);
  CHECK(v == std::vector<i64>{2, 2, 4, 2, 6});

  const auto all = run_sweep(7, 7, APolicy::all(), cfg);
  REQUIRE(all.size() == 6);
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i].a == static_cast<i64>(i) + 1);

  const auto s1 = run_sweep(5, 5, APolicy::sample(2, 17), cfg);
  const auto s2 = run_sweep(5, 5, APolicy::sample(2, 17), cfg);
  REQUIRE(s1.size() == 2);
  CHECK(s1 == s2);

  const auto r7 = one.back();
  CHECK(r7.m == 7);
  CHECK(r7.phi == 6);
  CHECK(r7.tau_m_minus_1 == 4);
  CHECK(r7.kernel == 7);
  CHECK(r7.t == 1);
  CHECK(r7.squarefree);
  CHECK(r7.exponent == doctest::Approx(std::log(6.0) / std::log(7.0)));
  CHECK(r7.norm512 == doctest::Approx(6.0 / std::pow(7.0, 5.0 / 12.0)));
  CHECK(r7.method == HullMethod::Naive);
  CHECK(r7.elapsed_ns == 0);

  CHECK_THROWS_AS(run_sweep(1, 5, APolicy::one(), cfg), InvalidArgument);
  CHECK_THROWS_AS(run_sweep(9, 5, APolicy::one(), cfg), InvalidArgument);
}

TEST_CASE("sweep records satisfy their invariants") {
  const PruneConfig cfg;
  const auto rows = run_sweep(2, 600, APolicy::sample(3, 5), cfg, {4, false, nullptr});
  for (const auto& r : rows) {
    REQUIRE(r.v >= 1);
    REQUIRE(r.v <= r.phi);
    REQUIRE(r.phi == oracle::totient(r.m));
    if (r.a == 1 && r.m >= 3) REQUIRE(r.v >= lower_bound_v1(r.tau_m_minus_1));
    const auto pts = enumerate_points(HyperbolaSpec(r.m, r.a));
    if (r.m % 50 == 0) REQUIRE(r.v == static_cast<i64>(oracle::gift_wrap(pts).size()));
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(std::pair(rows[i - 1].m, rows[i - 1].a) < std::pair(rows[i].m, rows[i].a));
  }
}

TEST_CASE("parallel sweeps match serial ones") {
  const PruneConfig cfg;
  const auto serial = run_sweep(900, 1100, APolicy::sample(2, 3), cfg);
  const auto parallel = run_sweep(900, 1100, APolicy::sample(2, 3), cfg, {8, false, nullptr});
  CHECK(csv_of(serial) == csv_of(parallel));
}

TEST_CASE("lower_bound_census") {
  const PruneConfig cfg;
  const auto c = lower_bound_census(3, 100, cfg);
  CHECK(c.checked == 98);
  CHECK(c.violations.empty());
  CHECK(std::count(c.equality_moduli.begin(), c.equality_moduli.end(), 5) == 1);
  CHECK(std::count(c.equality_moduli.begin(), c.equality_moduli.end(), 7) == 1);
  CHECK(c.equality_count == static_cast<i64>(c.equality_moduli.size()));
  // Independent brute-force for the equality cases in [3, 40].
  for (i64 m = 3; m <= 40; ++m) {
    const i64 v = static_cast<i64>(oracle::gift_wrap(oracle::hyperbola_points(m, 1)).size());
    const i64 bound = 2 * (oracle::divisor_count(m - 1) - 1);
    REQUIRE(v >= bound);
    const bool eq = std::count(c.equality_moduli.begin(), c.equality_moduli.end(), m) == 1;
    REQUIRE(eq == (v == bound));
  }
  CHECK(lower_bound_census(2, 2, cfg).checked == 0);
}

TEST_CASE("exponent_summary") {
  SweepRecord r7;
  r7.m = 7;
  r7.a = 1;
  r7.v = 6;
  r7.t = 1;
  r7.squarefree = true;
  r7.exponent = std::log(6.0) / std::log(7.0);
  const std::vector<SweepRecord> one{r7};
  const auto s = exponent_summary(one);
  CHECK(s.overall.max_exponent == doctest::Approx(0.920782).epsilon(1e-6));
  CHECK(s.overall.count == 1);

  const auto rows = run_sweep(2, 64, APolicy::one(), PruneConfig{});
  CHECK(rows.front().v == 1);
  CHECK(rows.front().exponent == 0.0);
  const auto g = exponent_summary(rows);
  REQUIRE(g.by_squarefree.size() == 2);
  CHECK(g.by_squarefree[0].label == "squarefree");
  CHECK(g.by_squarefree[1].label == "non-squarefree");
  CHECK(g.by_squarefree[0].count + g.by_squarefree[1].count == rows.size());
  double sf_max = 0.0;
  double nsf_max = 0.0;
  for (const auto& r : rows) (r.squarefree ? sf_max : nsf_max) = std::max(r.squarefree ? sf_max : nsf_max, r.exponent);
  CHECK(g.by_squarefree[0].max_exponent == sf_max);
  CHECK(g.by_squarefree[1].max_exponent == nsf_max);
  CHECK(g.by_dyadic.front().label == "[2^1,2^2)");
  CHECK(g.by_dyadic.back().label == "[2^6,2^7)");
  CHECK(g.to_text().find("non-squarefree: n=") != std::string::npos);
  const auto j = g.to_json();
  CHECK(j["by_squarefree"].size() == 2);
  CHECK(j["overall"]["count"] == rows.size());
  CHECK_THROWS_AS(exponent_summary(std::span<const SweepRecord>{}), InvalidArgument);
}

TEST_CASE("CSV round trip and byte determinism") {
  const PruneConfig cfg;
  const auto a = run_sweep(100, 160, APolicy::sample(2, 42), cfg);
  const auto b = run_sweep(100, 160, APolicy::sample(2, 42), cfg);
  const std::string text = csv_of(a);
  CHECK(text == csv_of(b));
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  std::istringstream in(text);
  const auto back = read_csv(in);
  REQUIRE(back.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(to_csv_row(back[i]) == to_csv_row(a[i]));
  CHECK(format_real(0.920782221) == "0.920782");
  CHECK(format_real(0.0) == "0");
  CHECK_THROWS_AS(parse_csv_row("1,2,3"), ParseError);
  std::istringstream bad("m,a\n");
  CHECK_THROWS_AS(read_csv(bad), ParseError);
}

TEST_CASE("cache coherence") {
  TempDir dir;
  PruneConfig cfg;
  cfg.naive_threshold = 50;  // exercise both paths
  std::vector<SweepRecord> cold;
  {
    SweepCache cache(dir.path);
    CHECK(cache.size() == 0);
    cold = run_sweep(30, 90, APolicy::sample(2, 8), cfg, {2, false, &cache});
    CHECK(cache.size() == cold.size());
  }
  REQUIRE(fs::exists(dir.path / "records-v1.csv"));
  SweepCache warm_cache(dir.path);
  CHECK(warm_cache.size() == cold.size());
  const auto warm = run_sweep(30, 90, APolicy::sample(2, 8), cfg, {2, false, &warm_cache});
  CHECK(warm == cold);
  const auto fresh = run_sweep(30, 90, APolicy::sample(2, 8), cfg);
  CHECK(fresh == cold);

  // A cached record is keyed by method and cutoff factor.
  const auto& r0 = cold.back();
  const HullMethod other = r0.method == HullMethod::Fast ? HullMethod::Naive : HullMethod::Fast;
  CHECK(warm_cache.find(r0.m, r0.a, r0.method, cfg.cutoff_factor) == r0);
  CHECK_FALSE(warm_cache.find(r0.m, r0.a, other, cfg.cutoff_factor).has_value());
  CHECK_FALSE(warm_cache.find(r0.m, r0.a, r0.method, 0.5).has_value());

  // Recomputing a cached entry gives the same v.
  for (const auto& r : cold) {
    const auto cached = warm_cache.find(r.m, r.a, r.method, cfg.cutoff_factor);
    REQUIRE(cached.has_value());
    REQUIRE(cached->v == static_cast<i64>(naive_hull(HyperbolaSpec(r.m, r.a)).size()));
  }

  // Two caches flushing into the same directory merge rather than clobber.
  SweepCache c1(dir.path);
  SweepCache c2(dir.path);
  run_sweep(200, 210, APolicy::one(), cfg, {1, false, &c1});
  run_sweep(300, 310, APolicy::one(), cfg, {1, false, &c2});
  SweepCache merged(dir.path);
  CHECK(merged.size() == cold.size() + 11 + 11);
}

TEST_CASE("timed runs do not leak timings into untimed output") {
  TempDir dir;
  const PruneConfig cfg;
  SweepCache cache(dir.path);
  const auto timed = run_sweep(1000, 1010, APolicy::one(), cfg, {1, true, &cache});
  bool any_nonzero = false;
  for (const auto& r : timed) any_nonzero = any_nonzero || r.elapsed_ns > 0;
  CHECK(any_nonzero);
  const auto untimed = run_sweep(1000, 1010, APolicy::one(), cfg, {1, false, &cache});
  for (const auto& r : untimed) CHECK(r.elapsed_ns == 0);
}
