#pragma once

// Batch computation of vertex counts v_a(m): sweeps over ranges of moduli,
// the lower-bound census for a = 1, exponent summaries, CSV output and an
// on-disk record cache.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mhull/hullfast.hpp"

namespace mhull {

inline constexpr std::string_view kLibraryVersion = "1.0.0";

// SplitMix64 (Steele, Lea, Flood). The exact output sequence is part of the
// sampling contract, so it is spelled out here rather than taken from
// <random>.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Runs task(i) for every i in [0, n) on up to `workers` threads. The first
// exception thrown by a task stops the remaining work and is rethrown.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& task);

struct APolicy {
  enum class Kind { One, All, Sample };
  Kind kind = Kind::One;
  i64 sample_size = 0;
  std::uint64_t seed = 0;

  static APolicy one() { return {Kind::One, 0, 0}; }
  static APolicy all() { return {Kind::All, 0, 0}; }
  static APolicy sample(i64 k, std::uint64_t seed) { return {Kind::Sample, k, seed}; }
  // "one", "all" or "sample:K".
  static APolicy parse(std::string_view text, std::uint64_t seed);
};

// Residues a for modulus m under the policy, increasing. Sample(k, seed)
// seeds SplitMix64 with seed ^ (m * 0x9E3779B97F4A7C15), draws
// a = 1 + next() % (m - 1), keeps draws coprime to m, and stops at k
// distinct values (all units when k >= phi(m)).
std::vector<i64> select_residues(i64 m, const APolicy& policy);

struct SweepRecord {
  i64 m = 0;
  i64 a = 0;
  i64 v = 0;
  i64 phi = 0;
  i64 tau_m_minus_1 = 0;
  i64 kernel = 0;
  i64 t = 0;
  bool squarefree = false;
  double exponent = 0.0;  // ln v / ln m, 0 when v = 1
  double norm512 = 0.0;   // v / (t * m^{5/12})
  HullMethod method = HullMethod::Naive;
  i64 candidate_count = 0;
  i64 elapsed_ns = 0;

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

// 2 * (tau(m - 1) - 1).
i64 lower_bound_v1(i64 tau_m_minus_1);

SweepRecord make_record(const HyperbolaSpec& spec, const PruneConfig& cfg, bool record_timing);

// Flat-file cache of sweep records keyed by (m, a, resolved method,
// cutoff_factor, library version). Entries are only ever added. Flushing
// takes an exclusive lock, merges with what is on disk and replaces the
// file by rename, so concurrent readers always see a complete file.
class SweepCache {
 public:
  explicit SweepCache(std::filesystem::path dir);

  // $MHULL_CACHE_DIR if set, otherwise ./.mhull-cache
  static std::filesystem::path default_dir();

  std::optional<SweepRecord> find(i64 m, i64 a, HullMethod method, double cutoff_factor) const;
  void insert(const SweepRecord& record, double cutoff_factor);
  void flush();

  std::size_t size() const { return entries_.size(); }
  const std::filesystem::path& file() const { return file_; }

 private:
  struct Entry {
    std::string key;
    std::string line;
  };
  void load(std::map<std::string, std::string>& into) const;

  std::filesystem::path dir_;
  std::filesystem::path file_;
  std::map<std::string, std::string> entries_;
  std::vector<Entry> pending_;
};

struct SweepOptions {
  unsigned workers = 1;
  bool record_timing = false;
  SweepCache* cache = nullptr;
};

std::vector<SweepRecord> run_sweep(i64 m_min, i64 m_max, const APolicy& policy,
                                   const PruneConfig& cfg, const SweepOptions& options = {});

// Same as run_sweep over an explicit list of moduli.
std::vector<SweepRecord> run_sweep_moduli(std::span<const i64> moduli, const APolicy& policy,
                                          const PruneConfig& cfg,
                                          const SweepOptions& options = {});

inline constexpr std::string_view kCsvHeader =
    "m,a,v,phi,tau_m_minus_1,kernel,t,squarefree,exponent,norm512,method,candidate_count,"
    "elapsed_ns";

std::string format_real(double value);
std::string to_csv_row(const SweepRecord& r);
void write_csv(std::ostream& out, std::span<const SweepRecord> records);
SweepRecord parse_csv_row(std::string_view line);
std::vector<SweepRecord> read_csv(std::istream& in);

struct CensusViolation {
  i64 m = 0;
  i64 v = 0;
  i64 bound = 0;
};

struct CensusResult {
  i64 checked = 0;
  std::vector<CensusViolation> violations;
  i64 equality_count = 0;
  std::vector<i64> equality_moduli;
};

// Checks v_1(m) >= 2 (tau(m - 1) - 1) for m in [max(m_min, 3), m_max].
CensusResult lower_bound_census(i64 m_min, i64 m_max, const PruneConfig& cfg = {},
                                unsigned workers = 1);

struct ExponentGroup {
  std::string label;
  std::size_t count = 0;
  double max_exponent = 0.0;
  double mean_exponent = 0.0;
  double max_norm512 = 0.0;
  double mean_norm512 = 0.0;
  i64 argmax_m = 0;
  i64 argmax_a = 0;
};

struct ExponentSummary {
  ExponentGroup overall;
  std::vector<ExponentGroup> by_squarefree;  // "squarefree", then "non-squarefree"
  std::vector<ExponentGroup> by_dyadic;      // "[2^k,2^(k+1))", increasing k

  std::string to_text() const;
  nlohmann::json to_json() const;
};

ExponentSummary exponent_summary(std::span<const SweepRecord> records);

}  // namespace mhull
