#include "mhull/experiments.hpp"

#include <sys/file.h>
#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "mhull/errors.hpp"

namespace mhull {

namespace {

constexpr std::uint64_t kModulusMix = 0x9E3779B97F4A7C15ULL;

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

i64 to_i64(std::string_view text) {
  i64 value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("expected an integer, got \"" + std::string(text) + "\"");
  }
  return value;
}

double to_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("expected a real number, got \"" + std::string(text) + "\"");
  }
  return value;
}

std::string format_exact(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string cache_key(std::string_view version, double cutoff_factor, i64 m, i64 a,
                      HullMethod method) {
  return std::string(version) + "|" + format_exact(cutoff_factor) + "|" + std::to_string(m) +
         "|" + std::to_string(a) + "|" + std::string(to_string(method));
}

// version,cutoff_factor,m,a,v,phi,tau_m_minus_1,kernel,t,squarefree,
// exponent,norm512,method,candidate_count,elapsed_ns -- reals at full
// precision so cached records compare equal to recomputed ones.
std::string to_cache_line(const SweepRecord& r, double cutoff_factor) {
  std::ostringstream os;
  os << kLibraryVersion << ',' << format_exact(cutoff_factor) << ',' << r.m << ',' << r.a << ','
     << r.v << ',' << r.phi << ',' << r.tau_m_minus_1 << ',' << r.kernel << ',' << r.t << ','
     << (r.squarefree ? 1 : 0) << ',' << format_exact(r.exponent) << ','
     << format_exact(r.norm512) << ',' << to_string(r.method) << ',' << r.candidate_count << ','
     << r.elapsed_ns;
  return os.str();
}

SweepRecord record_from_fields(std::span<const std::string_view> f) {
  SweepRecord r;
  r.m = to_i64(f[0]);
  r.a = to_i64(f[1]);
  r.v = to_i64(f[2]);
  r.phi = to_i64(f[3]);
  r.tau_m_minus_1 = to_i64(f[4]);
  r.kernel = to_i64(f[5]);
  r.t = to_i64(f[6]);
  if (f[7] != "0" && f[7] != "1") throw ParseError("squarefree must be 0 or 1");
  r.squarefree = f[7] == "1";
  r.exponent = to_double(f[8]);
  r.norm512 = to_double(f[9]);
  r.method = parse_hull_method(f[10]);
  r.candidate_count = to_i64(f[11]);
  r.elapsed_ns = to_i64(f[12]);
  return r;
}

}  // namespace

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& task) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

APolicy APolicy::parse(std::string_view text, std::uint64_t seed) {
  if (text == "one") return one();
  if (text == "all") return all();
  constexpr std::string_view prefix = "sample:";
  if (text.substr(0, prefix.size()) == prefix) {
    const i64 k = to_i64(text.substr(prefix.size()));
    if (k < 1) throw InvalidArgument("sample size must be >= 1");
    return sample(k, seed);
  }
  throw InvalidArgument("a-policy must be one, all or sample:K, got \"" + std::string(text) +
                        "\"");
}

std::vector<i64> select_residues(i64 m, const APolicy& policy) {
  if (m < 2) throw InvalidArgument("modulus must be >= 2");
  switch (policy.kind) {
    case APolicy::Kind::One:
      return {1};
    case APolicy::Kind::All: {
      std::vector<i64> out;
      for (i64 a = 1; a < m; ++a) {
        if (std::gcd(a, m) == 1) out.push_back(a);
      }
      return out;
    }
    case APolicy::Kind::Sample: {
      const i64 units = euler_phi(factorize(m));
      if (policy.sample_size >= units) return select_residues(m, APolicy::all());
      SplitMix64 rng(policy.seed ^ (static_cast<std::uint64_t>(m) * kModulusMix));
      std::set<i64> chosen;
      while (static_cast<i64>(chosen.size()) < policy.sample_size) {
        const i64 a = 1 + static_cast<i64>(rng.next() % static_cast<std::uint64_t>(m - 1));
        if (std::gcd(a, m) == 1) chosen.insert(a);
      }
      return {chosen.begin(), chosen.end()};
    }
  }
  return {};
}

i64 lower_bound_v1(i64 tau_m_minus_1) { return 2 * (tau_m_minus_1 - 1); }

SweepRecord make_record(const HyperbolaSpec& spec, const PruneConfig& cfg, bool record_timing) {
  const auto start = std::chrono::steady_clock::now();
  const HullResult hull = compute_hull(spec, cfg);
  const auto stop = std::chrono::steady_clock::now();

  const i64 m = spec.m();
  const ArithmeticProfile prof = arithmetic_profile(m);
  SweepRecord r;
  r.m = m;
  r.a = spec.a();
  r.v = static_cast<i64>(hull.hull.size());
  r.phi = prof.phi;
  r.tau_m_minus_1 = divisor_count(factorize(m - 1));
  r.kernel = prof.kernel;
  r.t = prof.t;
  r.squarefree = prof.squarefree;
  r.exponent = r.v <= 1 ? 0.0 : std::log(static_cast<double>(r.v)) / std::log(static_cast<double>(m));
  r.norm512 = static_cast<double>(r.v) /
              (static_cast<double>(r.t) * std::pow(static_cast<double>(m), 5.0 / 12.0));
  r.method = hull.method;
  r.candidate_count = static_cast<i64>(hull.candidate_count);
  r.elapsed_ns =
      record_timing
          ? std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()
          : 0;
  return r;
}

SweepCache::SweepCache(std::filesystem::path dir)
    : dir_(std::move(dir)), file_(dir_ / "records-v1.csv") {
  load(entries_);
}

std::filesystem::path SweepCache::default_dir() {
  if (const char* env = std::getenv("MHULL_CACHE_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".mhull-cache";
}

void SweepCache::load(std::map<std::string, std::string>& into) const {
  std::ifstream in(file_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 15) throw ParseError("malformed cache line in " + file_.string());
    const SweepRecord r = record_from_fields(std::span(f).subspan(2));
    into.emplace(cache_key(f[0], to_double(f[1]), r.m, r.a, r.method), line);
  }
}

std::optional<SweepRecord> SweepCache::find(i64 m, i64 a, HullMethod method,
                                            double cutoff_factor) const {
  const auto it = entries_.find(cache_key(kLibraryVersion, cutoff_factor, m, a, method));
  if (it == entries_.end()) return std::nullopt;
  const auto f = split(it->second, ',');
  return record_from_fields(std::span(f).subspan(2));
}

void SweepCache::insert(const SweepRecord& record, double cutoff_factor) {
  std::string key = cache_key(kLibraryVersion, cutoff_factor, record.m, record.a, record.method);
  if (entries_.contains(key)) return;
  std::string line = to_cache_line(record, cutoff_factor);
  entries_.emplace(key, line);
  pending_.push_back({std::move(key), std::move(line)});
}

void SweepCache::flush() {
  if (pending_.empty()) return;
  std::filesystem::create_directories(dir_);
  const std::filesystem::path lock_path = dir_ / "records.lock";
  const int fd = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
  if (fd < 0) throw Error("cannot open cache lock " + lock_path.string());
  if (::flock(fd, LOCK_EX) != 0) {
    ::close(fd);
    throw Error("cannot lock " + lock_path.string());
  }
  try {
    std::map<std::string, std::string> on_disk;
    load(on_disk);
    std::string body;
    {
      std::ifstream in(file_);
      body.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    if (!body.empty() && body.back() != '\n') body.push_back('\n');
    for (const auto& e : pending_) {
      if (on_disk.contains(e.key)) continue;
      body += e.line;
      body.push_back('\n');
    }
    const std::filesystem::path tmp =
        dir_ / ("records-v1.csv.tmp." + std::to_string(::getpid()));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << body;
      if (!out) throw Error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, file_);
    for (auto& [key, line] : on_disk) entries_.emplace(key, line);
    pending_.clear();
  } catch (...) {
    ::flock(fd, LOCK_UN);
    ::close(fd);
    throw;
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
}

std::vector<SweepRecord> run_sweep_moduli(std::span<const i64> moduli, const APolicy& policy,
                                          const PruneConfig& cfg, const SweepOptions& options) {
  cfg.validate();
  std::vector<i64> ms(moduli.begin(), moduli.end());
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());

  std::vector<HyperbolaSpec> tasks;
  for (i64 m : ms) {
    if (m < 2) throw InvalidArgument("moduli must be >= 2");
    if (m > kMaxModulus) throw CeilingExceeded("modulus " + std::to_string(m) + " exceeds 2^31");
    for (i64 a : select_residues(m, policy)) tasks.emplace_back(m, a);
  }

  std::vector<SweepRecord> records(tasks.size());
  std::vector<char> fresh(tasks.size(), 0);
  parallel_for(tasks.size(), options.workers, [&](std::size_t i) {
    const HyperbolaSpec& spec = tasks[i];
    if (options.cache != nullptr) {
      const HullMethod method = resolve_method(spec.m(), cfg);
      if (auto hit = options.cache->find(spec.m(), spec.a(), method, cfg.cutoff_factor)) {
        records[i] = *hit;
        if (!options.record_timing) records[i].elapsed_ns = 0;
        return;
      }
    }
    records[i] = make_record(spec, cfg, options.record_timing);
    fresh[i] = 1;
  });

  if (options.cache != nullptr) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (fresh[i]) options.cache->insert(records[i], cfg.cutoff_factor);
    }
    options.cache->flush();
  }
  return records;
}

std::vector<SweepRecord> run_sweep(i64 m_min, i64 m_max, const APolicy& policy,
                                   const PruneConfig& cfg, const SweepOptions& options) {
  if (m_min < 2 || m_max < m_min) {
    throw InvalidArgument("sweep range must satisfy 2 <= m_min <= m_max");
  }
  if (m_max > kMaxModulus) throw CeilingExceeded("m_max exceeds the 2^31 modulus ceiling");
  std::vector<i64> moduli(static_cast<std::size_t>(m_max - m_min + 1));
  std::iota(moduli.begin(), moduli.end(), m_min);
  return run_sweep_moduli(moduli, policy, cfg, options);
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string to_csv_row(const SweepRecord& r) {
  std::ostringstream os;
  os << r.m << ',' << r.a << ',' << r.v << ',' << r.phi << ',' << r.tau_m_minus_1 << ','
     << r.kernel << ',' << r.t << ',' << (r.squarefree ? 1 : 0) << ',' << format_real(r.exponent)
     << ',' << format_real(r.norm512) << ',' << to_string(r.method) << ',' << r.candidate_count
     << ',' << r.elapsed_ns;
  return os.str();
}

void write_csv(std::ostream& out, std::span<const SweepRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
}

SweepRecord parse_csv_row(std::string_view line) {
  const auto f = split(line, ',');
  if (f.size() != 13) {
    throw ParseError("CSV row needs 13 fields, got " + std::to_string(f.size()));
  }
  return record_from_fields(f);
}

std::vector<SweepRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("missing or wrong CSV header");
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_csv_row(line));
  }
  return out;
}

CensusResult lower_bound_census(i64 m_min, i64 m_max, const PruneConfig& cfg, unsigned workers) {
  cfg.validate();
  const i64 lo = std::max<i64>(m_min, 3);
  CensusResult result;
  if (m_max < lo) return result;
  if (m_max > kMaxModulus) throw CeilingExceeded("m_max exceeds the 2^31 modulus ceiling");
  const auto n = static_cast<std::size_t>(m_max - lo + 1);
  std::vector<i64> v(n);
  std::vector<i64> bound(n);
  parallel_for(n, workers, [&](std::size_t i) {
    const i64 m = lo + static_cast<i64>(i);
    v[i] = static_cast<i64>(compute_hull(HyperbolaSpec(m, 1), cfg).hull.size());
    bound[i] = lower_bound_v1(divisor_count(factorize(m - 1)));
  });
  result.checked = static_cast<i64>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const i64 m = lo + static_cast<i64>(i);
    if (v[i] < bound[i]) result.violations.push_back({m, v[i], bound[i]});
    if (v[i] == bound[i]) {
      ++result.equality_count;
      result.equality_moduli.push_back(m);
    }
  }
  return result;
}

namespace {

ExponentGroup summarize(std::string label, const std::vector<const SweepRecord*>& rows) {
  ExponentGroup g;
  g.label = std::move(label);
  g.count = rows.size();
  if (rows.empty()) return g;
  double sum_e = 0.0;
  double sum_n = 0.0;
  bool first = true;
  for (const SweepRecord* r : rows) {
    sum_e += r->exponent;
    sum_n += r->norm512;
    if (first || r->exponent > g.max_exponent) {
      g.max_exponent = r->exponent;
      g.argmax_m = r->m;
      g.argmax_a = r->a;
    }
    g.max_norm512 = first ? r->norm512 : std::max(g.max_norm512, r->norm512);
    first = false;
  }
  g.mean_exponent = sum_e / static_cast<double>(rows.size());
  g.mean_norm512 = sum_n / static_cast<double>(rows.size());
  return g;
}

nlohmann::json group_json(const ExponentGroup& g) {
  return {{"label", g.label},
          {"count", g.count},
          {"max_exponent", g.max_exponent},
          {"mean_exponent", g.mean_exponent},
          {"max_norm512", g.max_norm512},
          {"mean_norm512", g.mean_norm512},
          {"argmax_m", g.argmax_m},
          {"argmax_a", g.argmax_a}};
}

std::string group_text(const ExponentGroup& g) {
  std::ostringstream os;
  os << g.label << ": n=" << g.count;
  if (g.count > 0) {
    os << " max_exponent=" << format_real(g.max_exponent) << " (m=" << g.argmax_m
       << ", a=" << g.argmax_a << ") mean_exponent=" << format_real(g.mean_exponent)
       << " max_norm512=" << format_real(g.max_norm512)
       << " mean_norm512=" << format_real(g.mean_norm512);
  }
  return os.str();
}

}  // namespace

ExponentSummary exponent_summary(std::span<const SweepRecord> records) {
  if (records.empty()) throw InvalidArgument("exponent_summary needs at least one record");
  std::vector<const SweepRecord*> all;
  std::vector<const SweepRecord*> sf;
  std::vector<const SweepRecord*> non_sf;
  std::map<int, std::vector<const SweepRecord*>> dyadic;
  for (const auto& r : records) {
    all.push_back(&r);
    (r.squarefree ? sf : non_sf).push_back(&r);
    dyadic[std::bit_width(static_cast<std::uint64_t>(r.m)) - 1].push_back(&r);
  }
  ExponentSummary s;
  s.overall = summarize("all", all);
  s.by_squarefree.push_back(summarize("squarefree", sf));
  s.by_squarefree.push_back(summarize("non-squarefree", non_sf));
  for (const auto& [k, rows] : dyadic) {
    s.by_dyadic.push_back(summarize(
        "[2^" + std::to_string(k) + ",2^" + std::to_string(k + 1) + ")", rows));
  }
  return s;
}

std::string ExponentSummary::to_text() const {
  std::ostringstream os;
  os << group_text(overall) << '\n';
  for (const auto& g : by_squarefree) os << group_text(g) << '\n';
  for (const auto& g : by_dyadic) os << group_text(g) << '\n';
  return os.str();
}

nlohmann::json ExponentSummary::to_json() const {
  nlohmann::json j;
  j["overall"] = group_json(overall);
  j["by_squarefree"] = nlohmann::json::array();
  for (const auto& g : by_squarefree) j["by_squarefree"].push_back(group_json(g));
  j["by_dyadic"] = nlohmann::json::array();
  for (const auto& g : by_dyadic) j["by_dyadic"].push_back(group_json(g));
  return j;
}

}  // namespace mhull
