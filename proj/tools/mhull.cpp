// Command-line front end: hulls, sweeps, verification, box counts, the
// lower-bound census and conic utilities.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "mhull/conics.hpp"
#include "mhull/errors.hpp"
#include "mhull/experiments.hpp"

using namespace mhull;

namespace {

struct HullArgs {
  i64 m = 0;
  i64 a = 1;
  std::string method = "auto";
  double cutoff_factor = PruneConfig{}.cutoff_factor;
  bool json = false;
};

struct SweepArgs {
  i64 m_min = 0;
  i64 m_max = 0;
  std::string a_policy = "one";
  std::uint64_t seed = 0;
  std::string out = "-";
  unsigned workers = 1;
  double cutoff_factor = PruneConfig{}.cutoff_factor;
  bool no_cache = false;
  bool record_timing = false;
  std::string summary_json;
};

struct VerifyArgs {
  i64 m_min = 0;
  i64 m_max = 0;
  std::string a_policy = "one";
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double cutoff_factor = PruneConfig{}.cutoff_factor;
};

struct CountArgs {
  i64 m = 0;
  i64 a = 1;
  i64 U = 0;
  i64 V = 0;
};

struct CensusArgs {
  i64 m_min = 3;
  i64 m_max = 0;
  unsigned workers = 1;
  double cutoff_factor = PruneConfig{}.cutoff_factor;
};

struct ConicArgs {
  std::string points;
  std::string monomials;
  std::vector<i64> coeffs;
  i64 H = 0;
};

std::string format_point(const LatticePoint& p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

std::string join_points(const PointSet& pts) {
  if (pts.empty()) return "-";
  std::string out;
  for (const auto& p : pts) {
    if (!out.empty()) out += ' ';
    out += format_point(p);
  }
  return out;
}

int run_hull(const HullArgs& args) {
  PruneConfig cfg;
  cfg.method = parse_hull_method(args.method);
  cfg.cutoff_factor = args.cutoff_factor;
  const HyperbolaSpec spec(args.m, args.a);
  const HullResult r = compute_hull(spec, cfg);
  const auto& v = r.hull.vertices();
  if (args.json) {
    nlohmann::json j;
    j["m"] = spec.m();
    j["a"] = spec.a();
    j["v"] = v.size();
    j["method"] = std::string(to_string(r.method));
    j["candidate_count"] = r.candidate_count;
    j["cutoff"] = r.cutoff;
    j["twice_area"] = twice_area(r.hull);
    j["vertices"] = nlohmann::json::array();
    for (const auto& p : v) j["vertices"].push_back({p.x, p.y});
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << "m=" << spec.m() << " a=" << spec.a() << " v=" << v.size()
            << " method=" << to_string(r.method) << " candidates=" << r.candidate_count << '\n';
  write_points(std::cout, v);
  return 0;
}

int run_sweep_cmd(const SweepArgs& args) {
  PruneConfig cfg;
  cfg.cutoff_factor = args.cutoff_factor;
  const APolicy policy = APolicy::parse(args.a_policy, args.seed);
  std::unique_ptr<SweepCache> cache;
  if (!args.no_cache) cache = std::make_unique<SweepCache>(SweepCache::default_dir());
  SweepOptions opts;
  opts.workers = args.workers;
  opts.record_timing = args.record_timing;
  opts.cache = cache.get();
  const auto records = run_sweep(args.m_min, args.m_max, policy, cfg, opts);

  if (args.out == "-") {
    write_csv(std::cout, records);
  } else {
    std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + args.out + " for writing");
    write_csv(out, records);
    out.close();
    if (!out) throw Error("error writing " + args.out);
    std::cout << "wrote " << records.size() << " records to " << args.out << '\n';
    std::cout << exponent_summary(records).to_text();
  }
  if (!args.summary_json.empty()) {
    std::ofstream js(args.summary_json);
    js << exponent_summary(records).to_json().dump(2) << '\n';
    if (!js) throw Error("error writing " + args.summary_json);
  }
  return 0;
}

int run_verify(const VerifyArgs& args) {
  PruneConfig cfg;
  cfg.cutoff_factor = args.cutoff_factor;
  const APolicy policy = APolicy::parse(args.a_policy, args.seed);
  if (args.m_min < 2 || args.m_max < args.m_min) {
    throw InvalidArgument("verify range must satisfy 2 <= m-min <= m-max");
  }
  std::vector<HyperbolaSpec> tasks;
  for (i64 m = args.m_min; m <= args.m_max; ++m) {
    for (i64 a : select_residues(m, policy)) tasks.emplace_back(m, a);
  }
  std::vector<VerificationReport> mismatches;
  std::mutex mu;
  parallel_for(tasks.size(), args.workers, [&](std::size_t i) {
    auto report = verify_against_naive(tasks[i], cfg);
    if (!report.equal) {
      std::lock_guard lock(mu);
      mismatches.push_back(std::move(report));
    }
  });
  std::sort(mismatches.begin(), mismatches.end(), [](const auto& x, const auto& y) {
    return std::pair(x.spec.m(), x.spec.a()) < std::pair(y.spec.m(), y.spec.a());
  });
  std::cout << "checked " << tasks.size() << " hulls, " << mismatches.size() << " mismatches\n";
  for (const auto& r : mismatches) {
    std::cout << "mismatch m=" << r.spec.m() << " a=" << r.spec.a()
              << " naive_v=" << r.naive_vertices.size() << " fast_v=" << r.fast_vertices.size()
              << " cutoff=" << r.cutoff << " max_corner_product=" << r.max_corner_product << '\n'
              << "  missing: " << join_points(r.missing) << '\n'
              << "  extra: " << join_points(r.extra) << '\n';
  }
  return mismatches.empty() ? 0 : 1;
}

int run_count(const CountArgs& args) {
  const HyperbolaSpec spec(args.m, args.a);
  const i64 count = count_in_box(spec, args.U, args.V);
  const Rational main = predicted_count(spec, args.U, args.V);
  const Rational diff = make_rational(static_cast<i128>(count) * main.den - main.num, main.den);
  char buf[64];
  std::cout << "count=" << count << '\n';
  std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(main.to_long_double()));
  std::cout << "main_term=" << main.to_string() << " (" << buf << ")\n";
  std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(diff.to_long_double()));
  std::cout << "difference=" << diff.to_string() << " (" << buf << ")\n";
  return 0;
}

int run_census(const CensusArgs& args) {
  PruneConfig cfg;
  cfg.cutoff_factor = args.cutoff_factor;
  const auto r = lower_bound_census(args.m_min, args.m_max, cfg, args.workers);
  std::cout << "checked=" << r.checked << " violations=" << r.violations.size()
            << " equality=" << r.equality_count << '\n';
  for (const auto& v : r.violations) {
    std::cout << "violation m=" << v.m << " v=" << v.v << " bound=" << v.bound << '\n';
  }
  std::cout << "equality_moduli:";
  for (i64 m : r.equality_moduli) std::cout << ' ' << m;
  std::cout << '\n';
  return r.violations.empty() ? 0 : 1;
}

MonomialSet parse_monomials(const std::string& text) {
  if (text.empty()) return MonomialSet::conic();
  std::vector<std::pair<int, int>> exps;
  std::istringstream in(text);
  std::string item;
  while (in >> item) {
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw ParseError("monomial \"" + item + "\" is not h,k");
    try {
      std::size_t used = 0;
      const int h = std::stoi(item.substr(0, comma), &used);
      if (used != comma) throw ParseError("bad monomial \"" + item + "\"");
      const std::string rest = item.substr(comma + 1);
      const int k = std::stoi(rest, &used);
      if (used != rest.size()) throw ParseError("bad monomial \"" + item + "\"");
      exps.emplace_back(h, k);
    } catch (const std::logic_error&) {
      throw ParseError("bad monomial \"" + item + "\"");
    }
  }
  return MonomialSet(std::move(exps));
}

int run_conic_fit(const ConicArgs& args) {
  std::ifstream in(args.points, std::ios::binary);
  if (!in) throw Error("cannot open " + args.points);
  const PointSet pts = read_points(in);
  const MonomialSet monos = parse_monomials(args.monomials);
  const auto form = find_vanishing_form(pts, monos);
  std::cout << "points=" << pts.size() << " rank=" << evaluation_rank(pts, monos) << '\n';
  if (!form) {
    std::cout << "none\n";
    return 0;
  }
  for (std::size_t i = 0; i < form->size(); ++i) std::cout << (i ? " " : "") << (*form)[i];
  std::cout << '\n';
  return 0;
}

int run_conic_count(const ConicArgs& args) {
  if (args.coeffs.size() != 6) throw InvalidArgument("--coeffs takes exactly six integers");
  std::array<i64, 6> c{};
  std::copy(args.coeffs.begin(), args.coeffs.end(), c.begin());
  const ConicForm g = ConicForm::primitive(c);
  const ConicClass cls = classify_conic(g);
  const ConicCount r = count_conic_points_in_box(g, args.H);
  std::cout << "count=" << r.count << " discriminant=" << to_string(cls.discriminant)
            << " degenerate=" << (cls.degenerate ? 1 : 0)
            << " parabola_like=" << (cls.parabola_like ? 1 : 0) << '\n';
  write_points(std::cout, r.solutions);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex hulls of modular hyperbolas"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kLibraryVersion));

  HullArgs hull;
  auto* hull_cmd = app.add_subcommand("hull", "vertex count and vertices of the hull of H_a(m)");
  hull_cmd->add_option("--m", hull.m, "modulus")->required();
  hull_cmd->add_option("--a", hull.a, "residue coprime to m");
  hull_cmd->add_option("--method", hull.method, "naive, fast or auto")
      ->check(CLI::IsMember({"naive", "fast", "auto"}));
  hull_cmd->add_option("--cutoff-factor", hull.cutoff_factor, "candidate bound factor");
  hull_cmd->add_flag("--json", hull.json, "machine-readable output");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "v_a(m) over a range of moduli, as CSV");
  sweep_cmd->add_option("--m-min", sweep.m_min)->required();
  sweep_cmd->add_option("--m-max", sweep.m_max)->required();
  sweep_cmd->add_option("--a-policy", sweep.a_policy, "one, all or sample:K");
  sweep_cmd->add_option("--seed", sweep.seed, "seed for sample:K");
  sweep_cmd->add_option("--out", sweep.out, "CSV output file, - for stdout");
  sweep_cmd->add_option("--workers", sweep.workers)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--cutoff-factor", sweep.cutoff_factor);
  sweep_cmd->add_flag("--no-cache", sweep.no_cache, "ignore $MHULL_CACHE_DIR");
  sweep_cmd->add_flag("--record-timing", sweep.record_timing,
                      "fill elapsed_ns (output is then not reproducible)");
  sweep_cmd->add_option("--summary-json", sweep.summary_json, "write the exponent summary here");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "compare fast and naive hulls");
  verify_cmd->add_option("--m-min", verify.m_min)->required();
  verify_cmd->add_option("--m-max", verify.m_max)->required();
  verify_cmd->add_option("--a-policy", verify.a_policy);
  verify_cmd->add_option("--seed", verify.seed);
  verify_cmd->add_option("--workers", verify.workers)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--cutoff-factor", verify.cutoff_factor);

  CountArgs count;
  auto* count_cmd = app.add_subcommand("count", "points of H_a(m) in [1,U]x[1,V]");
  count_cmd->add_option("--m", count.m)->required();
  count_cmd->add_option("--a", count.a);
  count_cmd->add_option("--U", count.U)->required();
  count_cmd->add_option("--V", count.V)->required();

  CensusArgs census;
  auto* census_cmd = app.add_subcommand("census", "check v_1(m) >= 2(tau(m-1)-1)");
  census_cmd->add_option("--m-min", census.m_min);
  census_cmd->add_option("--m-max", census.m_max)->required();
  census_cmd->add_option("--workers", census.workers)->check(CLI::PositiveNumber);
  census_cmd->add_option("--cutoff-factor", census.cutoff_factor);

  ConicArgs conic;
  auto* conic_cmd = app.add_subcommand("conic", "conic fitting and counting");
  conic_cmd->require_subcommand(1);
  auto* fit_cmd = conic_cmd->add_subcommand("fit", "integer form vanishing on a point list");
  fit_cmd->add_option("--points", conic.points, "point list file")->required();
  fit_cmd->add_option("--monomials", conic.monomials,
                      "space-separated h,k pairs (default: the six conic monomials)");
  auto* ccount_cmd = conic_cmd->add_subcommand("count", "integral points in [0,H]^2");
  ccount_cmd->add_option("--coeffs", conic.coeffs, "A B C D E F")->required()->expected(6);
  ccount_cmd->add_option("--H", conic.H)->required()->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*hull_cmd) return run_hull(hull);
    if (*sweep_cmd) return run_sweep_cmd(sweep);
    if (*verify_cmd) return run_verify(verify);
    if (*count_cmd) return run_count(count);
    if (*census_cmd) return run_census(census);
    if (*fit_cmd) return run_conic_fit(conic);
    if (*ccount_cmd) return run_conic_count(conic);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
