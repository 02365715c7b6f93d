#include "mhull/hullfast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mhull/errors.hpp"

namespace mhull {

std::string_view to_string(HullMethod method) {
  switch (method) {
    case HullMethod::Naive:
      return "naive";
    case HullMethod::Fast:
      return "fast";
    case HullMethod::Auto:
      return "auto";
  }
  return "auto";
}

HullMethod parse_hull_method(std::string_view text) {
  if (text == "naive") return HullMethod::Naive;
  if (text == "fast") return HullMethod::Fast;
  if (text == "auto") return HullMethod::Auto;
  throw InvalidArgument("unknown hull method \"" + std::string(text) + "\"");
}

void PruneConfig::validate() const {
  if (!(cutoff_factor > 0.0) || !std::isfinite(cutoff_factor)) {
    throw InvalidArgument("cutoff_factor must be a positive finite number");
  }
  if (naive_threshold < 2) throw InvalidArgument("naive_threshold must be >= 2");
}

i64 candidate_cutoff(i64 m, const PruneConfig& cfg) {
  cfg.validate();
  const auto mm = static_cast<long double>(m);
  const long double log_factor = 1.0L + std::log(mm);
  const long double raw = static_cast<long double>(cfg.cutoff_factor) * mm * std::sqrt(mm) *
                          log_factor * log_factor;
  // Every point of H_a(m) has corner product <= m^2/4 in its own quadrant.
  const i64 ceiling = m * m / 4;
  if (raw >= static_cast<long double>(ceiling)) return std::max<i64>(ceiling, 1);
  return std::max<i64>(static_cast<i64>(std::floor(raw)), 1);
}

HullMethod resolve_method(i64 m, const PruneConfig& cfg) {
  if (cfg.method != HullMethod::Auto) return cfg.method;
  return m < cfg.naive_threshold ? HullMethod::Naive : HullMethod::Fast;
}

PointSet lower_left_candidates(const HyperbolaSpec& spec, i64 cutoff) {
  const i64 m = spec.m();
  const i64 a = spec.a();
  const i64 limit = std::min(std::max<i64>(cutoff, 1), (m - 1) * (m - 1));
  PointSet out;
  if (limit < a) return out;
  const i64 terms = (limit - a) / m + 1;
  std::vector<i64> divs;
  for_each_progression_factorization(a, m, terms, [&](i64 l, const Factorization& f) {
    const i64 n = a + m * l;
    // Both coordinates must land in [1, m-1].
    const i64 lo = (n + (m - 2)) / (m - 1);
    const i64 hi = std::min(m - 1, n);
    divs.assign(1, 1);
    for (const auto& [p, e] : f.factors) {
      const std::size_t base = divs.size();
      i64 pk = 1;
      for (int k = 1; k <= e; ++k) {
        pk *= p;
        if (pk > hi) break;
        for (std::size_t i = 0; i < base; ++i) {
          if (divs[i] <= hi / pk) divs.push_back(divs[i] * pk);
        }
      }
    }
    for (i64 d : divs) {
      if (d >= lo) out.push_back({d, n / d});
    }
  });
  std::sort(out.begin(), out.end());
  return out;
}

ConvexPolygon naive_hull(const HyperbolaSpec& spec) { return convex_hull(enumerate_points(spec)); }

HullResult fast_hull_detailed(const HyperbolaSpec& spec, const PruneConfig& cfg) {
  const i64 m = spec.m();
  const i64 cutoff = candidate_cutoff(m, cfg);
  // The smallest product in each residue class is the residue itself
  // (x = 1), so never go below it: the candidate set stays nonempty.
  const PointSet direct = lower_left_candidates(spec, std::max(cutoff, spec.a()));
  const HyperbolaSpec mirrored(m, spec.mirrored_residue());
  const PointSet reflected =
      mirrored == spec ? direct
                       : lower_left_candidates(mirrored, std::max(cutoff, mirrored.a()));

  PointSet all;
  all.reserve(2 * (direct.size() + reflected.size()));
  for (const auto& p : direct) {
    all.push_back(p);
    all.push_back(apply_symmetry(SymmetryKind::Negate, p, m));
  }
  for (const auto& p : reflected) {
    all.push_back(apply_symmetry(SymmetryKind::ReflectY, p, m));
    all.push_back(apply_symmetry(SymmetryKind::ReflectY,
                                 apply_symmetry(SymmetryKind::Negate, p, m), m));
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  HullResult result;
  result.method = HullMethod::Fast;
  result.candidate_count = all.size();
  result.cutoff = cutoff;
  result.hull = convex_hull(all);
  return result;
}

HullResult compute_hull(const HyperbolaSpec& spec, const PruneConfig& cfg) {
  cfg.validate();
  if (resolve_method(spec.m(), cfg) == HullMethod::Fast) return fast_hull_detailed(spec, cfg);
  const PointSet points = enumerate_points(spec);
  HullResult result;
  result.method = HullMethod::Naive;
  result.candidate_count = points.size();
  result.hull = convex_hull(points);
  return result;
}

ConvexPolygon fast_hull(const HyperbolaSpec& spec, const PruneConfig& cfg) {
  return compute_hull(spec, cfg).hull;
}

i64 corner_product(LatticePoint p, i64 m) {
  return std::min({p.x * p.y, (m - p.x) * (m - p.y), p.x * (m - p.y), (m - p.x) * p.y});
}

VerificationReport verify_against_naive(const HyperbolaSpec& spec, const PruneConfig& cfg) {
  const i64 m = spec.m();
  const HullResult fast = fast_hull_detailed(spec, cfg);
  const ConvexPolygon naive = naive_hull(spec);

  VerificationReport report{spec, {}, {}, false, 0, 0, 0, 0, {}, {}};
  report.naive_vertices = naive.vertices();
  report.fast_vertices = fast.hull.vertices();
  report.equal = naive == fast.hull;
  report.candidate_count = fast.candidate_count;
  report.cutoff = fast.cutoff;
  for (const auto& p : naive.vertices()) {
    if (2 * p.x <= m && 2 * p.y <= m) {
      report.max_lower_left_product = std::max(report.max_lower_left_product, p.x * p.y);
    }
    report.max_corner_product = std::max(report.max_corner_product, corner_product(p, m));
  }
  PointSet naive_sorted = report.naive_vertices;
  PointSet fast_sorted = report.fast_vertices;
  std::sort(naive_sorted.begin(), naive_sorted.end());
  std::sort(fast_sorted.begin(), fast_sorted.end());
  std::set_difference(naive_sorted.begin(), naive_sorted.end(), fast_sorted.begin(),
                      fast_sorted.end(), std::back_inserter(report.missing));
  std::set_difference(fast_sorted.begin(), fast_sorted.end(), naive_sorted.begin(),
                      naive_sorted.end(), std::back_inserter(report.extra));
  return report;
}

}  // namespace mhull
