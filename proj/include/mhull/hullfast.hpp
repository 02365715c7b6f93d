#pragma once

// Sublinear hull construction. A hull vertex lying in one of the four
// quadrant squares of [0, m]^2 has a small "corner product" (x*y measured
// from the nearest corner), and every point with corner product N
// satisfies N = a + m*l for the matching residue. Enumerating divisor
// pairs of those N up to a cutoff yields a candidate set that contains all
// hull vertices once the cutoff is large enough.

#include <cstddef>
#include <string>
#include <string_view>

#include "mhull/geometry.hpp"
#include "mhull/hyperbola.hpp"

namespace mhull {

enum class HullMethod { Naive, Fast, Auto };

std::string_view to_string(HullMethod method);
HullMethod parse_hull_method(std::string_view text);

struct PruneConfig {
  // Candidate bound is cutoff_factor * m^{3/2} * (1 + ln m)^2.
  double cutoff_factor = 0.25;
  // Auto uses full enumeration for m below this.
  i64 naive_threshold = 1000;
  HullMethod method = HullMethod::Auto;

  void validate() const;
};

// floor(cutoff_factor * m^{3/2} * (1 + ln m)^2), at least 1, saturated at
// floor(m^2/4): every point has corner product at most m^2/4, so a larger
// cutoff cannot add candidates.
i64 candidate_cutoff(i64 m, const PruneConfig& cfg);

// Method that compute_hull() will actually run for modulus m.
HullMethod resolve_method(i64 m, const PruneConfig& cfg);

// Every (x, y) in H_a(m) with x*y <= cutoff (cutoff < 1 is raised to 1),
// sorted. Found by factoring a + m*l and splitting into divisor pairs.
PointSet lower_left_candidates(const HyperbolaSpec& spec, i64 cutoff);

struct HullResult {
  ConvexPolygon hull;
  HullMethod method = HullMethod::Naive;  // Naive or Fast, never Auto
  std::size_t candidate_count = 0;
  i64 cutoff = 0;  // 0 for the naive path
};

HullResult compute_hull(const HyperbolaSpec& spec, const PruneConfig& cfg);

// Runs the pruned construction regardless of cfg.method. Each quadrant's
// bound is raised to at least its residue, so (1, a) and (1, m - a) are
// always candidates.
HullResult fast_hull_detailed(const HyperbolaSpec& spec, const PruneConfig& cfg);

// Hull by cfg.method (Auto falls back to enumeration below the threshold).
ConvexPolygon fast_hull(const HyperbolaSpec& spec, const PruneConfig& cfg);

ConvexPolygon naive_hull(const HyperbolaSpec& spec);

struct VerificationReport {
  HyperbolaSpec spec;
  PointSet naive_vertices;
  PointSet fast_vertices;
  bool equal = false;
  std::size_t candidate_count = 0;
  i64 cutoff = 0;
  // Largest x*y over naive hull vertices with x, y <= m/2 (0 if none).
  i64 max_lower_left_product = 0;
  // Largest corner product over all naive hull vertices, each measured from
  // its own quadrant; fast == naive is guaranteed when this is <= cutoff.
  i64 max_corner_product = 0;
  PointSet missing;  // naive vertices absent from the fast hull
  PointSet extra;    // fast vertices absent from the naive hull
};

// Compares the pruned construction (always run, whatever cfg.method says)
// with the hull of the full enumeration.
VerificationReport verify_against_naive(const HyperbolaSpec& spec, const PruneConfig& cfg);

// Smallest of x*y, (m-x)*(m-y), x*(m-y), (m-x)*y.
i64 corner_product(LatticePoint p, i64 m);

}  // namespace mhull
