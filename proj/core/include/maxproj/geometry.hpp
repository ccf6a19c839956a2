#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maxproj/etf.hpp"
#include "maxproj/lp.hpp"
#include "maxproj/soc.hpp"

namespace maxproj {

/// The dual unit ball absconv{ phases * f_j } of the norm
/// ||x|| = max_j |<x, f_j>|. Functionals must span K^n.
struct DualBallSpec {
  Field field = Field::Real;
  int n = 0;
  std::vector<KVector> functionals;

  void validate() const;  // throws RankDeficient if the functionals do not span
};

/// scale * Z(g_1..g_N), the Minkowski sum of the segments/disks absconv{g_i}.
struct ZonotopeSpec {
  std::vector<KVector> generators;
  double scale = 1.0;
};

struct Certificate {
  enum class Kind { Membership, Separation };
  Kind kind = Kind::Membership;
  std::vector<cplx> coefficients;  // membership: one per generator
  KVector separator;               // separation: y with Re<x,y> > support(y)
  double residual = 0.0;           // reconstruction error resp. verified margin
};

/// Decides x in absconv{gens}. Real inputs use an exact gauge LP; complex ones
/// use SOC feasibility with a phase-discretized LP refutation, margins always
/// re-verified against exact moduli. Throws Undetermined when neither side
/// can be certified.
Certificate absconv_contains(const std::vector<KVector>& gens, const KVector& x,
                             const ToleranceConfig& tol = {});

Certificate zonotope_contains(const ZonotopeSpec& z, const KVector& x, const ToleranceConfig& tol = {});

/// The gauge LP deciding real absconv membership (min sum p+q subject to
/// reconstruction); exposed for the CLI's program dump.
LinearProgram absconv_membership_lp(const std::vector<KVector>& gens, const KVector& x);
/// The min-max-coefficient LP deciding real zonotope membership.
LinearProgram zonotope_membership_lp(const ZonotopeSpec& z, const KVector& x);

/// Support function of absconv{gens} at y: max_j |<g_j, y>|.
double absconv_support(const std::vector<KVector>& gens, const KVector& y);
/// Support function of scale * Z(gens) at y: scale * sum_j |<g_j, y>|.
double zonotope_support(const ZonotopeSpec& z, const KVector& y);

struct InclusionReport {
  bool all_contained = false;
  double max_residual = 0.0;
};

/// Checks absconv{w_i} within (n/(d delta)) Z(w_i) via the constructive sign
/// certificates.
InclusionReport inclusion_check(const MaximalETF& etf, const ToleranceConfig& tol = {});

/// Searches for x with C sum_i |<x,w_i>| > max_i |<x,w_i>| + lp_tol, i.e. a
/// witness that the inclusion above is strict. Returns nothing for (R,2),
/// where the two bodies coincide.
std::optional<KVector> strictness_witness(const MaximalETF& etf, const ToleranceConfig& tol = {});

struct SandwichReport {
  bool is_extremal_for_T = false;
  std::optional<std::string> failing_item;
};

/// Tests absconv{w} subset T(B_X*) subset (n/(d delta)) Z(w) by membership
/// queries on each item.
SandwichReport sandwich_test(const DualBallSpec& ball, const MaximalETF& etf, const KMatrix& T,
                             const ToleranceConfig& tol = {});

/// Recursively grows dual balls strictly between absconv{w} and the open
/// rescaled zonotope; consecutive members gain one functional each and all
/// pass sandwich_test with T = I.
std::vector<DualBallSpec> extremal_family(const MaximalETF& etf, int count, std::uint64_t seed,
                                          const ToleranceConfig& tol = {});

}  // namespace maxproj
