#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cartan {

/// {x in R^k : normals.row(i) . x <= offsets(i)}.
struct HPolytope {
  int dimension = 0;
  Eigen::MatrixXd normals;
  Eigen::VectorXd offsets;
};

enum class VolumeMethod { Exact, MonteCarlo };

struct VolumeEstimate {
  double value = 0.0;
  VolumeMethod method = VolumeMethod::Exact;
  double half_width = 0.0;  // 99% confidence half-width, 0 for exact values
  std::uint64_t samples = 0;
};

std::string to_string(VolumeMethod m);

/// {t : 1/2 sum_j |xi_j . t| <= r} as the 2^n half-spaces sum_j s_j xi_j . t <= 2r.
/// Functionals are the rows of `xi`. Raises SpanDeficient.
HPolytope hrep_abs_sum(const Eigen::MatrixXd& xi, double r);

/// All vertices (dimension <= 5), deduplicated within 1e-9.
/// Raises Unbounded or DimensionTooLarge.
std::vector<Eigen::VectorXd> vertex_enumeration(const HPolytope& p);

/// Vertices of {t : 1/2 sum |xi_j . t| <= r}: the ball meets each line cut out by
/// k-1 independent functionals at +-d r / h(d).
std::vector<Eigen::VectorXd> abs_sum_vertices(const Eigen::MatrixXd& xi, double r);

/// Exact volume from vertices; facets come from the supplied H-rep when given,
/// otherwise from a brute-force hull of the vertices. Raises DegenerateFacet.
VolumeEstimate polytope_volume(const std::vector<Eigen::VectorXd>& vertices, int dimension,
                               const HPolytope* hrep = nullptr);

/// Uniform sampling in the box [lo, hi]. The samples are split into fixed
/// partitions with derived seeds, so the estimate does not depend on threading.
VolumeEstimate mc_volume(const std::function<bool(const Eigen::VectorXd&)>& inside, const Eigen::VectorXd& lo,
                         const Eigen::VectorXd& hi, std::uint64_t samples, std::uint64_t seed);

/// Coordinate bounding box of a bounded H-polytope whose offsets are nonnegative.
std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box(const HPolytope& p);

/// Volume of [-1,1]^m intersected with {|a.x| <= 1}.
double box_slab_volume(const std::vector<double>& a);

/// sqrt(n) C(2n-2, n-1) / (n-1)!
double l1_slice_volume(int n);

double binomial(int n, int k);
double factorial(int n);

}  // namespace cartan
