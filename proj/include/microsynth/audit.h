// Copyright 2026 The Microsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MICROSYNTH_AUDIT_H_
#define MICROSYNTH_AUDIT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "microsynth/anonymizer.h"
#include "microsynth/dataset.h"
#include "microsynth/dppipeline.h"
#include "microsynth/partition.h"
#include "microsynth/rng.h"

namespace microsynth {

struct OracleConfig {
  int max_n = 6;
  int max_p = 3;
  int max_d = 4;
  double gamma = 0.1;
  double beta = 0.3;
  long trials = 100'000;
  double significance = 0.01;
};

// X is uniform over the rows of `atoms`; Y = E[X | partition].
struct CovarianceLoss {
  double loss = 0.0;        // ||Sigma_X - Sigma_Y||_F
  Matrix difference;        // Sigma_X - Sigma_Y
  Matrix residual_moment;   // E (X - Y)(X - Y)^T
  double identity_gap = 0.0;  // max entry of |difference - residual_moment|
};

absl::StatusOr<CovarianceLoss> BruteCovarianceLoss(const Matrix& atoms,
                                                   const Partition& partition,
                                                   int max_n = 4096);

// Replaces each row by the mean of its block.
Matrix ConditionalExpectation(const Matrix& atoms, const Partition& partition);

// Fixed geometry for the sensitivity enumeration: a projection, its covering
// and a damping level. The partition is recomputed for every dataset.
struct SensitivityGeometry {
  std::string name;
  LatticeCovering covering;
  double b = 1.0;
};

struct SensitivityStats {
  double max_weight_l1 = 0.0;        // bound 2/n
  double max_vector_l1 = 0.0;        // bound 4 sqrt(p)/b
  double max_block_ratio = 0.0;      // change / ((2/b) max ||x||_1), <= 1
  double max_in_place_ratio = 0.0;   // change / (||x - x'||_1 / b), <= 1
  double weight_ratio = 0.0;         // max_weight_l1 / (2/n)
  double vector_ratio = 0.0;         // max_vector_l1 / (4 sqrt(p)/b)
  long pairs = 0;
  bool bounds_hold = true;
};

// Every Boolean dataset with n rows and p columns (scaled by 1/sqrt(p))
// paired with every neighbor obtained by replacing one row.
absl::StatusOr<SensitivityStats> EnumerateSensitivity(
    int n, int p, const SensitivityGeometry& geometry);

struct SecondMomentSensitivity {
  double max_spectral = 0.0;  // max ||S - S'||, bound 2/n
  double ratio = 0.0;         // max_spectral / (2/n)
  long pairs = 0;
};

// Same enumeration for the second moment matrix, which does not depend on
// the geometry. Requires p <= 3.
absl::StatusOr<SecondMomentSensitivity> EnumerateSecondMomentSensitivity(
    int n, int p);

// The standard battery of geometries for dimension p: t = 0, t = 1 along
// e_1 and along the all-ones direction at alpha in {0.5, 0.99}, each with
// damping levels b in {1, 1.5, 2.5, 4}.
std::vector<SensitivityGeometry> StandardGeometries(int p);

struct DpProbeConfig {
  double epsilon = 1.0;
  double significance = 0.01;
  long min_count = 50;  // bins with fewer hits on either side are excluded
};

struct DpProbeResult {
  // max over bins and both directions of the lower confidence bound on
  // log(p1 / p2); PASS when it does not exceed epsilon.
  double statistic = 0.0;
  double max_point_log_ratio = 0.0;
  int bins_used = 0;
  int bins_excluded = 0;
  double z = 0.0;
  bool pass = false;
};

// Histogram test on pre-binned outputs of a mechanism on two neighboring
// inputs. Wilson intervals with a Bonferroni-corrected z over all bins.
DpProbeResult EmpiricalDpProbeBinned(std::span<const int> bins1,
                                     std::span<const int> bins2, int num_bins,
                                     const DpProbeConfig& config);

// Real outputs binned on [lo, hi) with `bins` equal cells plus two tails.
DpProbeResult EmpiricalDpProbe(std::span<const double> out1,
                               std::span<const double> out2, double lo,
                               double hi, int bins,
                               const DpProbeConfig& config);

struct GofResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
  double mass_near_e1 = 0.0;  // fraction within 0.2 rad of +e_1 or -e_1
};

// Angular chi-square test of PVEC on a 2x2 PSD matrix against the density
// exp(v^T A v) normalized by adaptive quadrature on the circle.
absl::StatusOr<GofResult> BinghamGof(const Matrix& a, long trials,
                                     RandomStream& rng, int bins = 64);

// Exact probability that the angle of a Bingham draw lies in [lo, hi).
absl::StatusOr<double> BinghamAngleMass(const Matrix& a, double lo, double hi);

// Joint output of PROJ(., 2) on 2x2 inputs: the angle of v_1 in `bins`
// cells, times the orientation of (v_1, v_2).
absl::StatusOr<std::vector<int>> ProjJointBins(const Matrix& a, long trials,
                                               int bins, RandomStream& rng);

// 2k Boolean points with pairwise distance > sqrt(p)/2, scaled by
// 1/sqrt(p). Requires p > 16 ln(2k).
absl::StatusOr<Matrix> OptimalityFixture(int p, int k, RandomStream& rng,
                                         int max_attempts = 100'000);

struct PartitionSearch {
  double min_loss = 0.0;
  long partitions = 0;
};

// Minimum covariance loss over all partitions of the rows into at most
// `max_blocks` nonempty blocks (restricted growth strings).
absl::StatusOr<PartitionSearch> MinCovarianceLossOverPartitions(
    const Matrix& atoms, int max_blocks);

struct TensorizationResult {
  double second = 0.0;  // ||E X^2 - E Y^2||
  double third = 0.0;
  double fourth = 0.0;
  bool holds = false;  // third <= 8 second and fourth <= 44 second
};

absl::StatusOr<TensorizationResult> TensorizationCheck(
    const Matrix& atoms, const Partition& partition);

struct DecompositionTerms {
  int degree = 0;
  double lhs = 0.0;
  double covering_term = 0.0;  // 4^d (4 alpha^2 + ||(I-P)S(I-P)||_F)
  double damping_term = 0.0;   // 2 d s b / n
  double weight_term = 0.0;    // 2 ||rho||_1
  double vector_term = 0.0;    // 2 d sum_j w_j ||r_j||_2
  double rhs = 0.0;
  bool holds = false;
};

// Realized error of the noisy atoms against the scaled input, and the
// realized bound computed from the recorded alpha, P, s, b, rho and r_j.
absl::StatusOr<DecompositionTerms> AccuracyDecomposition(
    const Algorithm2Run& run, int d);

// Covariance loss against the projected decomposition bound
// E||PX - PY||^2 + ||(I-P) E XX^T (I-P)||_F.
struct CovarianceDecomposition {
  double loss = 0.0;
  double bound = 0.0;
};
absl::StatusOr<CovarianceDecomposition> DecomposeCovarianceLoss(
    const Matrix& atoms, const Partition& partition, const Matrix& projector);

// Input-sized audit reports for the command line.
nlohmann::json AuditAlgorithm1(const Matrix& boolean_data,
                               const Algorithm1Run& run);
nlohmann::json AuditAlgorithm2(const Algorithm2Run& run);

}  // namespace microsynth

#endif  // MICROSYNTH_AUDIT_H_
