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

#include "microsynth/dppipeline.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "microsynth/anonymizer.h"
#include "microsynth/status_macros.h"

namespace microsynth {

absl::StatusOr<DpParams> DpParams::Derive(int n, int p, double epsilon,
                                          double kappa, int m,
                                          std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon=", epsilon, " outside (0, 1)"));
  }
  if (!(kappa > 0.0 && kappa < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("kappa=", kappa, " outside (0, 1)"));
  }
  if (n < 1 || p < 1) return absl::InvalidArgumentError("empty dataset");
  if (m < 1) return absl::InvalidArgumentError("m must be positive");
  DpParams d;
  d.n = n;
  d.p = p;
  d.epsilon = epsilon;
  d.kappa = kappa;
  d.m = m;
  d.seed = seed;
  const double log_n = std::log(static_cast<double>(n));
  if (log_n > 0.0) {
    d.alpha = std::pow(log_n, -0.25);
    if (d.alpha < 7.0) {
      d.t_formula = static_cast<int>(
          std::floor(kappa * log_n / std::log(7.0 / d.alpha)));
    }
  } else {
    d.alpha = 0.99;
  }
  d.t = std::clamp(d.t_formula, 0, p);
  d.b = std::sqrt(p * std::pow(static_cast<double>(n), 1.0 - kappa) / epsilon);
  d.weight_noise_scale = 6.0 / (n * epsilon);
  d.vector_noise_scale = 12.0 * std::sqrt(static_cast<double>(p)) /
                         (d.b * epsilon);
  return d;
}

absl::StatusOr<WeightedAtoms> DampedMicroaggregate(const Matrix& data,
                                                   const Partition& partition,
                                                   double b) {
  if (!(b > 0.0)) return absl::InvalidArgumentError("damping b must be > 0");
  const int n = static_cast<int>(data.rows());
  if (absl::Status s = partition.Validate(n); !s.ok()) return s;
  const int s = partition.num_blocks();
  WeightedAtoms out;
  out.weights = Vector::Zero(s);
  out.points = Matrix::Zero(s, data.cols());
  for (int j = 0; j < s; ++j) {
    const auto& block = partition.blocks[j];
    if (block.empty()) continue;
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(data.cols());
    for (int i : block) sum += data.row(i);
    const double size = static_cast<double>(block.size());
    out.weights(j) = size / n;
    out.points.row(j) = sum / std::max(size, b);
  }
  return out;
}

absl::StatusOr<NoisyAtoms> NoiseAndProject(const WeightedAtoms& damped,
                                           double weight_scale,
                                           double vector_scale,
                                           const ConvexBody& body,
                                           RandomStream& rng) {
  const Eigen::Index s = damped.points.rows();
  const Eigen::Index p = damped.points.cols();
  if (damped.weights.size() != s) {
    return absl::InvalidArgumentError("weights and atoms disagree in count");
  }
  if (weight_scale < 0.0 || vector_scale < 0.0) {
    return absl::InvalidArgumentError("noise scales must be nonnegative");
  }
  NoisyAtoms out;
  out.rho = Vector::Zero(s);
  out.r = Matrix::Zero(s, p);
  RandomStream weight_rng = rng.Derive("weight_noise");
  RandomStream vector_rng = rng.Derive("vector_noise");
  if (weight_scale > 0.0) {
    ASSIGN_OR_RETURN(out.rho, LaplaceVector(weight_scale, s, weight_rng));
  }
  if (vector_scale > 0.0) {
    for (Eigen::Index j = 0; j < s; ++j) {
      ASSIGN_OR_RETURN(const Vector r,
                       LaplaceVector(vector_scale, p, vector_rng));
      out.r.row(j) = r.transpose();
    }
  }
  out.atoms.weights = ProjectSimplexL1(damped.weights + out.rho);
  out.atoms.points.resize(s, p);
  for (Eigen::Index j = 0; j < s; ++j) {
    const Vector noisy = (damped.points.row(j) + out.r.row(j)).transpose();
    out.atoms.points.row(j) = body.project(noisy).transpose();
  }
  return out;
}

absl::StatusOr<Algorithm2Run> RunAlgorithm2(const Matrix& boolean_data,
                                            double epsilon, double kappa,
                                            int m, std::uint64_t seed,
                                            std::span<const int> degrees,
                                            std::uint64_t max_tuples) {
  if (!IsBoolean(boolean_data)) {
    return absl::InvalidArgumentError("input must be Boolean");
  }
  const int n = static_cast<int>(boolean_data.rows());
  const int p = static_cast<int>(boolean_data.cols());
  Algorithm2Run run;
  ASSIGN_OR_RETURN(run.params,
                   DpParams::Derive(n, p, epsilon, kappa, m, seed));
  const DpParams& params = run.params;
  const double root_p = std::sqrt(static_cast<double>(p));
  run.scaled = boolean_data / root_p;
  run.second_moment = SecondMoment(run.scaled);
  run.ledger = {{"projection", epsilon / 3.0},
                {"weights", epsilon / 3.0},
                {"vectors", epsilon / 3.0}};

  if (params.t == 0) {
    run.zero_projection_fallback = true;
    run.projection = SpectralProjection::Zero(p);
    run.covering = LatticeCovering::Trivial(p);
  } else {
    RandomStream projection_rng(seed, "projection");
    const Matrix a =
        (n * epsilon / (6.0 * params.t)) * run.second_moment;
    ASSIGN_OR_RETURN(const PrivateProjection proj,
                     PrivateProj(a, params.t, projection_rng));
    run.projection.basis = proj.basis;
    ASSIGN_OR_RETURN(run.covering,
                     BuildLatticeCovering(run.projection, params.alpha));
  }
  const double size_cap = std::pow(static_cast<double>(n), kappa);
  if (run.covering.size() > size_cap * (1.0 + 1e-12)) {
    return absl::InternalError(absl::StrCat("covering size ",
                                            run.covering.size(),
                                            " exceeds n^kappa = ", size_cap));
  }
  ASSIGN_OR_RETURN(run.partition,
                   NearestPointPartition(run.scaled, run.covering));
  ASSIGN_OR_RETURN(run.damped,
                   DampedMicroaggregate(run.scaled, run.partition, params.b));
  RandomStream noise_rng(seed, "noise");
  ASSIGN_OR_RETURN(
      run.noisy,
      NoiseAndProject(run.damped, params.weight_noise_scale,
                      params.vector_noise_scale, ConvexBody::Box(1.0 / root_p),
                      noise_rng));

  RandomStream bootstrap_rng(seed, "bootstrap");
  ASSIGN_OR_RETURN(Matrix sampled,
                   Bootstrap(run.noisy.atoms, m, bootstrap_rng));
  sampled *= root_p;
  RandomStream rounding_rng(seed, "rounding");
  ASSIGN_OR_RETURN(run.synth.rows, RandomizedRound(sampled, rounding_rng));
  run.synth.domain = Domain::kBooleanCube;
  run.synth.seed = seed;
  run.synth.provenance = {{"epsilon", epsilon},
                          {"kappa", kappa},
                          {"m", m},
                          {"alpha", params.alpha},
                          {"t", params.t},
                          {"b", params.b},
                          {"s", run.covering.size()}};

  std::vector<int> usable;
  for (int d : degrees) {
    if (d >= 1 && d <= p) usable.push_back(d);
  }
  ASSIGN_OR_RETURN(run.report, ComputeReport(boolean_data, run.synth.rows,
                                             usable, max_tuples, seed));
  return run;
}

}  // namespace microsynth
