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

#include "microsynth/audit.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "boost/math/distributions/chi_squared.hpp"
#include "boost/math/distributions/normal.hpp"
#include "boost/math/quadrature/gauss_kronrod.hpp"
#include "microsynth/dpmech.h"
#include "microsynth/status_macros.h"
#include "microsynth/summation.h"
#include "microsynth/tensor.h"

namespace microsynth {

Matrix ConditionalExpectation(const Matrix& atoms, const Partition& partition) {
  const Matrix means = BlockMeans(atoms, partition);
  Matrix y(atoms.rows(), atoms.cols());
  for (int b = 0; b < partition.num_blocks(); ++b) {
    for (int i : partition.blocks[b]) y.row(i) = means.row(b);
  }
  return y;
}

absl::StatusOr<CovarianceLoss> BruteCovarianceLoss(const Matrix& atoms,
                                                   const Partition& partition,
                                                   int max_n) {
  const int n = static_cast<int>(atoms.rows());
  if (n > max_n) {
    return absl::ResourceExhaustedError(
        absl::StrCat("n=", n, " exceeds the oracle cap ", max_n));
  }
  RETURN_IF_ERROR(partition.Validate(n));
  const Matrix y = ConditionalExpectation(atoms, partition);
  const double inv_n = 1.0 / n;
  const Eigen::RowVectorXd mean_x = atoms.colwise().mean();
  const Eigen::RowVectorXd mean_y = y.colwise().mean();
  const Matrix cx = atoms.rowwise() - mean_x;
  const Matrix cy = y.rowwise() - mean_y;
  const Matrix sigma_x = inv_n * cx.transpose() * cx;
  const Matrix sigma_y = inv_n * cy.transpose() * cy;
  const Matrix diff = atoms - y;
  CovarianceLoss out;
  out.difference = sigma_x - sigma_y;
  out.residual_moment = inv_n * diff.transpose() * diff;
  out.loss = out.difference.norm();
  out.identity_gap =
      (out.difference - out.residual_moment).cwiseAbs().maxCoeff();
  return out;
}

namespace {

std::vector<Eigen::RowVectorXd> AllBooleanRows(int p) {
  std::vector<Eigen::RowVectorXd> rows(std::size_t{1} << p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  for (std::size_t v = 0; v < rows.size(); ++v) {
    rows[v].resize(p);
    for (int j = 0; j < p; ++j) rows[v](j) = ((v >> j) & 1) ? scale : 0.0;
  }
  return rows;
}

double L1(const Eigen::RowVectorXd& v) { return v.cwiseAbs().sum(); }

Eigen::RowVectorXd Damped(const Eigen::RowVectorXd& sum, int size, double b) {
  if (size == 0) return Eigen::RowVectorXd::Zero(sum.size());
  return sum / std::max(static_cast<double>(size), b);
}

}  // namespace

absl::StatusOr<SensitivityStats> EnumerateSensitivity(
    int n, int p, const SensitivityGeometry& geometry) {
  if (n < 1 || n > 6 || p < 1 || p > 3) {
    return absl::ResourceExhaustedError(
        "sensitivity enumeration is capped at n <= 6, p <= 3");
  }
  const std::vector<Eigen::RowVectorXd> values = AllBooleanRows(p);
  const int num_values = static_cast<int>(values.size());
  // The nearest-point partition is pointwise, so the block of a record
  // depends only on its value; evaluate the library partition once on
  // every possible value and reuse it for every dataset.
  Matrix all(num_values, p);
  for (int v = 0; v < num_values; ++v) all.row(v) = values[v];
  ASSIGN_OR_RETURN(const Partition value_blocks,
                   NearestPointPartition(all, geometry.covering));
  const std::vector<int> block_of = value_blocks.BlockOf(num_values);
  const int s = value_blocks.num_blocks();
  const double b = geometry.b;
  const double root_p = std::sqrt(static_cast<double>(p));

  SensitivityStats stats;
  const std::uint64_t mask = (std::uint64_t{1} << p) - 1;
  const std::uint64_t datasets = std::uint64_t{1} << (n * p);
  std::vector<int> sizes(s);
  std::vector<Eigen::RowVectorXd> sums(s, Eigen::RowVectorXd::Zero(p));
  for (std::uint64_t code = 0; code < datasets; ++code) {
    std::fill(sizes.begin(), sizes.end(), 0);
    for (auto& v : sums) v.setZero();
    double max_l1 = 0.0;
    for (int i = 0; i < n; ++i) {
      const int u = static_cast<int>((code >> (i * p)) & mask);
      ++sizes[block_of[u]];
      sums[block_of[u]] += values[u];
      max_l1 = std::max(max_l1, L1(values[u]));
    }
    for (int i = 0; i < n; ++i) {
      const int u = static_cast<int>((code >> (i * p)) & mask);
      const int a = block_of[u];
      for (int v = 0; v < num_values; ++v) {
        if (v == u) continue;
        const int c = block_of[v];
        const double pair_max_l1 = std::max(max_l1, L1(values[v]));
        // Blocks touched by the replacement, with their new state.
        double weight_l1 = 0.0;
        double vector_l1 = 0.0;
        double worst_block = 0.0;
        const int touched[2] = {a, c};
        for (int k = 0; k < (a == c ? 1 : 2); ++k) {
          const int j = touched[k];
          int new_size = sizes[j];
          Eigen::RowVectorXd new_sum = sums[j];
          if (j == a) {
            --new_size;
            new_sum -= values[u];
          }
          if (j == c) {
            ++new_size;
            new_sum += values[v];
          }
          weight_l1 += std::fabs(static_cast<double>(sizes[j] - new_size)) / n;
          const double change =
              L1(Damped(sums[j], sizes[j], b) - Damped(new_sum, new_size, b));
          vector_l1 += change;
          worst_block = std::max(worst_block, change);
        }
        ++stats.pairs;
        stats.max_weight_l1 = std::max(stats.max_weight_l1, weight_l1);
        stats.max_vector_l1 = std::max(stats.max_vector_l1, vector_l1);
        stats.max_block_ratio = std::max(
            stats.max_block_ratio, worst_block / ((2.0 / b) * pair_max_l1));
        if (a == c) {
          const double moved = L1(values[u] - values[v]);
          stats.max_in_place_ratio =
              std::max(stats.max_in_place_ratio, vector_l1 / (moved / b));
        }
      }
    }
  }
  constexpr double kRounding = 1e-12;
  stats.weight_ratio = stats.max_weight_l1 / (2.0 / n);
  stats.vector_ratio = stats.max_vector_l1 / (4.0 * root_p / b);
  stats.bounds_hold = stats.weight_ratio <= 1.0 + kRounding &&
                      stats.vector_ratio <= 1.0 + kRounding &&
                      stats.max_block_ratio <= 1.0 + kRounding &&
                      stats.max_in_place_ratio <= 1.0 + kRounding;
  return stats;
}

absl::StatusOr<SecondMomentSensitivity> EnumerateSecondMomentSensitivity(
    int n, int p) {
  if (n < 1 || n > 6 || p < 1 || p > 3) {
    return absl::ResourceExhaustedError(
        "sensitivity enumeration is capped at n <= 6, p <= 3");
  }
  const std::vector<Eigen::RowVectorXd> values = AllBooleanRows(p);
  const int num_values = static_cast<int>(values.size());
  const std::uint64_t mask = (std::uint64_t{1} << p) - 1;
  const std::uint64_t datasets = std::uint64_t{1} << (n * p);
  SecondMomentSensitivity out;
  Matrix x(n, p);
  for (std::uint64_t code = 0; code < datasets; ++code) {
    for (int i = 0; i < n; ++i) {
      x.row(i) = values[(code >> (i * p)) & mask];
    }
    const Matrix s = SecondMoment(x);
    for (int i = 0; i < n; ++i) {
      const Eigen::RowVectorXd original = x.row(i);
      const int u = static_cast<int>((code >> (i * p)) & mask);
      for (int v = 0; v < num_values; ++v) {
        if (v == u) continue;
        x.row(i) = values[v];
        Eigen::Matrix3d diff = Eigen::Matrix3d::Zero();
        diff.topLeftCorner(p, p) = s - SecondMoment(x);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver;
        solver.computeDirect(diff, Eigen::EigenvaluesOnly);
        const double spectral = solver.eigenvalues().cwiseAbs().maxCoeff();
        out.max_spectral = std::max(out.max_spectral, spectral);
        ++out.pairs;
      }
      x.row(i) = original;
    }
  }
  out.ratio = out.max_spectral / (2.0 / n);
  return out;
}

std::vector<SensitivityGeometry> StandardGeometries(int p) {
  std::vector<std::pair<std::string, LatticeCovering>> coverings;
  coverings.emplace_back("t0", LatticeCovering::Trivial(p));
  const Vector e1 = Vector::Unit(p, 0);
  const Vector ones = Vector::Ones(p) / std::sqrt(static_cast<double>(p));
  for (double alpha : {0.5, 0.99}) {
    for (const auto& [name, dir] :
         {std::pair<std::string, Vector>{"e1", e1}, {"ones", ones}}) {
      SpectralProjection proj{dir};
      auto cover = BuildLatticeCovering(proj, alpha);
      if (cover.ok()) {
        coverings.emplace_back(absl::StrCat("t1_", name, "_a", alpha),
                               *std::move(cover));
      }
    }
  }
  std::vector<SensitivityGeometry> out;
  for (const auto& [name, cover] : coverings) {
    for (double b : {1.0, 1.5, 2.5, 4.0}) {
      out.push_back({absl::StrCat(name, "_b", b), cover, b});
    }
  }
  return out;
}

namespace {

struct Wilson {
  double lo;
  double hi;
};

Wilson WilsonInterval(long hits, long total, double z) {
  const double n = static_cast<double>(total);
  const double phat = hits / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace

DpProbeResult EmpiricalDpProbeBinned(std::span<const int> bins1,
                                     std::span<const int> bins2, int num_bins,
                                     const DpProbeConfig& config) {
  std::vector<long> c1(num_bins, 0), c2(num_bins, 0);
  for (int b : bins1) ++c1[b];
  for (int b : bins2) ++c2[b];
  const long n1 = static_cast<long>(bins1.size());
  const long n2 = static_cast<long>(bins2.size());
  DpProbeResult out;
  // Two directions per bin, each using one bound from each side.
  const double per_bound = config.significance / (4.0 * num_bins);
  out.z = boost::math::quantile(boost::math::normal(), 1.0 - per_bound);
  out.statistic = -std::numeric_limits<double>::infinity();
  out.max_point_log_ratio = -std::numeric_limits<double>::infinity();
  for (int b = 0; b < num_bins; ++b) {
    if (c1[b] < config.min_count || c2[b] < config.min_count) {
      if (c1[b] + c2[b] > 0) ++out.bins_excluded;
      continue;
    }
    ++out.bins_used;
    const Wilson w1 = WilsonInterval(c1[b], n1, out.z);
    const Wilson w2 = WilsonInterval(c2[b], n2, out.z);
    const double p1 = static_cast<double>(c1[b]) / n1;
    const double p2 = static_cast<double>(c2[b]) / n2;
    out.max_point_log_ratio = std::max(
        {out.max_point_log_ratio, std::log(p1 / p2), std::log(p2 / p1)});
    out.statistic = std::max({out.statistic, std::log(w1.lo / w2.hi),
                              std::log(w2.lo / w1.hi)});
  }
  out.pass = out.bins_used > 0 && out.statistic <= config.epsilon;
  return out;
}

DpProbeResult EmpiricalDpProbe(std::span<const double> out1,
                               std::span<const double> out2, double lo,
                               double hi, int bins,
                               const DpProbeConfig& config) {
  auto to_bin = [&](double x) {
    if (x < lo) return 0;
    if (x >= hi) return bins + 1;
    const int b = 1 + static_cast<int>((x - lo) / (hi - lo) * bins);
    return std::min(b, bins);
  };
  std::vector<int> b1(out1.size()), b2(out2.size());
  std::transform(out1.begin(), out1.end(), b1.begin(), to_bin);
  std::transform(out2.begin(), out2.end(), b2.begin(), to_bin);
  return EmpiricalDpProbeBinned(b1, b2, bins + 2, config);
}

absl::StatusOr<double> BinghamAngleMass(const Matrix& a, double lo,
                                        double hi) {
  if (a.rows() != 2 || a.cols() != 2) {
    return absl::InvalidArgumentError("angle mass needs a 2x2 matrix");
  }
  // Subtract the top eigenvalue so the integrand stays in (0, 1].
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  const double top = solver.eigenvalues()(1);
  auto density = [&](double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double q = a(0, 0) * c * c + 2.0 * a(0, 1) * c * s + a(1, 1) * s * s;
    return std::exp(q - top);
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err_total = 0.0, err_part = 0.0;
  const double total = Quad::integrate(density, -std::numbers::pi,
                                       std::numbers::pi, 20, 1e-13, &err_total);
  const double part = Quad::integrate(density, lo, hi, 20, 1e-13, &err_part);
  if (!(total > 0.0) || err_total > 1e-9 * total ||
      err_part > 1e-9 * total) {
    return absl::InternalError(absl::StrCat(
        "quadrature did not converge: error ", err_total, ", ", err_part));
  }
  return part / total;
}

absl::StatusOr<GofResult> BinghamGof(const Matrix& a, long trials,
                                     RandomStream& rng, int bins) {
  if (a.rows() != 2 || a.cols() != 2) {
    return absl::InvalidArgumentError("goodness of fit needs a 2x2 matrix");
  }
  const double pi = std::numbers::pi;
  std::vector<long> observed(bins, 0);
  long near_e1 = 0;
  for (long i = 0; i < trials; ++i) {
    ASSIGN_OR_RETURN(const Vector v, Pvec(a, rng));
    const double theta = std::atan2(v(1), v(0));
    int b = static_cast<int>((theta + pi) / (2.0 * pi) * bins);
    observed[std::clamp(b, 0, bins - 1)]++;
    if (std::fabs(theta) < 0.2 || std::fabs(theta) > pi - 0.2) ++near_e1;
  }
  std::vector<double> expected(bins);
  for (int b = 0; b < bins; ++b) {
    const double lo = -pi + 2.0 * pi * b / bins;
    const double hi = -pi + 2.0 * pi * (b + 1) / bins;
    ASSIGN_OR_RETURN(const double mass, BinghamAngleMass(a, lo, hi));
    expected[b] = mass * trials;
  }
  // Pool adjacent cells until every pooled cell expects at least 5 hits.
  std::vector<double> pooled_exp;
  std::vector<double> pooled_obs;
  double acc_e = 0.0, acc_o = 0.0;
  for (int b = 0; b < bins; ++b) {
    acc_e += expected[b];
    acc_o += observed[b];
    if (acc_e >= 5.0) {
      pooled_exp.push_back(acc_e);
      pooled_obs.push_back(acc_o);
      acc_e = acc_o = 0.0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0.0) {
    if (pooled_exp.empty()) {
      pooled_exp.push_back(acc_e);
      pooled_obs.push_back(acc_o);
    } else {
      pooled_exp.back() += acc_e;
      pooled_obs.back() += acc_o;
    }
  }
  GofResult out;
  for (std::size_t c = 0; c < pooled_exp.size(); ++c) {
    const double diff = pooled_obs[c] - pooled_exp[c];
    out.statistic += diff * diff / pooled_exp[c];
  }
  out.dof = static_cast<int>(pooled_exp.size()) - 1;
  if (out.dof >= 1) {
    out.p_value = boost::math::cdf(
        boost::math::complement(boost::math::chi_squared(out.dof),
                                out.statistic));
  } else {
    out.p_value = 1.0;
  }
  out.mass_near_e1 = static_cast<double>(near_e1) / trials;
  return out;
}

absl::StatusOr<std::vector<int>> ProjJointBins(const Matrix& a, long trials,
                                               int bins, RandomStream& rng) {
  if (a.rows() != 2 || a.cols() != 2) {
    return absl::InvalidArgumentError("joint binning needs a 2x2 matrix");
  }
  const double pi = std::numbers::pi;
  std::vector<int> out(trials);
  for (long i = 0; i < trials; ++i) {
    ASSIGN_OR_RETURN(const PrivateProjection proj, PrivateProj(a, 2, rng));
    const Vector v1 = proj.basis.col(0);
    const Vector v2 = proj.basis.col(1);
    const double theta = std::atan2(v1(1), v1(0));
    const int b =
        std::clamp(static_cast<int>((theta + pi) / (2.0 * pi) * bins), 0,
                   bins - 1);
    const int orientation = v1(0) * v2(1) - v1(1) * v2(0) > 0.0 ? 1 : 0;
    out[i] = 2 * b + orientation;
  }
  return out;
}

absl::StatusOr<Matrix> OptimalityFixture(int p, int k, RandomStream& rng,
                                         int max_attempts) {
  if (k < 1) return absl::InvalidArgumentError("k must be positive");
  const int count = 2 * k;
  if (!(p > 16.0 * std::log(static_cast<double>(count)))) {
    return absl::InvalidArgumentError(absl::StrCat(
        "p=", p, " does not exceed 16 ln(2k) = ", 16.0 * std::log(count)));
  }
  Matrix points(count, p);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < p; ++j) points(i, j) = rng.Uniform() < 0.5 ? 1 : 0;
    }
    bool separated = true;
    for (int i = 0; i < count && separated; ++i) {
      for (int j = i + 1; j < count && separated; ++j) {
        // ||x_i - x_j||_2 > sqrt(p)/2 iff the Hamming distance exceeds p/4.
        const double hamming = (points.row(i) - points.row(j)).squaredNorm();
        separated = hamming > p / 4.0;
      }
    }
    if (separated) return Matrix(points / std::sqrt(static_cast<double>(p)));
  }
  return absl::ResourceExhaustedError(absl::StrCat(
      "no separated set found in ", max_attempts, " attempts"));
}

absl::StatusOr<PartitionSearch> MinCovarianceLossOverPartitions(
    const Matrix& atoms, int max_blocks) {
  const int n = static_cast<int>(atoms.rows());
  if (n < 1 || n > 12) {
    return absl::ResourceExhaustedError("partition search needs 1 <= n <= 12");
  }
  if (max_blocks < 1) return absl::InvalidArgumentError("max_blocks < 1");
  PartitionSearch out;
  out.min_loss = std::numeric_limits<double>::infinity();
  // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<int> a(n, 0), prefix_max(n, 0);
  while (true) {
    Partition part;
    const int blocks = prefix_max[n - 1] + 1;
    part.blocks.resize(blocks);
    for (int i = 0; i < n; ++i) part.blocks[a[i]].push_back(i);
    ASSIGN_OR_RETURN(const CovarianceLoss loss,
                     BruteCovarianceLoss(atoms, part));
    out.min_loss = std::min(out.min_loss, loss.loss);
    ++out.partitions;
    int i = n - 1;
    while (i > 0 &&
           (a[i] > prefix_max[i - 1] || a[i] + 1 >= max_blocks)) {
      --i;
    }
    if (i == 0) break;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (int j = i + 1; j < n; ++j) {
      a[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return out;
}

absl::StatusOr<TensorizationResult> TensorizationCheck(
    const Matrix& atoms, const Partition& partition) {
  RETURN_IF_ERROR(partition.Validate(static_cast<int>(atoms.rows())));
  const Matrix y = ConditionalExpectation(atoms, partition);
  TensorizationResult out;
  double* slots[3] = {&out.second, &out.third, &out.fourth};
  for (int d = 2; d <= 4; ++d) {
    ASSIGN_OR_RETURN(const DenseTensor tx, TensorMoment(atoms, d));
    ASSIGN_OR_RETURN(const DenseTensor ty, TensorMoment(y, d));
    ASSIGN_OR_RETURN(const DenseTensor diff, Subtract(tx, ty));
    *slots[d - 2] = std::sqrt(diff.FrobeniusNormSq());
  }
  out.holds = out.third <= 8.0 * out.second && out.fourth <= 44.0 * out.second;
  return out;
}

absl::StatusOr<DecompositionTerms> AccuracyDecomposition(
    const Algorithm2Run& run, int d) {
  const int n = run.params.n;
  ASSIGN_OR_RETURN(const DenseTensor truth, TensorMoment(run.scaled, d));
  ASSIGN_OR_RETURN(const DenseTensor synth,
                   WeightedTensorMoment(run.noisy.atoms.weights,
                                        run.noisy.atoms.points, d));
  ASSIGN_OR_RETURN(const DenseTensor diff, Subtract(truth, synth));
  DecompositionTerms out;
  out.degree = d;
  out.lhs = std::sqrt(diff.FrobeniusNormSq());
  const double alpha = run.params.alpha;
  const double residual =
      ProjectedResidual(run.second_moment, run.projection).norm();
  out.covering_term = std::pow(4.0, d) * (4.0 * alpha * alpha + residual);
  out.damping_term = 2.0 * d * run.covering.size() * run.params.b / n;
  out.weight_term = 2.0 * run.noisy.rho.lpNorm<1>();
  double weighted = 0.0;
  for (Eigen::Index j = 0; j < run.noisy.r.rows(); ++j) {
    weighted += run.damped.weights(j) * run.noisy.r.row(j).norm();
  }
  out.vector_term = 2.0 * d * weighted;
  out.rhs = out.covering_term + out.damping_term + out.weight_term +
            out.vector_term;
  out.holds = out.lhs <= out.rhs;
  return out;
}

absl::StatusOr<CovarianceDecomposition> DecomposeCovarianceLoss(
    const Matrix& atoms, const Partition& partition, const Matrix& projector) {
  ASSIGN_OR_RETURN(const CovarianceLoss loss,
                   BruteCovarianceLoss(atoms, partition));
  const Matrix y = ConditionalExpectation(atoms, partition);
  const Matrix diff = (atoms - y) * projector;  // rows P(x_i - y_i)
  const double projected = diff.rowwise().squaredNorm().mean();
  const Matrix complement =
      Matrix::Identity(projector.rows(), projector.cols()) - projector;
  const double tail =
      (complement * SecondMoment(atoms) * complement).norm();
  return CovarianceDecomposition{loss.loss, projected + tail};
}

nlohmann::json AuditAlgorithm1(const Matrix& boolean_data,
                               const Algorithm1Run& run) {
  nlohmann::json out;
  const int n = static_cast<int>(boolean_data.rows());
  const int p = static_cast<int>(boolean_data.cols());
  const Partition& blocks = run.aggregate.block_map;
  const bool structure = blocks.Validate(n).ok() && blocks.equal_sized;
  bool sizes_ok = true;
  for (const auto& block : blocks.blocks) {
    sizes_ok &= static_cast<int>(block.size()) == run.aggregate.anonymity;
  }
  out["anonymity"] = {{"level", run.aggregate.anonymity},
                      {"blocks", blocks.num_blocks()},
                      {"conservation", structure},
                      {"equal_sized", sizes_ok},
                      {"pass", structure && sizes_ok}};

  const Matrix scaled = boolean_data / std::sqrt(static_cast<double>(p));
  const double mean_gap =
      (scaled.colwise().mean() - run.aggregate.centroids.colwise().mean())
          .cwiseAbs()
          .maxCoeff();
  out["mean_preservation"] = {{"linf", mean_gap}, {"pass", mean_gap <= 1e-12}};

  auto loss = BruteCovarianceLoss(scaled, blocks, n);
  if (loss.ok()) {
    out["covariance"] = {{"loss", loss->loss},
                         {"total_covariance_gap", loss->identity_gap},
                         {"pass", loss->identity_gap <= 1e-10}};
  } else {
    out["covariance"] = {{"error", std::string(loss.status().message())}};
  }
  return out;
}

nlohmann::json AuditAlgorithm2(const Algorithm2Run& run) {
  nlohmann::json out;
  double ledger_sum = 0.0;
  for (const BudgetEntry& e : run.ledger) ledger_sum += e.epsilon;
  out["ledger"] = {
      {"sum", ledger_sum},
      {"pass", std::fabs(ledger_sum - run.params.epsilon) <= 1e-12}};

  const Vector& w = run.noisy.atoms.weights;
  const bool simplex =
      (w.array() >= 0.0).all() && std::fabs(w.sum() - 1.0) <= 1e-12;
  const ConvexBody body =
      ConvexBody::Box(1.0 / std::sqrt(static_cast<double>(run.params.p)));
  bool in_body = true;
  for (Eigen::Index j = 0; j < run.noisy.atoms.points.rows(); ++j) {
    in_body &= body.contains(run.noisy.atoms.points.row(j).transpose(), 0.0);
  }
  out["feasibility"] = {{"weights_in_simplex", simplex},
                        {"atoms_in_body", in_body},
                        {"pass", simplex && in_body}};
  out["covering"] = {
      {"size", run.covering.size()},
      {"cap", std::pow(static_cast<double>(run.params.n), run.params.kappa)},
      {"zero_projection_fallback", run.zero_projection_fallback}};

  nlohmann::json decomposition = nlohmann::json::array();
  for (int d : {1, 2}) {
    auto terms = AccuracyDecomposition(run, d);
    if (!terms.ok()) continue;
    decomposition.push_back({{"degree", d},
                             {"lhs", terms->lhs},
                             {"rhs", terms->rhs},
                             {"pass", terms->holds}});
  }
  out["accuracy_decomposition"] = decomposition;
  return out;
}

}  // namespace microsynth
