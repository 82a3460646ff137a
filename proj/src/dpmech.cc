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

#include "microsynth/dpmech.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "microsynth/status_macros.h"

namespace microsynth {

double LaplaceInverseCdf(double u, double sigma) {
  const double c = u - 0.5;
  const double sign = (c > 0.0) - (c < 0.0);
  return -sigma * sign * std::log(1.0 - 2.0 * std::fabs(c));
}

absl::StatusOr<Vector> LaplaceVector(double sigma, int q, RandomStream& rng) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be positive, got ", sigma));
  }
  if (q < 0) return absl::InvalidArgumentError("negative dimension");
  Vector out(q);
  for (int i = 0; i < q; ++i) out(i) = LaplaceInverseCdf(rng.UniformOpen(), sigma);
  return out;
}

absl::StatusOr<Vector> Pvec(const Matrix& a, RandomStream& rng,
                            const PvecOptions& options) {
  const int q = static_cast<int>(a.rows());
  if (q < 1 || a.cols() != q) {
    return absl::InvalidArgumentError("PVEC needs a non-empty square matrix");
  }
  if ((a - a.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
    return absl::InvalidArgumentError("PVEC needs a symmetric matrix");
  }
  if (q == 1) {
    Vector v(1);
    v(0) = rng.Uniform() < 0.5 ? -1.0 : 1.0;
    return v;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.transpose()));
  if (solver.info() != Eigen::Success) {
    return absl::InternalError("PVEC eigendecomposition failed");
  }
  const Vector& lambda = solver.eigenvalues();  // ascending
  if (lambda(0) < -options.psd_tolerance) {
    return absl::InvalidArgumentError(absl::StrCat(
        "PVEC needs a PSD matrix; smallest eigenvalue is ", lambda(0)));
  }
  // exp(x^T A x) = exp(lambda_max) exp(-x^T B x) on the sphere with
  // B = lambda_max I - A, whose eigenvalues beta are >= 0.
  const Vector beta =
      (Vector::Constant(q, lambda(q - 1)) - lambda).cwiseMax(0.0);

  // b in [1, q] solves sum_i 1 / (b + 2 beta_i) = 1; the left side is
  // decreasing in b, >= 1 at b = 1 and <= 1 at b = q.
  auto excess = [&](double b) {
    double s = 0.0;
    for (int i = 0; i < q; ++i) s += 1.0 / (b + 2.0 * beta(i));
    return s - 1.0;
  };
  double lo = 1.0, hi = static_cast<double>(q);
  for (int iter = 0; iter < 200 && hi - lo > 1e-14 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  const double b = 0.5 * (lo + hi);
  const Vector omega = Vector::Ones(q) + (2.0 / b) * beta;
  const Vector proposal_scale = omega.cwiseSqrt().cwiseInverse();
  const double half_q = 0.5 * q;
  const double log_m = -0.5 * (q - b) + half_q * std::log(q / b);

  Vector y(q);
  for (long attempt = 0; attempt < options.max_attempts; ++attempt) {
    for (int i = 0; i < q; ++i) y(i) = rng.Normal() * proposal_scale(i);
    const double norm = y.norm();
    if (norm == 0.0) continue;
    const Vector x = y / norm;
    const double bx = x.cwiseProduct(x).dot(beta);
    const double ox = x.cwiseProduct(x).dot(omega);
    const double log_accept = -bx + half_q * std::log(ox) - log_m;
    if (std::log(rng.UniformOpen()) < log_accept) {
      return Vector(solver.eigenvectors() * x);
    }
  }
  return absl::InternalError(absl::StrCat(
      "PVEC rejection sampler made no acceptance in ", options.max_attempts,
      " attempts (q=", q, ", lambda_max=", lambda(q - 1), ", b=", b, ")"));
}

Matrix HouseholderComplement(const Vector& z) {
  const Eigen::Index q = z.size();
  Vector u = z;
  u(0) += z(0) >= 0.0 ? 1.0 : -1.0;
  const double uu = u.squaredNorm();
  Matrix reflection = Matrix::Identity(q, q);
  if (uu > 0.0) reflection -= (2.0 / uu) * u * u.transpose();
  return reflection.rightCols(q - 1);
}

absl::StatusOr<PrivateProjection> PrivateProj(const Matrix& a, int t,
                                              RandomStream& rng,
                                              const PvecOptions& options) {
  const int p = static_cast<int>(a.rows());
  if (a.cols() != p) return absl::InvalidArgumentError("A must be square");
  if (t < 1 || t > p) {
    return absl::InvalidArgumentError(
        absl::StrCat("rank ", t, " outside [1, ", p, "]"));
  }
  PrivateProjection out;
  out.basis.resize(p, t);
  Matrix complement = Matrix::Identity(p, p);  // p x q, orthonormal columns
  for (int i = 0; i < t; ++i) {
    const Matrix compressed = complement.transpose() * a * complement;
    ASSIGN_OR_RETURN(const Vector z,
                     Pvec(0.5 * (compressed + compressed.transpose()), rng,
                          options));
    out.basis.col(i) = complement * z;
    if (i + 1 < t) complement = complement * HouseholderComplement(z);
  }
  return out;
}

Vector ProjectSimplexL1(const Vector& w) {
  Vector out = w.cwiseMax(0.0);
  const double total = out.sum();
  if (!(total > 0.0)) {
    return Vector::Constant(w.size(), 1.0 / static_cast<double>(w.size()));
  }
  return out / total;
}

Vector ProjectBoxL2(const Vector& y, double side) {
  return y.cwiseMax(0.0).cwiseMin(side);
}

ConvexBody ConvexBody::Box(double side) {
  ConvexBody body;
  body.name = absl::StrCat("box[0,", side, "]");
  body.project = [side](const Vector& y) { return ProjectBoxL2(y, side); };
  body.contains = [side](const Vector& y, double tol) {
    return (y.array() >= -tol).all() && (y.array() <= side + tol).all();
  };
  return body;
}

ConvexBody ConvexBody::UnitBall() {
  ConvexBody body;
  body.name = "unit_ball";
  body.project = [](const Vector& y) {
    const double norm = y.norm();
    return norm > 1.0 ? Vector(y / norm) : y;
  };
  body.contains = [](const Vector& y, double tol) {
    return y.norm() <= 1.0 + tol;
  };
  return body;
}

}  // namespace microsynth
