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

#ifndef MICROSYNTH_DPMECH_H_
#define MICROSYNTH_DPMECH_H_

#include <functional>
#include <string>

#include "absl/status/statusor.h"
#include "microsynth/dataset.h"
#include "microsynth/rng.h"

namespace microsynth {

// x = -sigma * sgn(u - 1/2) * ln(1 - 2|u - 1/2|) for u in (0, 1).
double LaplaceInverseCdf(double u, double sigma);

// q i.i.d. draws from the Laplace law with density exp(-|x|/sigma)/(2 sigma).
absl::StatusOr<Vector> LaplaceVector(double sigma, int q, RandomStream& rng);

struct PvecOptions {
  long max_attempts = 1'000'000;
  double psd_tolerance = 1e-8;
};

// Draws a unit vector v in R^q with density proportional to exp(v^T A v)
// with respect to the uniform measure on the sphere. A must be symmetric
// PSD. Exact rejection sampler with an angular central Gaussian envelope.
absl::StatusOr<Vector> Pvec(const Matrix& a, RandomStream& rng,
                            const PvecOptions& options = {});

struct PrivateProjection {
  Matrix basis;  // p x t, columns v_1..v_t

  int rank() const { return static_cast<int>(basis.cols()); }
  Matrix Projector() const { return basis * basis.transpose(); }
};

// v_1 = PVEC(A); each later v_{i+1} = PVEC of A compressed to the orthogonal
// complement of v_1..v_i, expressed in an orthonormal basis of it.
absl::StatusOr<PrivateProjection> PrivateProj(const Matrix& a, int t,
                                              RandomStream& rng,
                                              const PvecOptions& options = {});

// Orthonormal basis (q x (q-1)) of the complement of the unit vector z,
// taken from the Householder reflection that maps z to a multiple of e_1.
Matrix HouseholderComplement(const Vector& z);

// Zeroes the negative entries and normalizes; uniform when nothing is left.
Vector ProjectSimplexL1(const Vector& w);

// Euclidean projection onto the box side * [0,1]^p (coordinate clamp).
Vector ProjectBoxL2(const Vector& y, double side);

// A convex body given by its Euclidean metric projection.
struct ConvexBody {
  std::string name;
  std::function<Vector(const Vector&)> project;
  std::function<bool(const Vector&, double)> contains;

  // side * [0,1]^p.
  static ConvexBody Box(double side);
  // The closed Euclidean unit ball.
  static ConvexBody UnitBall();
};

}  // namespace microsynth

#endif  // MICROSYNTH_DPMECH_H_
