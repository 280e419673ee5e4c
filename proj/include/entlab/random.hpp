#pragma once

// Seeded random objects: Ginibre matrices, Haar isometries, random states,
// amplitudes and channels. Every sampler takes an explicit generator so that
// a (seed, stream) pair fully determines the result.

#include <cstdint>
#include <random>
#include <vector>

#include "entlab/channel.hpp"

namespace entlab {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent stream seed for sample `index` of stream `stream`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

/// Entries i.i.d. complex normal with E|z|² = 1.
inline CMat ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

/// Haar-distributed rows x cols isometry (rows >= cols): QR of a Ginibre
/// matrix with the phases of R's diagonal moved into Q.
inline CMat haar_isometry(int rows, int cols, Rng& rng) {
  if (cols > rows) fail(ErrorCode::Domain, "haar_isometry needs rows >= cols");
  if (cols == 0) return CMat(rows, 0);
  const CMat z = ginibre(rows, cols, rng);
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ() * CMat::Identity(rows, cols);
  const CMat& r = qr.matrixQR();
  for (int j = 0; j < cols; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

inline CMat haar_unitary(int n, Rng& rng) { return haar_isometry(n, n, rng); }

/// Uniform point on the probability simplex (Dirichlet(1,...,1)).
inline std::vector<double> dirichlet_ones(int k, Rng& rng) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> w(static_cast<std::size_t>(k));
  double total = 0.0;
  for (double& x : w) total += (x = exp1(rng));
  for (double& x : w) x /= total;
  return w;
}

/// Haar eigenvectors with Dirichlet eigenvalues on C^n, scaled to `weight`.
inline CMat random_density(int n, Rng& rng, double weight = 1.0) {
  const CMat u = haar_unitary(n, rng);
  const std::vector<double> p = dirichlet_ones(n, rng);
  RVec lambda(n);
  for (int i = 0; i < n; ++i) lambda(i) = p[static_cast<std::size_t>(i)] * weight;
  return hermitize(u * lambda.cast<Complex>().asDiagonal() * u.adjoint());
}

/// Random state: Dirichlet block weights, then random_density per block.
inline DensityState random_state(const BlockStructure& a, Rng& rng) {
  const std::vector<double> nu = dirichlet_ones(static_cast<int>(a.block_count()), rng);
  std::vector<CMat> blocks;
  for (std::size_t i = 0; i < a.block_count(); ++i) blocks.push_back(random_density(a.dim(i), rng, nu[i]));
  // Re-normalize the accumulated rounding of the block traces.
  double total = 0.0;
  for (const CMat& b : blocks) total += trace_real(b);
  for (CMat& b : blocks) b /= total;
  return DensityState(a, std::move(blocks));
}

inline AmplitudeOperator random_amplitude(int dim_g, int dim_h, int dim_f, Rng& rng) {
  CMat u = ginibre(dim_g * dim_h, dim_f, rng);
  u /= u.norm();
  return AmplitudeOperator(std::move(u), dim_g, dim_h);
}

/// Channel C^din -> C^dout with `kraus_count` Kraus operators cut from one
/// Haar isometry C^din -> C^(kraus_count*dout).
inline Channel random_channel(int dim_in, int dim_out, int kraus_count, Rng& rng) {
  const CMat w = haar_isometry(kraus_count * dim_out, dim_in, rng);
  std::vector<CMat> kraus;
  for (int k = 0; k < kraus_count; ++k) kraus.push_back(w.middleRows(k * dim_out, dim_out));
  return Channel(std::move(kraus), BlockStructure::simple(dim_in), BlockStructure::simple(dim_out));
}

}  // namespace entlab
