#pragma once

// Decomposable algebras A = ⊕_i L(H_i) and their normal states.
//
// States are kept block-wise; the embedded block-diagonal matrix on
// H = ⊕_i H_i is assembled only on request.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "entlab/blockmat.hpp"

namespace entlab {

class BlockStructure {
 public:
  explicit BlockStructure(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) fail(ErrorCode::Domain, "block structure needs at least one block");
    offsets_.reserve(dims_.size());
    int offset = 0;
    for (int d : dims_) {
      if (d < 1) fail(ErrorCode::Domain, "block dimensions must be >= 1");
      offsets_.push_back(offset);
      offset += d;
    }
    if (offset > tol::kMaxTensorDim) fail(ErrorCode::Size, "block structure too large");
  }

  /// The full matrix algebra L(C^d).
  static BlockStructure simple(int d) { return BlockStructure({d}); }
  /// The diagonal algebra on C^n.
  static BlockStructure abelian(int n) { return BlockStructure(std::vector<int>(static_cast<std::size_t>(n), 1)); }

  const std::vector<int>& dims() const { return dims_; }
  std::size_t block_count() const { return dims_.size(); }
  int dim(std::size_t i) const { return dims_.at(i); }
  int offset(std::size_t i) const { return offsets_.at(i); }

  /// Σ d_i, the Hilbert space dimension of H.
  int rank() const { return std::accumulate(dims_.begin(), dims_.end(), 0); }
  /// Σ d_i², the linear dimension of the algebra.
  int dimension() const {
    return std::accumulate(dims_.begin(), dims_.end(), 0, [](int acc, int d) { return acc + d * d; });
  }
  bool is_abelian() const {
    return std::all_of(dims_.begin(), dims_.end(), [](int d) { return d == 1; });
  }

  /// Block index that owns basis vector `k` of H.
  std::size_t block_of(int k) const {
    for (std::size_t i = dims_.size(); i-- > 0;)
      if (k >= offsets_[i]) return i;
    fail(ErrorCode::Shape, "basis index out of range");
  }

  /// Largest entry of `m` outside the block-diagonal pattern.
  double off_block_mass(const CMat& m) const {
    double worst = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        if (block_of(static_cast<int>(r)) != block_of(static_cast<int>(c)))
          worst = std::max(worst, std::abs(m(r, c)));
    return worst;
  }

  friend bool operator==(const BlockStructure& a, const BlockStructure& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
};

struct RankDim {
  int rank;
  int dim;
};

inline RankDim rank_dim(const BlockStructure& a) { return {a.rank(), a.dimension()}; }

inline std::string describe(const BlockStructure& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.block_count(); ++i) s += (i ? "," : "") + std::to_string(a.dim(i));
  return s + ")";
}

/// A normal state ρ = ⊕_i ρ(i) on a decomposable algebra.
class DensityState {
 public:
  DensityState(BlockStructure structure, std::vector<CMat> blocks)
      : structure_(std::move(structure)), blocks_(std::move(blocks)) {
    if (blocks_.size() != structure_.block_count()) {
      fail(ErrorCode::Shape, "state has " + std::to_string(blocks_.size()) + " blocks, structure " +
                                 describe(structure_) + " needs " + std::to_string(structure_.block_count()));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      CMat& b = blocks_[i];
      if (b.rows() != structure_.dim(i) || b.cols() != structure_.dim(i)) {
        fail(ErrorCode::Shape, "block " + std::to_string(i) + " has wrong dimensions");
      }
      require_finite(b, "state block");
      if (hermiticity_deviation(b) > tol::kHermitian) fail(ErrorCode::Domain, "state block is not Hermitian");
      b = hermitize(b);
      const RVec lambda = herm_eigenvalues(b);
      if (lambda(lambda.size() - 1) < -tol::kPsd) fail(ErrorCode::NotPsd, "state block is not PSD");
      total += trace_real(b);
    }
    if (std::abs(total - 1.0) > tol::kTrace) {
      fail(ErrorCode::Domain, "state trace is " + std::to_string(total) + ", expected 1");
    }
  }

  /// Splits a full block-diagonal matrix on H into blocks; entries off the
  /// block pattern must vanish within `off_block_tol`.
  static DensityState from_matrix(const BlockStructure& structure, const CMat& full,
                                  double off_block_tol = 1e-9) {
    require_square(full, "state matrix");
    if (full.rows() != structure.rank()) fail(ErrorCode::Shape, "state matrix does not match structure rank");
    const double leak = structure.off_block_mass(full);
    if (leak > off_block_tol) {
      fail(ErrorCode::Structure, "matrix has off-block entries up to " + std::to_string(leak) +
                                     " for structure " + describe(structure));
    }
    std::vector<CMat> blocks;
    blocks.reserve(structure.block_count());
    for (std::size_t i = 0; i < structure.block_count(); ++i) {
      const int o = structure.offset(i), d = structure.dim(i);
      blocks.emplace_back(full.block(o, o, d, d));
    }
    return DensityState(structure, std::move(blocks));
  }

  /// Single-block state on L(C^n).
  static DensityState simple(const CMat& rho) {
    require_square(rho, "state matrix");
    return DensityState(BlockStructure::simple(static_cast<int>(rho.rows())), {rho});
  }

  const BlockStructure& structure() const { return structure_; }
  const std::vector<CMat>& blocks() const { return blocks_; }
  const CMat& block(std::size_t i) const { return blocks_.at(i); }
  int rank() const { return structure_.rank(); }

  /// ν(i) = tr ρ(i).
  double weight(std::size_t i) const { return trace_real(blocks_.at(i)); }

  /// ρ_i = ρ(i)/ν(i); undefined (throws) for zero-weight blocks.
  CMat normalized_block(std::size_t i) const {
    const double nu = weight(i);
    if (nu <= tol::kSupport) fail(ErrorCode::Domain, "normalized_block on a zero-weight block");
    return blocks_.at(i) / nu;
  }

  /// The block-diagonal operator on H = ⊕ H_i.
  CMat full() const {
    const int n = structure_.rank();
    CMat m = CMat::Zero(n, n);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const int o = structure_.offset(i), d = structure_.dim(i);
      m.block(o, o, d, d) = blocks_[i];
    }
    return m;
  }

 private:
  BlockStructure structure_;
  std::vector<CMat> blocks_;
};

inline std::vector<double> central_distribution(const DensityState& rho) {
  std::vector<double> nu(rho.structure().block_count());
  for (std::size_t i = 0; i < nu.size(); ++i) nu[i] = rho.weight(i);
  return nu;
}

/// ρ° with ν°(i) = d_i²/dim A and ρ°_i = I/d_i; maximizes the q-entropy.
inline DensityState tracial_state(const BlockStructure& a) {
  const double dim = a.dimension();
  std::vector<CMat> blocks;
  for (std::size_t i = 0; i < a.block_count(); ++i) {
    const int d = a.dim(i);
    blocks.push_back(CMat::Identity(d, d) * (static_cast<double>(d) / dim));
  }
  return DensityState(a, std::move(blocks));
}

/// I/rank A; maximizes the von Neumann entropy.
inline DensityState uniform_state(const BlockStructure& a) {
  const double r = a.rank();
  std::vector<CMat> blocks;
  for (std::size_t i = 0; i < a.block_count(); ++i) blocks.push_back(CMat::Identity(a.dim(i), a.dim(i)) / r);
  return DensityState(a, std::move(blocks));
}

struct SchattenTerm {
  double weight;       // λ(n)
  CVec vector;         // η_n embedded in H = ⊕ H_i, unit norm
  std::size_t block;
};

/// Spectral decomposition of every block into rank-one projectors, dropping
/// eigenvalues under the support cutoff. Order: block order, then
/// descending eigenvalue.
inline std::vector<SchattenTerm> schatten(const DensityState& rho) {
  std::vector<SchattenTerm> terms;
  const int n = rho.rank();
  for (std::size_t i = 0; i < rho.structure().block_count(); ++i) {
    const EigenSystem es = herm_eig(rho.block(i));
    const int o = rho.structure().offset(i);
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
      if (es.values(k) < tol::kSupport) continue;
      CVec v = CVec::Zero(n);
      v.segment(o, es.vectors.rows()) = es.vectors.col(k);
      terms.push_back({es.values(k), std::move(v), i});
    }
  }
  return terms;
}

}  // namespace entlab
