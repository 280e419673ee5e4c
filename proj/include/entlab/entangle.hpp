#pragma once

// Compound states on B ⊗ A and the entanglements that realize them.
//
// Spaces: G carries B, H carries A, F is the domain of an amplitude operator.
// The involution J on every space is entrywise conjugation in the computational
// basis, so the tilde operation B̃ = J B^† J is the transpose. With that choice
// the entangling operator of an amplitude υ: F -> G⊗H is a pure re-indexing,
//     κ[(k,h), n] = υ[(n,h), k],
// and the compound state reads ϖ(B⊗A) = tr_G B̃ κ^†(I⊗A)κ.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "entlab/algebra.hpp"

namespace entlab {

class AmplitudeOperator {
 public:
  AmplitudeOperator(CMat matrix, int dim_g, int dim_h)
      : matrix_(std::move(matrix)), dim_g_(dim_g), dim_h_(dim_h) {
    if (dim_g < 1 || dim_h < 1 || matrix_.cols() < 1 ||
        matrix_.rows() != static_cast<Eigen::Index>(dim_g) * dim_h) {
      fail(ErrorCode::Shape, "amplitude operator must have dim_g*dim_h rows and at least one column");
    }
    require_finite(matrix_, "amplitude operator");
    const double norm = matrix_.squaredNorm();
    if (std::abs(norm - 1.0) > tol::kTrace) {
      fail(ErrorCode::Domain, "amplitude operator has tr(υ^†υ) = " + std::to_string(norm));
    }
  }

  const CMat& matrix() const { return matrix_; }
  int dim_g() const { return dim_g_; }
  int dim_h() const { return dim_h_; }
  int dim_f() const { return static_cast<int>(matrix_.cols()); }

 private:
  CMat matrix_;
  int dim_g_;
  int dim_h_;
};

/// κ: G -> F⊗H, stored as a (dim_f*dim_h) x dim_g matrix.
class EntanglingOperator {
 public:
  EntanglingOperator(CMat matrix, int dim_f, int dim_h)
      : matrix_(std::move(matrix)), dim_f_(dim_f), dim_h_(dim_h) {
    if (dim_f < 1 || dim_h < 1 || matrix_.rows() != static_cast<Eigen::Index>(dim_f) * dim_h) {
      fail(ErrorCode::Shape, "entangling operator must have dim_f*dim_h rows");
    }
    require_finite(matrix_, "entangling operator");
    if (std::abs(matrix_.squaredNorm() - 1.0) > tol::kTrace) {
      fail(ErrorCode::Domain, "entangling operator is not normalized");
    }
  }

  const CMat& matrix() const { return matrix_; }
  int dim_f() const { return dim_f_; }
  int dim_g() const { return static_cast<int>(matrix_.cols()); }
  int dim_h() const { return dim_h_; }

  /// σ = κ^†κ on G.
  CMat sigma() const { return hermitize(matrix_.adjoint() * matrix_); }
  /// ρ = tr_F κκ^† on H.
  CMat rho() const { return hermitize(partial_trace(matrix_ * matrix_.adjoint(), dim_f_, dim_h_, Side::Left)); }

  /// ψ: F -> H obtained by reshaping κ applied to a vector of G,
  /// ψ[h, k] = (κ g)[(k,h)]. For g = |n> this is ψ(n) = (I⊗<n|)κ̃.
  CMat psi(const CVec& g) const {
    const CVec column = matrix_ * g;
    CMat out(dim_h_, dim_f_);
    for (int k = 0; k < dim_f_; ++k)
      for (int h = 0; h < dim_h_; ++h) out(h, k) = column(k * dim_h_ + h);
    return out;
  }
  CMat psi(int n) const { return psi(CVec(CVec::Unit(dim_g(), n))); }

  /// tr_G B̃ κ^†(I⊗A)κ.
  Complex state_value(const CMat& b, const CMat& a) const {
    const CMat lifted = kron(CMat::Identity(dim_f_, dim_f_), a);
    return (transpose_tilde(b) * matrix_.adjoint() * lifted * matrix_).trace();
  }

 private:
  CMat matrix_;
  int dim_f_;
  int dim_h_;
};

/// A density operator on G⊗H together with the algebras B on G and A on H.
class CompoundState {
 public:
  CompoundState(CMat omega, BlockStructure structure_b, BlockStructure structure_a)
      : omega_(std::move(omega)), b_(std::move(structure_b)), a_(std::move(structure_a)) {
    require_square(omega_, "compound state");
    require_finite(omega_, "compound state");
    if (omega_.rows() != static_cast<Eigen::Index>(b_.rank()) * a_.rank()) {
      fail(ErrorCode::Shape, "compound state dimension does not match rank(B)*rank(A)");
    }
    if (hermiticity_deviation(omega_) > tol::kHermitian) fail(ErrorCode::Domain, "compound state is not Hermitian");
    omega_ = hermitize(omega_);
    if (std::abs(trace_real(omega_) - 1.0) > tol::kTrace) fail(ErrorCode::Domain, "compound state trace != 1");
    if (!is_psd(omega_)) fail(ErrorCode::NotPsd, "compound state is not PSD");
    if (support_leak() > 1e-9) {
      fail(ErrorCode::Structure, "compound state is not supported on the blocks of B⊗A");
    }
  }

  const CMat& omega() const { return omega_; }
  const BlockStructure& structure_b() const { return b_; }
  const BlockStructure& structure_a() const { return a_; }
  int dim_g() const { return b_.rank(); }
  int dim_h() const { return a_.rank(); }

 private:
  // Largest entry coupling different (block of G, block of H) sectors.
  double support_leak() const {
    if (b_.block_count() == 1 && a_.block_count() == 1) return 0.0;
    const int dh = a_.rank();
    auto sector = [&](Eigen::Index idx) {
      return std::pair{b_.block_of(static_cast<int>(idx / dh)), a_.block_of(static_cast<int>(idx % dh))};
    };
    double worst = 0.0;
    for (Eigen::Index r = 0; r < omega_.rows(); ++r)
      for (Eigen::Index c = 0; c < omega_.cols(); ++c)
        if (sector(r) != sector(c)) worst = std::max(worst, std::abs(omega_(r, c)));
    return worst;
  }

  CMat omega_;
  BlockStructure b_;
  BlockStructure a_;
};

enum class DecompositionKind { General, Pure, Orthogonal };

inline std::string_view to_string(DecompositionKind k) {
  switch (k) {
    case DecompositionKind::General: return "general";
    case DecompositionKind::Pure: return "pure";
    case DecompositionKind::Orthogonal: return "orthogonal";
  }
  return "general";
}

namespace detail {
inline double second_eigenvalue(const CMat& m) {
  const RVec lambda = herm_eigenvalues(m);
  return lambda.size() < 2 ? 0.0 : lambda(1);
}
inline double max_pair_product(const std::vector<CMat>& parts) {
  double worst = 0.0;
  for (std::size_t m = 0; m < parts.size(); ++m)
    for (std::size_t n = 0; n < parts.size(); ++n)
      if (m != n) worst = std::max(worst, max_abs(parts[m] * parts[n]));
  return worst;
}
}  // namespace detail

/// ρ = Σ_n ρ(n) into subnormalized PSD parts on a common space.
class Decomposition {
 public:
  explicit Decomposition(std::vector<CMat> parts, DecompositionKind kind = DecompositionKind::General)
      : parts_(std::move(parts)), kind_(kind) {
    if (parts_.empty()) fail(ErrorCode::Domain, "decomposition needs at least one part");
    const Eigen::Index d = parts_.front().rows();
    double total = 0.0;
    for (CMat& p : parts_) {
      if (p.rows() != d || p.cols() != d) fail(ErrorCode::Shape, "decomposition parts must share one square shape");
      require_finite(p, "decomposition part");
      if (hermiticity_deviation(p) > tol::kHermitian) fail(ErrorCode::Domain, "decomposition part is not Hermitian");
      p = hermitize(p);
      if (!is_psd(p)) fail(ErrorCode::NotPsd, "decomposition part is not PSD");
      total += trace_real(p);
    }
    if (std::abs(total - 1.0) > tol::kTrace) fail(ErrorCode::Domain, "decomposition weights do not sum to 1");
    if (kind_ == DecompositionKind::Pure) {
      for (const CMat& p : parts_)
        if (detail::second_eigenvalue(p) >= 1e-10) fail(ErrorCode::Domain, "part of a pure decomposition has rank > 1");
    }
    if (kind_ == DecompositionKind::Orthogonal && detail::max_pair_product(parts_) >= 1e-10) {
      fail(ErrorCode::Domain, "parts of an orthogonal decomposition overlap");
    }
  }

  const std::vector<CMat>& parts() const { return parts_; }
  DecompositionKind kind() const { return kind_; }
  std::size_t size() const { return parts_.size(); }
  int dim() const { return static_cast<int>(parts_.front().rows()); }

  /// μ(n) = tr ρ(n).
  std::vector<double> weights() const {
    std::vector<double> mu;
    for (const CMat& p : parts_) mu.push_back(trace_real(p));
    return mu;
  }
  CMat sum() const {
    CMat s = CMat::Zero(dim(), dim());
    for (const CMat& p : parts_) s += p;
    return s;
  }

 private:
  std::vector<CMat> parts_;
  DecompositionKind kind_;
};

/// Schatten decomposition as an orthogonal pure decomposition.
inline Decomposition schatten_decomposition(const DensityState& rho) {
  std::vector<CMat> parts;
  for (const SchattenTerm& t : schatten(rho)) parts.push_back(t.weight * t.vector * t.vector.adjoint());
  return Decomposition(std::move(parts), DecompositionKind::Orthogonal);
}

inline CompoundState compound_from_amplitude(const AmplitudeOperator& upsilon, const BlockStructure& b,
                                             const BlockStructure& a) {
  if (b.rank() != upsilon.dim_g() || a.rank() != upsilon.dim_h()) {
    fail(ErrorCode::Shape, "block structures do not match the amplitude operator");
  }
  return CompoundState(upsilon.matrix() * upsilon.matrix().adjoint(), b, a);
}

inline CompoundState compound_from_amplitude(const AmplitudeOperator& upsilon) {
  return compound_from_amplitude(upsilon, BlockStructure::simple(upsilon.dim_g()),
                                 BlockStructure::simple(upsilon.dim_h()));
}

struct Marginals {
  DensityState b;  // σ on G
  DensityState a;  // ρ on H
};

inline Marginals marginals(const CompoundState& omega) {
  const int dg = omega.dim_g(), dh = omega.dim_h();
  return {DensityState::from_matrix(omega.structure_b(), partial_trace(omega.omega(), dg, dh, Side::Right)),
          DensityState::from_matrix(omega.structure_a(), partial_trace(omega.omega(), dg, dh, Side::Left))};
}

/// The entangling operator of an amplitude, with the free unitary of F fixed
/// to the identity. Columns of υ below 1e-12 in norm are dropped first so
/// that F is minimal.
inline EntanglingOperator entangling_from_amplitude(const AmplitudeOperator& upsilon) {
  const CMat& u = upsilon.matrix();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < u.cols(); ++k)
    if (u.col(k).norm() >= 1e-12) kept.push_back(k);
  const int dg = upsilon.dim_g(), dh = upsilon.dim_h();
  const int df = static_cast<int>(kept.size());
  CMat kappa(static_cast<Eigen::Index>(df) * dh, dg);
  for (int k = 0; k < df; ++k)
    for (int h = 0; h < dh; ++h)
      for (int n = 0; n < dg; ++n) kappa(k * dh + h, n) = u(n * dh + h, kept[static_cast<std::size_t>(k)]);
  return EntanglingOperator(std::move(kappa), df, dh);
}

/// Amplitude operator of the standard compound state: one column per block
/// with ν(i) > 0, holding vec(ρ(i)^{1/2}) placed in H_i⊗H_i with
/// (ζ⊗η)^†θ = η^† ρ^{1/2} Jζ, i.e. θ[(g,h)] = ρ^{1/2}[h,g].
inline AmplitudeOperator standard_amplitude(const DensityState& rho) {
  const BlockStructure& s = rho.structure();
  const int n = s.rank();
  std::vector<CVec> columns;
  for (std::size_t i = 0; i < s.block_count(); ++i) {
    if (rho.weight(i) <= tol::kSupport) continue;
    const CMat root = spectral_fn(rho.block(i), SpectralFn::Sqrt);
    const int o = s.offset(i), d = s.dim(i);
    CVec theta = CVec::Zero(static_cast<Eigen::Index>(n) * n);
    for (int g = 0; g < d; ++g)
      for (int h = 0; h < d; ++h) theta((o + g) * n + (o + h)) = root(h, g);
    columns.push_back(std::move(theta));
  }
  CMat u(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) u.col(static_cast<Eigen::Index>(k)) = columns[k];
  // Absorb rounding from the square roots so the amplitude is exactly normalized.
  u /= u.norm();
  return AmplitudeOperator(std::move(u), n, n);
}

/// ω₀ = ⊕_i ν(i) θ₀^i θ₀^{i†}, the compound state of ρ^{1/2} A ρ^{1/2}.
/// Its A-marginal is ρ; its B-marginal is ρ̃ (the transpose of ρ), which is
/// the same state read through the tilde convention.
inline CompoundState standard_compound(const DensityState& rho) {
  return compound_from_amplitude(standard_amplitude(rho), rho.structure(), rho.structure());
}

inline CompoundState c_compound(std::span<const DensityState> sigma_parts, std::span<const DensityState> rho_parts,
                                std::span<const double> mu) {
  if (sigma_parts.size() != rho_parts.size() || sigma_parts.size() != mu.size() || mu.empty()) {
    fail(ErrorCode::Shape, "c_compound: sigma, rho and mu must have equal nonzero length");
  }
  double total = 0.0;
  for (double m : mu) {
    if (m < 0.0) fail(ErrorCode::Domain, "c_compound: negative weight");
    total += m;
  }
  if (std::abs(total - 1.0) > tol::kTrace) fail(ErrorCode::Domain, "c_compound: weights do not sum to 1");
  const BlockStructure& b = sigma_parts.front().structure();
  const BlockStructure& a = rho_parts.front().structure();
  const int n = b.rank() * a.rank();
  CMat omega = CMat::Zero(n, n);
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (!(sigma_parts[k].structure() == b) || !(rho_parts[k].structure() == a)) {
      fail(ErrorCode::Shape, "c_compound: parts must share block structures");
    }
    omega += mu[k] * kron(sigma_parts[k].full(), rho_parts[k].full());
  }
  return CompoundState(std::move(omega), b, a);
}

/// ω = Σ_n |n><n| ⊗ ρ(n) with B the diagonal algebra on C^N.
inline CompoundState d_compound(const Decomposition& dec, const BlockStructure& a) {
  if (dec.dim() != a.rank()) fail(ErrorCode::Shape, "d_compound: decomposition does not act on A");
  const int parts = static_cast<int>(dec.size());
  const int d = dec.dim();
  CMat omega = CMat::Zero(static_cast<Eigen::Index>(parts) * d, static_cast<Eigen::Index>(parts) * d);
  for (int n = 0; n < parts; ++n) omega.block(n * d, n * d, d, d) = dec.parts()[static_cast<std::size_t>(n)];
  return CompoundState(std::move(omega), BlockStructure::abelian(parts), a);
}

inline CompoundState d_compound(const Decomposition& dec) {
  return d_compound(dec, BlockStructure::simple(dec.dim()));
}

/// Diagonal entangling operator κ = Σ_n κ_n <n| of a d-compound, with
/// F = ⊕_n F_n and F_n the range of ρ(n). Each ρ(n) = ψ_n ψ_n^† is factored
/// through its eigenvectors.
inline EntanglingOperator d_entangling(const Decomposition& dec) {
  const int dh = dec.dim();
  std::vector<CMat> factors;
  int df = 0;
  for (const CMat& p : dec.parts()) {
    const EigenSystem es = herm_eig(p);
    Eigen::Index r = 0;
    while (r < es.values.size() && es.values(r) > tol::kSupport) ++r;
    CMat f = es.vectors.leftCols(r);
    for (Eigen::Index j = 0; j < r; ++j) f.col(j) *= std::sqrt(es.values(j));
    df += static_cast<int>(r);
    factors.push_back(std::move(f));
  }
  const int dg = static_cast<int>(dec.size());
  CMat kappa = CMat::Zero(static_cast<Eigen::Index>(df) * dh, dg);
  int offset = 0;
  for (int n = 0; n < dg; ++n) {
    const CMat& f = factors[static_cast<std::size_t>(n)];
    for (Eigen::Index j = 0; j < f.cols(); ++j)
      for (int h = 0; h < dh; ++h) kappa((offset + j) * dh + h, n) = f(h, j);
    offset += static_cast<int>(f.cols());
  }
  return EntanglingOperator(std::move(kappa), df, dh);
}

enum class EntanglementClass { C, D, O };

inline std::string_view to_string(EntanglementClass c) {
  switch (c) {
    case EntanglementClass::C: return "C";
    case EntanglementClass::D: return "D";
    case EntanglementClass::O: return "O";
  }
  return "C";
}

struct Classification {
  EntanglementClass cls;
  std::vector<bool> pure;    // per part: rank one within 1e-10
  bool all_pure;
  bool orthogonal;           // ρ(m)ρ(n) = 0 for m != n
  double max_overlap;        // max ‖ρ(m)ρ(n)‖∞
  bool commuting;            // diagnostic only: ρ(m)ρ(n) = ρ(n)ρ(m)
  double max_commutator;
};

inline Classification classify(const Decomposition& dec) {
  Classification c{EntanglementClass::C, {}, true, false, 0.0, false, 0.0};
  for (const CMat& p : dec.parts()) {
    const bool pure = detail::second_eigenvalue(p) < 1e-10;
    c.pure.push_back(pure);
    c.all_pure = c.all_pure && pure;
  }
  c.max_overlap = detail::max_pair_product(dec.parts());
  c.orthogonal = c.max_overlap < 1e-10;
  const auto& parts = dec.parts();
  for (std::size_t m = 0; m < parts.size(); ++m)
    for (std::size_t n = m + 1; n < parts.size(); ++n)
      c.max_commutator = std::max(c.max_commutator, max_abs(parts[m] * parts[n] - parts[n] * parts[m]));
  c.commuting = c.max_commutator < 1e-10;
  if (c.orthogonal) {
    c.cls = EntanglementClass::O;
  } else if (c.all_pure) {
    c.cls = EntanglementClass::D;
  }
  return c;
}

/// Defect of tr_F ψ(m)^†ψ(n) = μ(n)δ_mn in the given orthonormal basis of G
/// (basis vectors are the columns). μ is the spectrum of σ = κ^†κ in
/// descending order, so the basis is expected in the same order.
inline double weak_orthogonality_defect(const EntanglingOperator& kappa, const CMat& basis) {
  const int dg = kappa.dim_g();
  if (basis.rows() != dg || basis.cols() != dg) fail(ErrorCode::Shape, "basis must be dim_g x dim_g");
  if (max_abs(basis.adjoint() * basis - CMat::Identity(dg, dg)) > 1e-9) {
    fail(ErrorCode::Domain, "basis is not orthonormal");
  }
  const CMat sigma = kappa.sigma();
  const CMat gram = basis.adjoint() * sigma * basis;  // gram(m,n) = tr ψ(m)^†ψ(n)
  const RVec mu = herm_eigenvalues(sigma);
  double worst = 0.0;
  for (int m = 0; m < dg; ++m)
    for (int n = 0; n < dg; ++n)
      worst = std::max(worst, std::abs(gram(m, n) - (m == n ? Complex(mu(n)) : Complex(0.0))));
  return worst;
}

/// Defect of ψ(m)ψ(n)^† = ρ(n)δ_mn in the computational basis of G. Without
/// `parts` only the off-diagonal terms are measured.
inline double strong_orthogonality_defect(const EntanglingOperator& kappa,
                                          const std::optional<Decomposition>& parts = std::nullopt) {
  const int dg = kappa.dim_g();
  if (parts && (static_cast<int>(parts->size()) != dg || parts->dim() != kappa.dim_h())) {
    fail(ErrorCode::Shape, "strong_orthogonality_defect: decomposition does not match κ");
  }
  std::vector<CMat> psi;
  for (int n = 0; n < dg; ++n) psi.push_back(kappa.psi(n));
  double worst = 0.0;
  for (int m = 0; m < dg; ++m)
    for (int n = 0; n < dg; ++n) {
      const CMat prod = psi[static_cast<std::size_t>(m)] * psi[static_cast<std::size_t>(n)].adjoint();
      if (m != n) {
        worst = std::max(worst, max_abs(prod));
      } else if (parts) {
        worst = std::max(worst, max_abs(prod - parts->parts()[static_cast<std::size_t>(n)]));
      }
    }
  return worst;
}

}  // namespace entlab
