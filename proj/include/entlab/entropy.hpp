#pragma once

// Entropy functionals in nats.

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "entlab/channel.hpp"

namespace entlab {

/// A possibly infinite information quantity. Infinity is a tag, never a
/// floating-point Inf, so sums of reports cannot produce NaN.
struct EntropyReport {
  double value = 0.0;
  bool finite = true;
  std::map<std::string, double> breakdown;

  static EntropyReport infinite() { return {0.0, false, {}}; }
  static EntropyReport of(double v) { return {v, true, {}}; }
};

inline double vn_entropy(const CMat& density) { return entropy_of_matrix(density); }

/// -tr ρ ln ρ over all blocks.
inline double vn_entropy(const DensityState& rho) {
  double s = 0.0;
  for (const CMat& b : rho.blocks()) s += entropy_of_matrix(b);
  return s;
}

namespace detail {
// Values proven nonnegative may come out as -1e-15; clamp only that noise.
inline double clamp_rounding(double v) { return (v < 0.0 && v >= -1e-9) ? 0.0 : v; }
}  // namespace detail

/// S(ω, φ) = tr ω(ln ω - ln φ); +∞ when ω has mass outside supp φ.
inline EntropyReport relative_entropy(const CMat& omega, const CMat& phi) {
  require_square(omega, "relative_entropy ω");
  require_square(phi, "relative_entropy φ");
  if (omega.rows() != phi.rows()) fail(ErrorCode::Shape, "relative_entropy: dimension mismatch");
  const EigenSystem phi_es = herm_eig(phi);
  double outside = 0.0;
  for (Eigen::Index k = 0; k < phi_es.values.size(); ++k) {
    if (phi_es.values(k) < -tol::kPsd) fail(ErrorCode::NotPsd, "relative_entropy: φ is not PSD");
    if (phi_es.values(k) < tol::kSupport) {
      const CVec v = phi_es.vectors.col(k);
      outside += (v.adjoint() * omega * v)(0, 0).real();
    }
  }
  if (outside > 1e-10) return EntropyReport::infinite();
  const double cross = (omega * spectral_fn(phi, SpectralFn::Ln)).trace().real();
  const double value = -entropy_of_matrix(omega) - cross;
  return EntropyReport::of(detail::clamp_rounding(value));
}

/// I(ω) = S(ω ‖ σ⊗ρ), evaluated as S(σ) + S(ρ) - S(ω).
inline EntropyReport mutual_information(const CompoundState& omega) {
  const int dg = omega.dim_g(), dh = omega.dim_h();
  const CMat sigma = partial_trace(omega.omega(), dg, dh, Side::Right);
  const CMat rho = partial_trace(omega.omega(), dg, dh, Side::Left);
  const double sb = entropy_of_matrix(sigma);
  const double sa = entropy_of_matrix(rho);
  const double sab = entropy_of_matrix(omega.omega());
  EntropyReport r = EntropyReport::of(detail::clamp_rounding(sb + sa - sab));
  r.breakdown = {{"S_B", sb}, {"S_A", sa}, {"S_BA", sab}};
  return r;
}

/// The same quantity through the relative-entropy definition; cross-check path.
inline EntropyReport mutual_information_direct(const CompoundState& omega) {
  const int dg = omega.dim_g(), dh = omega.dim_h();
  const CMat sigma = partial_trace(omega.omega(), dg, dh, Side::Right);
  const CMat rho = partial_trace(omega.omega(), dg, dh, Side::Left);
  return relative_entropy(omega.omega(), kron(sigma, rho));
}

/// H_A(ρ) = Σ_i (ν(i) ln ν(i) - 2 tr ρ(i) ln ρ(i)).
/// Breakdown: S_C = -Σ ν ln ν (centre) and H_A|C = -2 Σ ν(i) tr ρ_i ln ρ_i.
inline EntropyReport q_entropy(const DensityState& rho) {
  double s_centre = 0.0;
  double h_cond = 0.0;
  double value = 0.0;
  for (std::size_t i = 0; i < rho.structure().block_count(); ++i) {
    const double nu = rho.weight(i);
    if (nu <= tol::kSupport) continue;
    const double nu_ln_nu = nu * std::log(nu);
    const double tr_rho_ln_rho = -entropy_of_matrix(rho.block(i));
    value += nu_ln_nu - 2.0 * tr_rho_ln_rho;
    s_centre -= nu_ln_nu;
    h_cond += 2.0 * entropy_of_matrix(rho.normalized_block(i)) * nu;
  }
  EntropyReport r = EntropyReport::of(detail::clamp_rounding(value));
  r.breakdown = {{"S_C", s_centre}, {"H_A|C", h_cond}};
  return r;
}

/// H_B|A = H_B - I(ω), with H_B the q-entropy of the B-marginal.
inline EntropyReport conditional_q_entropy(const CompoundState& omega, double h_b) {
  const EntropyReport info = mutual_information(omega);
  if (!info.finite) return EntropyReport::infinite();
  EntropyReport r = EntropyReport::of(h_b - info.value);
  r.breakdown = {{"H_B", h_b}, {"I", info.value}};
  return r;
}

inline EntropyReport conditional_q_entropy(const CompoundState& omega) {
  return conditional_q_entropy(omega, q_entropy(marginals(omega).b).value);
}

/// Degree of disentanglement S_B|A = S(σ) - I(ω); negative values witness
/// entanglement.
inline double disentanglement(const CompoundState& omega) {
  const EntropyReport info = mutual_information(omega);
  return info.breakdown.at("S_B") - info.value;
}

struct MonotonicityResult {
  double before;
  double after;
  bool ok;
};

/// Mutual information before and after K⊗I acts on the B side.
inline MonotonicityResult monotonicity_check(const CompoundState& omega, const Channel& k_on_b) {
  const double before = mutual_information(omega).value;
  const double after = mutual_information(apply_to_b_side(k_on_b, omega)).value;
  return {before, after, after <= before + 1e-8};
}

}  // namespace entlab
