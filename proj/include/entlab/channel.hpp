#pragma once

// Quantum channels in Kraus form and diagonal measurement instruments.
//
// A channel's environment dilation Y: H₀⊗F₊ -> H is carried as the Kraus
// family Y_k = Y(I⊗|k>), so the noise space is the Kraus index.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "entlab/entangle.hpp"

namespace entlab {

class Channel {
 public:
  Channel(std::vector<CMat> kraus, BlockStructure structure_in, BlockStructure structure_out)
      : kraus_(std::move(kraus)), in_(std::move(structure_in)), out_(std::move(structure_out)) {
    if (kraus_.empty()) fail(ErrorCode::Domain, "channel needs at least one Kraus operator");
    const int din = in_.rank(), dout = out_.rank();
    CMat completeness = CMat::Zero(din, din);
    for (const CMat& y : kraus_) {
      if (y.rows() != dout || y.cols() != din) {
        fail(ErrorCode::Shape, "Kraus operator must be " + std::to_string(dout) + "x" + std::to_string(din));
      }
      require_finite(y, "Kraus operator");
      completeness += y.adjoint() * y;
    }
    const double defect = max_abs(completeness - CMat::Identity(din, din));
    if (defect > tol::kTrace) {
      fail(ErrorCode::Domain, "Kraus operators are not trace preserving (defect " + std::to_string(defect) + ")");
    }
    check_block_compatibility();
  }

  static Channel identity(const BlockStructure& a) {
    return Channel({CMat::Identity(a.rank(), a.rank())}, a, a);
  }

  const std::vector<CMat>& kraus() const { return kraus_; }
  const BlockStructure& structure_in() const { return in_; }
  const BlockStructure& structure_out() const { return out_; }
  int dim_in() const { return in_.rank(); }
  int dim_out() const { return out_.rank(); }

  /// One Kraus operator that is an isometry.
  bool deterministic() const { return kraus_.size() == 1; }

  /// Σ_k Y_k x Y_k^† on raw matrices.
  CMat map(const CMat& x) const {
    CMat out = CMat::Zero(dim_out(), dim_out());
    for (const CMat& y : kraus_) out += y * x * y.adjoint();
    return out;
  }

 private:
  // Every matrix unit inside an input block must land block-diagonally in the
  // output structure, otherwise states on A° are not sent to states on A.
  void check_block_compatibility() const {
    if (out_.block_count() == 1) return;
    for (std::size_t i = 0; i < in_.block_count(); ++i) {
      const int o = in_.offset(i), d = in_.dim(i);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          CMat unit = CMat::Zero(dim_in(), dim_in());
          unit(o + r, o + c) = 1.0;
          if (out_.off_block_mass(map(unit)) > 1e-10) {
            fail(ErrorCode::Structure, "channel output leaves the block structure " + describe(out_));
          }
        }
    }
  }

  std::vector<CMat> kraus_;
  BlockStructure in_;
  BlockStructure out_;
};

inline DensityState apply(const Channel& channel, const DensityState& rho0) {
  if (!(rho0.structure() == channel.structure_in())) {
    fail(ErrorCode::Shape, "state structure " + describe(rho0.structure()) + " does not match channel input " +
                               describe(channel.structure_in()));
  }
  return DensityState::from_matrix(channel.structure_out(), channel.map(rho0.full()));
}

/// (I⊗Λ)_* on the A side of a compound state.
inline CompoundState apply_to_compound(const Channel& channel, const CompoundState& omega) {
  if (!(omega.structure_a() == channel.structure_in())) {
    fail(ErrorCode::Shape, "compound A-structure does not match channel input");
  }
  const int dg = omega.dim_g();
  const CMat id = CMat::Identity(dg, dg);
  const int n = dg * channel.dim_out();
  CMat out = CMat::Zero(n, n);
  for (const CMat& y : channel.kraus()) {
    const CMat lifted = kron(id, y);
    out += lifted * omega.omega() * lifted.adjoint();
  }
  return CompoundState(std::move(out), omega.structure_b(), channel.structure_out());
}

/// (K⊗I)_* on the B side of a compound state.
inline CompoundState apply_to_b_side(const Channel& channel, const CompoundState& omega) {
  if (!(omega.structure_b() == channel.structure_in())) {
    fail(ErrorCode::Shape, "compound B-structure does not match channel input");
  }
  const int dh = omega.dim_h();
  const CMat id = CMat::Identity(dh, dh);
  const int n = channel.dim_out() * dh;
  CMat out = CMat::Zero(n, n);
  for (const CMat& y : channel.kraus()) {
    const CMat lifted = kron(y, id);
    out += lifted * omega.omega() * lifted.adjoint();
  }
  return CompoundState(std::move(out), channel.structure_out(), omega.structure_a());
}

// Common channels.

inline Channel isometric_channel(const CMat& y, const BlockStructure& in, const BlockStructure& out) {
  if (max_abs(y.adjoint() * y - CMat::Identity(y.cols(), y.cols())) > tol::kTrace) {
    fail(ErrorCode::Domain, "isometric_channel: operator is not an isometry");
  }
  return Channel({y}, in, out);
}

inline CMat pauli(char which) {
  CMat p(2, 2);
  switch (which) {
    case 'I': p << 1, 0, 0, 1; break;
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default: fail(ErrorCode::Domain, "unknown Pauli label");
  }
  return p;
}

/// ρ -> (1-p)ρ + p I/2; p = 1 is the fully depolarizing channel ½{I,X,Y,Z}.
inline Channel depolarizing_qubit(double p = 1.0) {
  if (p < 0.0 || p > 1.0) fail(ErrorCode::Domain, "depolarizing parameter must lie in [0,1]");
  const auto q = BlockStructure::simple(2);
  return Channel({std::sqrt(1.0 - 0.75 * p) * pauli('I'), std::sqrt(p / 4.0) * pauli('X'),
                  std::sqrt(p / 4.0) * pauli('Y'), std::sqrt(p / 4.0) * pauli('Z')},
                 q, q);
}

/// Dephasing in the computational basis with strength p (p = 1 removes all coherences).
inline Channel dephasing_qubit(double p = 1.0) {
  if (p < 0.0 || p > 1.0) fail(ErrorCode::Domain, "dephasing parameter must lie in [0,1]");
  const auto q = BlockStructure::simple(2);
  return Channel({std::sqrt(1.0 - p / 2.0) * pauli('I'), std::sqrt(p / 2.0) * pauli('Z')}, q, q);
}

inline Channel amplitude_damping(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) fail(ErrorCode::Domain, "damping parameter must lie in [0,1]");
  CMat k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  const auto q = BlockStructure::simple(2);
  return Channel({k0, k1}, q, q);
}

/// Replaces every input by I/d on a single block of dimension d.
inline Channel completely_depolarizing(int d) {
  std::vector<CMat> kraus;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMat e = CMat::Zero(d, d);
      e(i, j) = 1.0 / std::sqrt(static_cast<double>(d));
      kraus.push_back(std::move(e));
    }
  const auto a = BlockStructure::simple(d);
  return Channel(std::move(kraus), a, a);
}

/// Instrument Ψ(n): H₀⊗F -> H with Σ_n Ψ(n)^†Ψ(n) = I.
class Instrument {
 public:
  Instrument(std::vector<CMat> ops, int dim_h0, int dim_f)
      : ops_(std::move(ops)), dim_h0_(dim_h0), dim_f_(dim_f) {
    if (ops_.empty()) fail(ErrorCode::Domain, "instrument needs at least one operator");
    const int din = dim_h0 * dim_f;
    const Eigen::Index dh = ops_.front().rows();
    CMat completeness = CMat::Zero(din, din);
    for (const CMat& op : ops_) {
      if (op.cols() != din || op.rows() != dh) fail(ErrorCode::Shape, "instrument operators have inconsistent shapes");
      require_finite(op, "instrument operator");
      completeness += op.adjoint() * op;
    }
    if (max_abs(completeness - CMat::Identity(din, din)) > tol::kTrace) {
      fail(ErrorCode::Domain, "instrument is not normalized: Σ Ψ(n)^†Ψ(n) != I");
    }
  }

  const std::vector<CMat>& ops() const { return ops_; }
  int dim_h0() const { return dim_h0_; }
  int dim_f() const { return dim_f_; }
  int dim_h() const { return static_cast<int>(ops_.front().rows()); }

 private:
  std::vector<CMat> ops_;
  int dim_h0_;
  int dim_f_;
};

/// Projective instrument onto an orthonormal basis (columns) of C^d.
inline Instrument projective_instrument(const CMat& basis) {
  std::vector<CMat> ops;
  for (Eigen::Index n = 0; n < basis.cols(); ++n) ops.push_back(basis.col(n) * basis.col(n).adjoint());
  return Instrument(std::move(ops), static_cast<int>(basis.rows()), 1);
}

/// Projective instrument onto an eigenbasis of ρ; its outcomes reproduce the
/// Schatten decomposition.
inline Instrument schatten_instrument(const DensityState& rho) {
  return projective_instrument(herm_eig(rho.full()).vectors);
}

struct Posterior {
  double probability;  // μ(n)
  CMat state;          // ρ_n
  std::size_t outcome;
};

/// μ(n) = tr Ψ(n)(ρ₀⊗τ)Ψ(n)^† and ρ_n = Ψ(n)(ρ₀⊗τ)Ψ(n)^†/μ(n). Outcomes with
/// μ(n) <= 1e-12 are omitted.
inline std::vector<Posterior> posterior_states(const Instrument& ins, const CMat& rho0, const CMat& tau) {
  if (rho0.rows() != ins.dim_h0() || tau.rows() != ins.dim_f()) {
    fail(ErrorCode::Shape, "posterior_states: state dimensions do not match the instrument");
  }
  const CMat joint = kron(rho0, tau);
  std::vector<Posterior> out;
  double total = 0.0;
  for (std::size_t n = 0; n < ins.ops().size(); ++n) {
    const CMat& op = ins.ops()[n];
    const CMat unnormalized = op * joint * op.adjoint();
    const double mu = trace_real(unnormalized);
    total += mu;
    if (mu > tol::kSupport) out.push_back({mu, hermitize(unnormalized / mu), n});
  }
  if (std::abs(total - 1.0) > tol::kTrace) fail(ErrorCode::Domain, "posterior probabilities do not sum to 1");
  return out;
}

/// Default reference state τ = |0><0| on F.
inline std::vector<Posterior> posterior_states(const Instrument& ins, const CMat& rho0) {
  CMat tau = CMat::Zero(ins.dim_f(), ins.dim_f());
  tau(0, 0) = 1.0;
  return posterior_states(ins, rho0, tau);
}

/// True iff Ψ(m)^†Ψ(n) = 0 for all m != n, i.e. posteriors are orthogonal
/// for every input.
inline bool orthogonality_of_posteriors(const Instrument& ins) {
  const auto& ops = ins.ops();
  for (std::size_t m = 0; m < ops.size(); ++m)
    for (std::size_t n = 0; n < ops.size(); ++n)
      if (m != n && max_abs(ops[m].adjoint() * ops[n]) >= 1e-10) return false;
  return true;
}

}  // namespace entlab
