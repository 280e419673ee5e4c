#pragma once

// Seeded invariant battery: every property is evaluated on random instances
// and reports the worst deviation seen against its threshold.

#include <functional>
#include <string>
#include <vector>

#include "entlab/capacity.hpp"

namespace entlab::verify {

struct PropertyResult {
  std::string name;
  bool passed;
  double worst;      // largest violation measure observed
  double threshold;  // pass iff worst <= threshold
  int instances;
};

struct Budget {
  std::uint64_t seed = 0;
  int instances = 20;     // random instances per property
  int sampler_samples = 200;
};

namespace detail {

inline const std::vector<BlockStructure>& structures() {
  static const std::vector<BlockStructure> s{BlockStructure({2}), BlockStructure({3}), BlockStructure({1, 1}),
                                             BlockStructure({2, 1}), BlockStructure({2, 2})};
  return s;
}

inline PropertyResult run_property(const std::string& name, double threshold, const Budget& b, std::uint64_t stream,
                                   const std::function<double(Rng&, int)>& measure) {
  double worst = 0.0;
  for (int i = 0; i < b.instances; ++i) {
    Rng rng(derive_seed(b.seed, stream, static_cast<std::uint64_t>(i)));
    worst = std::max(worst, measure(rng, i));
  }
  return {name, worst <= threshold, worst, threshold, b.instances};
}

inline double matrix_unit_residual(const AmplitudeOperator& u, const EntanglingOperator& kappa) {
  double worst = 0.0;
  const int dg = u.dim_g(), dh = u.dim_h();
  for (int b1 = 0; b1 < dg; ++b1)
    for (int b2 = 0; b2 < dg; ++b2)
      for (int a1 = 0; a1 < dh; ++a1)
        for (int a2 = 0; a2 < dh; ++a2) {
          CMat eb = CMat::Zero(dg, dg), ea = CMat::Zero(dh, dh);
          eb(b1, b2) = 1.0;
          ea(a1, a2) = 1.0;
          const Complex lhs = kappa.state_value(eb, ea);
          const Complex rhs = (u.matrix().adjoint() * kron(eb, ea) * u.matrix()).trace();
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  return worst;
}

}  // namespace detail

/// ϖ(B⊗A) reproduced by κ on every matrix-unit pair, worst absolute error.
inline double reconstruction_residual(const AmplitudeOperator& u, const EntanglingOperator& kappa) {
  return detail::matrix_unit_residual(u, kappa);
}

inline std::vector<PropertyResult> run_battery(const Budget& b) {
  using detail::run_property;
  using detail::structures;
  std::vector<PropertyResult> out;

  out.push_back(run_property("kron_trace_and_partial_trace", 1e-12, b, 1, [](Rng& rng, int) {
    const CMat s = random_density(2, rng), r = random_density(3, rng), t = random_density(2, rng);
    const CMat sr = kron(s, r);
    return std::max({max_abs(kron(sr, t) - kron(s, kron(r, t))), std::abs(sr.trace() - s.trace() * r.trace()),
                     max_abs(partial_trace(sr, 2, 3, Side::Right) - s * r.trace()),
                     max_abs(partial_trace(sr, 2, 3, Side::Left) - r * s.trace())});
  }));

  out.push_back(run_property("herm_eig_reconstruction", 1e-10, b, 2, [](Rng& rng, int i) {
    const int n = 1 + (i * 7) % 16;
    const CMat g = ginibre(n, n, rng);
    const CMat h = hermitize(g);
    const EigenSystem es = herm_eig(h);
    return max_abs(es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint() - h);
  }));

  out.push_back(run_property("schatten_reassembly", 1e-10, b, 3, [](Rng& rng, int i) {
    const auto& a = structures()[static_cast<std::size_t>(i) % structures().size()];
    const DensityState rho = random_state(a, rng);
    CMat sum = CMat::Zero(a.rank(), a.rank());
    for (const auto& t : schatten(rho)) sum += t.weight * t.vector * t.vector.adjoint();
    return max_abs(sum - rho.full());
  }));

  out.push_back(run_property("entangling_operator_round_trip", 1e-10, b, 4, [](Rng& rng, int i) {
    const AmplitudeOperator u = random_amplitude(1 + i % 3, 1 + (i / 3) % 3, 1 + (i / 9) % 3, rng);
    const EntanglingOperator kappa = entangling_from_amplitude(u);
    const CMat omega = u.matrix() * u.matrix().adjoint();
    const CMat sigma_state = partial_trace(omega, u.dim_g(), u.dim_h(), Side::Right);
    const CMat rho_state = partial_trace(omega, u.dim_g(), u.dim_h(), Side::Left);
    return std::max({detail::matrix_unit_residual(u, kappa), max_abs(kappa.sigma() - transpose_tilde(sigma_state)),
                     max_abs(kappa.rho() - rho_state)});
  }));

  out.push_back(run_property("standard_compound_marginals", 1e-10, b, 5, [](Rng& rng, int i) {
    const auto& a = structures()[static_cast<std::size_t>(i) % structures().size()];
    const DensityState rho = random_state(a, rng);
    const Marginals m = marginals(standard_compound(rho));
    return std::max(max_abs(m.a.full() - rho.full()), max_abs(m.b.full() - transpose_tilde(rho.full())));
  }));

  out.push_back(run_property("q_entropy_closed_form", 1e-9, b, 6, [](Rng& rng, int i) {
    const auto& a = structures()[static_cast<std::size_t>(i) % structures().size()];
    const DensityState rho = random_state(a, rng);
    return std::abs(q_entropy(rho).value - mutual_information(standard_compound(rho)).value);
  }));

  out.push_back(run_property("q_entropy_dominates_von_neumann", 1e-9, b, 7, [](Rng& rng, int i) {
    const auto& a = structures()[static_cast<std::size_t>(i) % structures().size()];
    const DensityState rho = random_state(a, rng);
    const double h = q_entropy(rho).value, s = vn_entropy(rho);
    double excess = 0.0;
    for (std::size_t k = 0; k < a.block_count(); ++k)
      if (rho.weight(k) > tol::kSupport) excess += rho.weight(k) * vn_entropy(rho.normalized_block(k));
    return std::max(s - h, std::abs((h - s) - excess));
  }));

  out.push_back(run_property("klein_inequality", 1e-9, b, 8, [](Rng& rng, int i) {
    const int n = 1 + i % 8;
    const CMat w = random_density(n, rng), p = random_density(n, rng);
    const EntropyReport r = relative_entropy(w, p);
    return std::max(r.finite ? -r.value : 0.0, relative_entropy(w, w).value);
  }));

  out.push_back(run_property("mutual_information_two_routes", 1e-9, b, 9, [](Rng& rng, int i) {
    const AmplitudeOperator u = random_amplitude(2 + i % 2, 2, 1 + i % 4, rng);
    const CompoundState omega = compound_from_amplitude(u);
    return std::abs(mutual_information(omega).value - mutual_information_direct(omega).value);
  }));

  out.push_back(run_property("monotonicity_under_b_channels", 1e-8, b, 10, [](Rng& rng, int i) {
    const AmplitudeOperator u = random_amplitude(2, 2, 1 + i % 3, rng);
    const Channel k = random_channel(2, 2 + i % 2, 1 + i % 4, rng);
    const MonotonicityResult r = monotonicity_check(compound_from_amplitude(u), k);
    return std::max(0.0, r.after - r.before);
  }));

  out.push_back(run_property("channel_trace_and_positivity", 1e-10, b, 11, [](Rng& rng, int i) {
    const Channel ch = random_channel(2, 2, 1 + i % 4, rng);
    const DensityState rho = random_state(BlockStructure({2}), rng);
    const CompoundState omega = compound_from_amplitude(random_amplitude(2, 2, 2, rng));
    const CompoundState out = apply_to_compound(ch, omega);
    const RVec lambda = herm_eigenvalues(out.omega());
    return std::max({std::abs(trace_real(apply(ch, rho).full()) - 1.0), std::max(0.0, -lambda(lambda.size() - 1)),
                     max_abs(partial_trace(out.omega(), 2, 2, Side::Right) -
                             partial_trace(omega.omega(), 2, 2, Side::Right))});
  }));

  out.push_back(run_property("sampler_soundness", 1e-10, b, 12, [](Rng& rng, int i) {
    const auto& a = structures()[static_cast<std::size_t>(i) % structures().size()];
    const DensityState rho = random_state(a, rng);
    const int r = schatten_rank(rho);
    const Decomposition dec = decomposition_sampler(rho, r + i % 3, rng());
    return max_abs(dec.sum() - rho.full());
  }));

  const int samples = b.sampler_samples;
  out.push_back(run_property("information_ordering", 1e-8, b, 13, [samples](Rng& rng, int) {
    const Channel ch = random_channel(2, 2, 4, rng);
    const DensityState rho = random_state(BlockStructure({2}), rng);
    SamplerConfig cfg;
    cfg.seed = rng();
    cfg.samples = samples;
    const double iq = info_q(rho, ch);
    const double id = info_d_sup(rho, ch, cfg).value;
    const double io = info_o(rho, ch, cfg).value;
    return std::max({0.0, id - iq, io - id});
  }));

  out.push_back(run_property("deterministic_channel_collapse", 1e-9, b, 14, [](Rng& rng, int i) {
    const int din = 2 + i % 2, dout = din + 1 + i % 2;
    const Channel ch = isometric_channel(haar_isometry(dout, din, rng), BlockStructure({din}), BlockStructure({dout}));
    const DensityState rho = random_state(BlockStructure({din}), rng);
    SamplerConfig cfg;
    cfg.samples = 1;
    cfg.ensemble_sizes = {schatten_rank(rho)};
    return std::max({std::abs(info_q(rho, ch) - q_entropy(rho).value),
                     std::abs(info_o(rho, ch, cfg).value - vn_entropy(rho)),
                     std::abs(info_d_sup(rho, ch, cfg).value - vn_entropy(rho))});
  }));

  // Separable c-compounds with mixed σ_n must not beat the d-search.
  out.push_back(run_property("c_compounds_bounded_by_d_search", 1e-8, b, 15, [samples](Rng& rng, int) {
    const Channel ch = random_channel(2, 2, 3, rng);
    const BlockStructure q({2});
    const int n = 3;
    std::vector<double> mu = dirichlet_ones(n, rng);
    std::vector<DensityState> sig, rho_parts;
    CMat avg = CMat::Zero(2, 2);
    for (int k = 0; k < n; ++k) {
      sig.push_back(random_state(BlockStructure({n}), rng));
      rho_parts.push_back(random_state(q, rng));
      avg += mu[static_cast<std::size_t>(k)] * rho_parts.back().full();
    }
    const CompoundState c = apply_to_compound(ch, c_compound(sig, rho_parts, mu));
    const DensityState rho0 = DensityState::simple(avg);
    SamplerConfig cfg;
    cfg.seed = rng();
    cfg.samples = samples;
    return std::max(0.0, mutual_information(c).value - info_d_sup(rho0, ch, cfg).value);
  }));

  return out;
}

}  // namespace entlab::verify
