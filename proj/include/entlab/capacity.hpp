#pragma once

// Entangled mutual information of a channel for a fixed input (q-, d- and
// o-entanglements) and capacity estimates over inputs.
//
// The d- and o-suprema are searched: the analytic witnesses (Schatten
// decomposition, tracial and uniform inputs) are always evaluated, then seeded
// random decompositions and states. Searched values are lower bounds.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "entlab/entropy.hpp"
#include "entlab/random.hpp"

namespace entlab {

struct SamplerConfig {
  std::uint64_t seed = 0;
  int samples = 2000;               // random decompositions per ensemble size
  std::vector<int> ensemble_sizes;  // empty: (rank, rank+1, 2*rank)
  int state_samples = 500;          // random inputs for capacity sweeps
  int threads = 0;                  // 0: ENTLAB_THREADS or 1
};

/// Worker count: explicit setting, else ENTLAB_THREADS, else 1.
inline int worker_count(const SamplerConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("ENTLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

namespace detail {

// Evaluates f(0..count-1) on up to `workers` threads. Each index writes only
// its own slot, so results do not depend on scheduling.
inline std::vector<double> evaluate_all(std::size_t count, int workers, const std::function<double(std::size_t)>& f) {
  std::vector<double> values(count);
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (w <= 1) {
    for (std::size_t i = 0; i < count; ++i) values[i] = f(i);
    return values;
  }
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += w) values[i] = f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return values;
}

// Index of the maximum; ties go to the lowest index.
inline std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace detail

/// I((I⊗Λ) d_compound(dec)) using the block-diagonal form of the d-compound:
/// H(μ) + S(Λ Σρ(n)) - Σ_n S(Λ ρ(n)), entropies of unnormalized blocks.
inline double d_information(const Decomposition& dec, const Channel& channel) {
  if (dec.dim() != channel.dim_in()) fail(ErrorCode::Shape, "d_information: decomposition does not match channel");
  double s_b = 0.0;
  double s_ba = 0.0;
  CMat total = CMat::Zero(channel.dim_out(), channel.dim_out());
  for (const CMat& part : dec.parts()) {
    const double mu = trace_real(part);
    if (mu > tol::kSupport) s_b -= mu * std::log(mu);
    const CMat out = channel.map(part);
    s_ba += entropy_of_matrix(out);
    total += out;
  }
  return detail::clamp_rounding(s_b + entropy_of_matrix(total) - s_ba);
}

struct InfoWitness {
  double value;
  Decomposition decomposition;
};

/// I_q(ρ₀, Λ): mutual information of the standard compound state sent through I⊗Λ.
inline double info_q(const DensityState& rho0, const Channel& channel) {
  return mutual_information(apply_to_compound(channel, standard_compound(rho0))).value;
}

namespace detail {

struct EigenGroup {
  std::size_t block;
  std::vector<Eigen::Index> columns;  // indices into that block's eigensystem
};

struct BlockSpectrum {
  std::vector<EigenSystem> systems;  // one per block
  std::vector<EigenGroup> groups;    // eigenvalue clusters above the support cutoff
};

inline BlockSpectrum block_spectrum(const DensityState& rho, double degeneracy_tol = 1e-9) {
  BlockSpectrum bs;
  for (std::size_t i = 0; i < rho.structure().block_count(); ++i) {
    bs.systems.push_back(herm_eig(rho.block(i)));
    const RVec& lambda = bs.systems.back().values;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
      if (lambda(k) < tol::kSupport) break;
      if (!bs.groups.empty() && bs.groups.back().block == i &&
          std::abs(lambda(bs.groups.back().columns.front()) - lambda(k)) <= degeneracy_tol) {
        bs.groups.back().columns.push_back(k);
      } else {
        bs.groups.push_back({i, {k}});
      }
    }
  }
  return bs;
}

// Orthogonal pure decomposition with each degenerate eigenspace rotated by
// the given unitaries (identity when `rotations` is empty).
inline Decomposition rotated_schatten(const DensityState& rho, const BlockSpectrum& bs,
                                      const std::vector<CMat>& rotations) {
  const int n = rho.rank();
  std::vector<CMat> parts;
  for (std::size_t g = 0; g < bs.groups.size(); ++g) {
    const EigenGroup& group = bs.groups[g];
    const EigenSystem& es = bs.systems[group.block];
    const int o = rho.structure().offset(group.block);
    const auto size = static_cast<Eigen::Index>(group.columns.size());
    CMat vecs(es.vectors.rows(), size);
    for (Eigen::Index c = 0; c < size; ++c) vecs.col(c) = es.vectors.col(group.columns[static_cast<std::size_t>(c)]);
    if (!rotations.empty()) vecs = vecs * rotations[g];
    for (Eigen::Index c = 0; c < size; ++c) {
      CVec v = CVec::Zero(n);
      v.segment(o, vecs.rows()) = vecs.col(c);
      const double lambda = es.values(group.columns[static_cast<std::size_t>(c)]);
      parts.push_back(lambda * v * v.adjoint());
    }
  }
  return Decomposition(std::move(parts), DecompositionKind::Orthogonal);
}

inline constexpr std::uint64_t kStreamOrtho = 0x6f;
inline constexpr std::uint64_t kStreamStates = 0x5354;

}  // namespace detail

/// I_o(ρ₀, Λ): o-compound of a Schatten decomposition. Inside degenerate
/// eigenspaces the eigenbasis is not unique, so `cfg.samples` Haar rotations
/// of those spaces are tried as well.
inline InfoWitness info_o(const DensityState& rho0, const Channel& channel, const SamplerConfig& cfg) {
  const detail::BlockSpectrum bs = detail::block_spectrum(rho0);
  Decomposition best = detail::rotated_schatten(rho0, bs, {});
  double best_value = d_information(best, channel);
  const bool degenerate = std::any_of(bs.groups.begin(), bs.groups.end(),
                                      [](const detail::EigenGroup& g) { return g.columns.size() > 1; });
  if (!degenerate || cfg.samples < 1) return {best_value, std::move(best)};

  auto rotations_for = [&](std::size_t j) {
    Rng rng(derive_seed(cfg.seed, detail::kStreamOrtho, j));
    std::vector<CMat> rot;
    for (const auto& g : bs.groups) rot.push_back(haar_unitary(static_cast<int>(g.columns.size()), rng));
    return rot;
  };
  const auto values = detail::evaluate_all(static_cast<std::size_t>(cfg.samples), worker_count(cfg), [&](std::size_t j) {
    return d_information(detail::rotated_schatten(rho0, bs, rotations_for(j)), channel);
  });
  const std::size_t j = detail::argmax(values);
  if (values[j] > best_value) {
    best_value = values[j];
    best = detail::rotated_schatten(rho0, bs, rotations_for(j));
  }
  return {best_value, std::move(best)};
}

/// Pure decomposition η(n) = Σ_k V_i[n,k] √λ_k e_k built block by block from
/// the Schatten terms of ρ₀ (block order, descending eigenvalue). Each V_i is
/// an m_i x r_i isometry, r_i the number of Schatten terms of block i.
inline Decomposition decomposition_from_isometries(const DensityState& rho0, const std::vector<CMat>& isometries) {
  const std::vector<SchattenTerm> terms = schatten(rho0);
  const std::size_t blocks = rho0.structure().block_count();
  if (isometries.size() != blocks) fail(ErrorCode::Shape, "need one isometry per block");
  std::vector<CMat> parts;
  std::size_t t = 0;
  for (std::size_t i = 0; i < blocks; ++i) {
    std::size_t first = t;
    while (t < terms.size() && terms[t].block == i) ++t;
    const CMat& v = isometries[i];
    const auto r = static_cast<Eigen::Index>(t - first);
    if (v.cols() != r) fail(ErrorCode::Shape, "isometry column count must equal the block's Schatten rank");
    if (r == 0) continue;
    if (max_abs(v.adjoint() * v - CMat::Identity(r, r)) > 1e-10) fail(ErrorCode::Domain, "mixing matrix is not an isometry");
    for (Eigen::Index row = 0; row < v.rows(); ++row) {
      CVec eta = CVec::Zero(rho0.rank());
      for (Eigen::Index k = 0; k < r; ++k) {
        const SchattenTerm& term = terms[first + static_cast<std::size_t>(k)];
        eta += v(row, k) * std::sqrt(term.weight) * term.vector;
      }
      parts.push_back(eta * eta.adjoint());
    }
  }
  return Decomposition(std::move(parts), DecompositionKind::Pure);
}

/// Number of Schatten terms of ρ₀.
inline int schatten_rank(const DensityState& rho0) { return static_cast<int>(schatten(rho0).size()); }

/// Random pure decomposition of ρ₀ into m parts. Every block with support
/// first receives as many parts as its Schatten rank; each remaining part is
/// assigned to a block with probability ν(i). Mixing isometries are Haar.
inline Decomposition decomposition_sampler(const DensityState& rho0, int m, std::uint64_t seed) {
  const std::vector<SchattenTerm> terms = schatten(rho0);
  const int r = static_cast<int>(terms.size());
  if (m < r) fail(ErrorCode::Domain, "ensemble size " + std::to_string(m) + " is below the state rank " + std::to_string(r));
  const std::size_t blocks = rho0.structure().block_count();
  std::vector<int> rank_of(blocks, 0);
  for (const SchattenTerm& t : terms) ++rank_of[t.block];
  std::vector<int> parts_of = rank_of;

  Rng rng(seed);
  std::vector<double> nu(blocks, 0.0);
  for (std::size_t i = 0; i < blocks; ++i) nu[i] = rank_of[i] > 0 ? rho0.weight(i) : 0.0;
  std::discrete_distribution<std::size_t> pick(nu.begin(), nu.end());
  for (int extra = 0; extra < m - r; ++extra) ++parts_of[pick(rng)];

  std::vector<CMat> isometries;
  for (std::size_t i = 0; i < blocks; ++i) isometries.push_back(haar_isometry(parts_of[i], rank_of[i], rng));
  return decomposition_from_isometries(rho0, isometries);
}

inline std::vector<int> ensemble_schedule(const SamplerConfig& cfg, int rank) {
  std::vector<int> sizes = cfg.ensemble_sizes;
  if (sizes.empty()) sizes = {rank, rank + 1, 2 * rank};
  for (int m : sizes)
    if (m < rank) fail(ErrorCode::Domain, "ensemble size " + std::to_string(m) + " is below the state rank");
  std::vector<int> unique;
  for (int m : sizes)
    if (std::find(unique.begin(), unique.end(), m) == unique.end()) unique.push_back(m);
  return unique;
}

namespace detail {

inline InfoWitness improve_with_samples(const DensityState& rho0, const Channel& channel, const SamplerConfig& cfg,
                                       InfoWitness best) {
  const std::vector<int> sizes = ensemble_schedule(cfg, schatten_rank(rho0));
  const auto per_size = static_cast<std::size_t>(std::max(cfg.samples, 0));
  if (per_size == 0) return best;

  auto seed_of = [&](std::size_t idx) { return derive_seed(cfg.seed, idx / per_size + 1, idx % per_size); };
  auto size_of = [&](std::size_t idx) { return sizes[idx / per_size]; };
  const auto values = evaluate_all(sizes.size() * per_size, worker_count(cfg), [&](std::size_t idx) {
    return d_information(decomposition_sampler(rho0, size_of(idx), seed_of(idx)), channel);
  });
  const std::size_t idx = argmax(values);
  if (values[idx] > best.value) {
    best = {values[idx], decomposition_sampler(rho0, size_of(idx), seed_of(idx))};
  }
  return best;
}

}  // namespace detail

/// I_d(ρ₀, Λ) lower bound: best of the o-witness and `cfg.samples` random
/// pure decompositions per ensemble size.
inline InfoWitness info_d_sup(const DensityState& rho0, const Channel& channel, const SamplerConfig& cfg) {
  return detail::improve_with_samples(rho0, channel, cfg, info_o(rho0, channel, cfg));
}

struct InfoBundle {
  double iq;
  double id;
  double io;
  Decomposition witness_id;
  Decomposition witness_io;
};

/// I_q, I_d, I_o for one input. Throws a Consistency error if the ordering
/// I_q >= I_d >= I_o is violated by more than `ordering_tol`.
inline InfoBundle info_bundle(const DensityState& rho0, const Channel& channel, const SamplerConfig& cfg,
                              double ordering_tol = 1e-7) {
  const double iq = info_q(rho0, channel);
  InfoWitness o = info_o(rho0, channel, cfg);
  InfoWitness d = detail::improve_with_samples(rho0, channel, cfg, o);
  if (iq + ordering_tol < d.value || d.value + ordering_tol < o.value) {
    fail(ErrorCode::Consistency, "ordering I_q >= I_d >= I_o violated: " + std::to_string(iq) + ", " +
                                     std::to_string(d.value) + ", " + std::to_string(o.value));
  }
  return {iq, d.value, o.value, std::move(d.decomposition), std::move(o.decomposition)};
}

enum class CapacityKind { Q, D, O };

struct CapacityEstimate {
  double value;
  DensityState argmax;
  std::string witness;  // "tracial", "uniform", "extreme", or "random"
};

/// Lower-bound estimate of C_q, C (= C_d) or C_o. Candidates: the tracial
/// state, the uniform state I/rank, the rank-one projectors of the tracial
/// blocks' Schatten decompositions, and `cfg.state_samples` random states.
inline CapacityEstimate capacity_estimate(const Channel& channel, CapacityKind kind, const SamplerConfig& cfg) {
  const BlockStructure& a = channel.structure_in();
  auto value_of = [&](const DensityState& rho, const SamplerConfig& c) {
    switch (kind) {
      case CapacityKind::Q: return info_q(rho, channel);
      case CapacityKind::D: return info_d_sup(rho, channel, c).value;
      case CapacityKind::O: return info_o(rho, channel, c).value;
    }
    return 0.0;
  };

  std::vector<std::pair<DensityState, std::string>> fixed;
  fixed.emplace_back(tracial_state(a), "tracial");
  fixed.emplace_back(uniform_state(a), "uniform");
  for (std::size_t i = 0; i < a.block_count(); ++i)
    for (int k = 0; k < a.dim(i); ++k) {
      std::vector<CMat> blocks;
      for (std::size_t j = 0; j < a.block_count(); ++j) blocks.push_back(CMat::Zero(a.dim(j), a.dim(j)));
      blocks[i](k, k) = 1.0;
      fixed.emplace_back(DensityState(a, std::move(blocks)), "extreme");
    }

  std::optional<CapacityEstimate> best;
  for (auto& [rho, label] : fixed) {
    const double v = value_of(rho, cfg);
    if (!best || v > best->value) best = CapacityEstimate{v, rho, label};
  }

  auto state_of = [&](std::size_t j) {
    Rng rng(derive_seed(cfg.seed, detail::kStreamStates, j));
    return random_state(a, rng);
  };
  const auto count = static_cast<std::size_t>(std::max(cfg.state_samples, 0));
  if (count > 0) {
    // Parallelism is spent on the state sweep; the inner search runs serially.
    SamplerConfig inner = cfg;
    inner.threads = 1;
    const auto values = detail::evaluate_all(count, worker_count(cfg), [&](std::size_t j) { return value_of(state_of(j), inner); });
    const std::size_t j = detail::argmax(values);
    if (values[j] > best->value) best = CapacityEstimate{values[j], state_of(j), "random"};
  }
  return std::move(*best);
}

namespace detail {

// 3x2 isometry from five angles: first column real and nonnegative (row
// phases are irrelevant for the decomposition), second column a unit vector
// in the complement of the first.
inline CMat isometry_3x2(double a, double b, double c, double d, double e) {
  CVec first(3);
  first << std::cos(a), std::sin(a) * std::cos(b), std::sin(a) * std::sin(b);
  const CMat first_col = first;
  const Eigen::HouseholderQR<CMat> qr(first_col);
  const CMat q = qr.householderQ();
  const CVec second = std::polar(1.0, e) * (std::cos(c) * q.col(1) + std::polar(std::sin(c), d) * q.col(2));
  CMat v(3, 2);
  v.col(0) = first;
  v.col(1) = second;
  return v;
}

inline double grid_angle(int i, int count, double span, bool closed) {
  return span * i / (closed ? std::max(count - 1, 1) : count);
}

}  // namespace detail

/// Exhaustive grid search of the d-compound information over pure
/// decompositions of a single-block state of dimension <= 2, for ensemble
/// sizes rank..3. Ensembles of two use a resolution x resolution grid over
/// the 2x2 mixing unitaries; ensembles of three use a five-angle grid with
/// max(4, resolution/8) points per angle. Test oracle, not a production path.
inline double bruteforce_info_oracle(const DensityState& rho0, const Channel& channel, int resolution) {
  if (rho0.structure().block_count() != 1 || rho0.structure().dim(0) > 2) {
    fail(ErrorCode::Refused, "bruteforce oracle supports single blocks of dimension <= 2");
  }
  if (resolution < 2) fail(ErrorCode::Domain, "oracle resolution must be >= 2");
  const int r = schatten_rank(rho0);
  constexpr double kPi = 3.14159265358979323846;
  auto eval = [&](const CMat& v) { return d_information(decomposition_from_isometries(rho0, {v}), channel); };

  double best = eval(CMat::Identity(r, r));
  if (r == 1) {
    for (int m = 2; m <= 3; ++m) {
      CMat v = CMat::Zero(m, 1);
      v(0, 0) = 1.0;
      best = std::max(best, eval(v));
    }
    return best;
  }
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j) {
      const double theta = detail::grid_angle(i, resolution, kPi / 2, true);
      const double phi = detail::grid_angle(j, resolution, 2 * kPi, false);
      CMat v(2, 2);
      v << std::cos(theta), -std::polar(std::sin(theta), phi), std::sin(theta), std::polar(std::cos(theta), phi);
      best = std::max(best, eval(v));
    }
  const int k = std::max(4, resolution / 8);
  for (int ia = 0; ia < k; ++ia)
    for (int ib = 0; ib < k; ++ib)
      for (int ic = 0; ic < k; ++ic)
        for (int id = 0; id < k; ++id)
          for (int ie = 0; ie < k; ++ie) {
            const CMat v = detail::isometry_3x2(
                detail::grid_angle(ia, k, kPi / 2, true), detail::grid_angle(ib, k, kPi / 2, true),
                detail::grid_angle(ic, k, kPi / 2, true), detail::grid_angle(id, k, 2 * kPi, false),
                detail::grid_angle(ie, k, 2 * kPi, false));
            best = std::max(best, eval(v));
          }
  return best;
}

}  // namespace entlab
