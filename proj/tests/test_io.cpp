#include <gtest/gtest.h>

#include "entlab/io.hpp"

using namespace entlab;
using io::json;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

}  // namespace

TEST(Json, MatrixRoundTripIsExact) {
  Rng rng(1);
  const CMat m = ginibre(3, 4, rng) * 1e-3 + ginibre(3, 4, rng);
  const CMat back = io::matrix_from_json(json::parse(io::matrix_to_json(m).dump()));
  EXPECT_EQ(back, m);
}

TEST(Json, MatrixAcceptsPlainReals) {
  const CMat m = io::matrix_from_json(json::parse("[[1, [0, 2]], [0.5, 3]]"));
  EXPECT_EQ(m(0, 1), Complex(0, 2));
  EXPECT_EQ(m(1, 0), Complex(0.5, 0));
}

TEST(Json, MatrixErrors) {
  for (const char* bad : {"[]", "[[]]", "[[1, 2], [3]]", "[[\"a\"]]", "[[[1, 2, 3]]]", "5"}) {
    EXPECT_EQ(code_of([&] { io::matrix_from_json(json::parse(bad)); }), ErrorCode::Config) << bad;
  }
}

TEST(Json, StateAndStructureRoundTrip) {
  Rng rng(2);
  const DensityState rho = random_state(BlockStructure({2, 1}), rng);
  const json j = json::parse(io::state_to_json(rho).dump());
  const DensityState back = io::state_from_json(j, BlockStructure({2, 1}));
  EXPECT_EQ(back.full(), rho.full());
  EXPECT_EQ(io::structure_from_json(io::structure_to_json(rho.structure())), rho.structure());
  EXPECT_EQ(code_of([] { io::structure_from_json(json::parse(R"({"blocks": [2, 1.5]})")); }), ErrorCode::Config);
  EXPECT_EQ(code_of([] { io::structure_from_json(json::parse(R"({"dims": [2]})")); }), ErrorCode::Config);
}

TEST(Json, ChannelRoundTrip) {
  const Channel ch = amplitude_damping(0.3);
  const Channel back = io::channel_from_json(json::parse(io::channel_to_json(ch).dump()));
  ASSERT_EQ(back.kraus().size(), ch.kraus().size());
  for (std::size_t k = 0; k < ch.kraus().size(); ++k) EXPECT_EQ(back.kraus()[k], ch.kraus()[k]);
  EXPECT_EQ(back.structure_out(), ch.structure_out());
}

TEST(Json, InstrumentDecompositionCompoundAmplitude) {
  const Instrument ins = projective_instrument(CMat::Identity(2, 2));
  EXPECT_EQ(io::instrument_from_json(io::instrument_to_json(ins)).ops().size(), 2u);

  const Decomposition dec = schatten_decomposition(tracial_state(BlockStructure({3})));
  const Decomposition d2 = io::decomposition_from_json(json::parse(io::decomposition_to_json(dec).dump()));
  EXPECT_EQ(d2.kind(), DecompositionKind::Orthogonal);
  EXPECT_EQ(d2.size(), 3u);
  EXPECT_EQ(code_of([] { io::kind_from_string("fancy"); }), ErrorCode::Config);

  const CompoundState omega = standard_compound(tracial_state(BlockStructure({2})));
  EXPECT_EQ(io::compound_from_json(io::compound_to_json(omega)).omega(), omega.omega());

  Rng rng(3);
  const AmplitudeOperator u = random_amplitude(2, 3, 2, rng);
  const AmplitudeOperator u2 = io::amplitude_from_json(json::parse(io::amplitude_to_json(u).dump()));
  EXPECT_EQ(u2.matrix(), u.matrix());
  EXPECT_EQ(u2.dim_h(), 3);
}

TEST(Json, ReportRoundTripIncludingInfinity) {
  EntropyReport r = EntropyReport::of(0.25);
  r.breakdown["S_B"] = 0.5;
  const EntropyReport back = io::report_from_json(json::parse(io::report_to_json(r).dump()));
  EXPECT_EQ(back.value, 0.25);
  EXPECT_EQ(back.breakdown.at("S_B"), 0.5);

  const json inf = io::report_to_json(EntropyReport::infinite());
  EXPECT_EQ(inf.at("value"), "inf");
  EXPECT_FALSE(io::report_from_json(inf).finite);
  EXPECT_EQ(code_of([] { io::report_from_json(json::parse(R"({"value": "nan"})")); }), ErrorCode::Config);
}

TEST(Json, SamplerRoundTripAndValidation) {
  SamplerConfig c;
  c.seed = 18446744073709551557ULL;
  c.samples = 17;
  c.ensemble_sizes = {2, 5};
  c.state_samples = 3;
  const SamplerConfig back = io::sampler_from_json(json::parse(io::sampler_to_json(c).dump()));
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.samples, 17);
  EXPECT_EQ(back.ensemble_sizes, c.ensemble_sizes);
  EXPECT_EQ(back.state_samples, 3);
  EXPECT_EQ(code_of([] { io::sampler_from_json(json::parse(R"({"samples": 0})")); }), ErrorCode::Config);
  EXPECT_EQ(code_of([] { io::sampler_from_json(json::parse(R"({"ensemble_sizes": [0]})")); }), ErrorCode::Config);
}

TEST(Json, BundleShape) {
  const BlockStructure q({2});
  SamplerConfig cfg;
  cfg.samples = 5;
  const json j = io::bundle_to_json(info_bundle(tracial_state(q), Channel::identity(q), cfg), cfg);
  for (const char* key : {"iq", "id", "io", "witness_id", "witness_io", "config"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j.at("config").at("samples"), 5);
}
