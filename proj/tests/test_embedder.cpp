#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "vidmetrics/dist_metrics.hpp"
#include "vidmetrics/embedder.hpp"
#include "vidmetrics/error.hpp"
#include "vidmetrics/perturb.hpp"
#include "vidmetrics/synthgen.hpp"
#include "vidmetrics/tensor_io.hpp"

using namespace vidmetrics;
using vidmetrics::testing::random_video;
using vidmetrics::testing::temp_dir;

namespace {

VideoSet reversed(const VideoSet& v) {
  VideoSet out = v;
  for (std::size_t i = 0; i < v.n(); ++i) {
    for (std::size_t t = 0; t < v.t(); ++t) {
      const auto src = v.frame(i, v.t() - 1 - t);
      std::copy(src.begin(), src.end(), out.frame(i, t).begin());
    }
  }
  return out;
}

}  // namespace

TEST_CASE("pooled frame averages grayscale cells") {
  VideoSet v({1, 1, 32, 32, 3});
  // Pixel (y, x) channel ch = y + x + ch, so cell (gy, gx) covers y in
  // {2gy, 2gy+1}, x in {2gx, 2gx+1}, and its gray mean is (4gy + 4gx + 2 + 4) / 4 / 255.
  for (std::size_t y = 0; y < 32; ++y)
    for (std::size_t x = 0; x < 32; ++x)
      for (std::size_t ch = 0; ch < 3; ++ch) v.frame(0, 0)[(y * 32 + x) * 3 + ch] = static_cast<std::uint8_t>(y + x + ch);
  const auto p = pooled_frame(v, 0, 0);
  REQUIRE(p.size() == 256);
  for (std::size_t gy = 0; gy < 16; ++gy)
    for (std::size_t gx = 0; gx < 16; ++gx)
      CHECK(p[gy * 16 + gx] == doctest::Approx((2.0 * gy + 2.0 * gx + 1.0 + 1.0) / 255.0).epsilon(1e-12));
}

TEST_CASE("reference_embed shape, range and determinism") {
  const auto v = random_video({5, 4, 64, 64, 3}, 1);
  const auto e = reference_embed(v, 32, 9);
  CHECK(e.n() == 5);
  CHECK(e.d() == 32);
  for (float x : e.data()) {
    CHECK(x > -1.0f);
    CHECK(x < 1.0f);
  }
  CHECK(reference_embed(v, 32, 9) == e);
  CHECK_FALSE(reference_embed(v, 32, 10) == e);
  CHECK_THROWS_AS(reference_embed(random_video({1, 1, 64, 64, 3}, 1), 8, 0), Error);
  CHECK_THROWS_AS(reference_embed(random_video({1, 2, 8, 64, 3}, 1), 8, 0), Error);
}

TEST_CASE("identical videos embed identically; permutation permutes rows") {
  const auto one = random_video({1, 3, 16, 16, 1}, 4);
  std::vector<std::uint8_t> doubled(one.data().begin(), one.data().end());
  doubled.insert(doubled.end(), one.data().begin(), one.data().end());
  const auto e = reference_embed(VideoSet({2, 3, 16, 16, 1}, doubled), 8, 1);
  CHECK(std::ranges::equal(e.row(0), e.row(1)));

  const auto v = random_video({4, 3, 16, 16, 1}, 5);
  const auto ev = reference_embed(v, 8, 1);
  const std::vector<std::size_t> perm{3, 1, 0, 2};
  std::vector<std::uint8_t> permuted;
  for (auto i : perm) permuted.insert(permuted.end(), v.video(i).begin(), v.video(i).end());
  CHECK(reference_embed(VideoSet(v.shape(), permuted), 8, 1) == ev.select(perm));
}

TEST_CASE("frame reversal negates the mean difference and keeps the spreads") {
  const auto v = random_video({1, 6, 16, 16, 3}, 8);
  const auto r = reversed(v);
  const auto f = reference_features(v, 0);
  const auto fr = reference_features(r, 0);
  for (std::size_t k = 0; k < kPooledSize; ++k) {
    CHECK(fr[k] == doctest::Approx(f[k]).epsilon(1e-12));
    CHECK(fr[kPooledSize + k] == doctest::Approx(f[kPooledSize + k]).epsilon(1e-12));
    CHECK(fr[2 * kPooledSize + k] == doctest::Approx(-f[2 * kPooledSize + k]).epsilon(1e-12));
    CHECK(fr[3 * kPooledSize + k] == doctest::Approx(f[3 * kPooledSize + k]).epsilon(1e-12));
  }
  // Hand trace of the mean difference block: telescopes to (S_last - S_0) / (T - 1).
  const auto s0 = pooled_frame(v, 0, 0), s5 = pooled_frame(v, 0, 5);
  CHECK(f[2 * kPooledSize + 7] == doctest::Approx((s5[7] - s0[7]) / 5).epsilon(1e-12));
  CHECK_FALSE(reference_embed(v, 16, 2) == reference_embed(r, 16, 2));
}

TEST_CASE("avg_frame_embed aggregations") {
  const FrameEmbedder by_index = [](const VideoSet&, std::size_t i, std::size_t t) {
    return std::vector<double>{static_cast<double>(t * t), static_cast<double>(i), 1.0};
  };
  const auto v = random_video({2, 3, 16, 16, 1}, 1);
  const auto diff = avg_frame_embed(v, by_index, FrameEmbedAggregation::kPairwiseDiffMean);
  // (e2 - e0) / 2 = (4, 0, 0) / 2.
  CHECK(diff.row(1)[0] == 2.0f);
  CHECK(diff.row(1)[1] == 0.0f);
  const auto mean = avg_frame_embed(v, by_index, FrameEmbedAggregation::kMean);
  CHECK(mean.row(1)[0] == doctest::Approx(5.0 / 3.0));
  CHECK(mean.row(1)[1] == 1.0f);

  VideoSet constant({1, 4, 16, 16, 3});
  for (auto& b : constant.data()) b = 90;
  const auto frame_embed = reference_frame_embedder(12, 3);
  const auto single = frame_embed(constant, 0, 0);
  const auto m = avg_frame_embed(constant, frame_embed, FrameEmbedAggregation::kMean);
  for (std::size_t k = 0; k < 12; ++k) CHECK(m.row(0)[k] == doctest::Approx(single[k]).epsilon(1e-6));
  const auto d = avg_frame_embed(constant, frame_embed, FrameEmbedAggregation::kPairwiseDiffMean);
  for (float x : d.data()) CHECK(x == 0.0f);

  CHECK_THROWS_AS(avg_frame_embed(random_video({1, 1, 16, 16, 1}, 1), by_index,
                                  FrameEmbedAggregation::kPairwiseDiffMean),
                  Error);
}

TEST_CASE("embed_or_import dispatches on the spec") {
  const auto dir = temp_dir("embedder_import");
  std::vector<float> logits(3 * 400);
  for (std::size_t k = 0; k < logits.size(); ++k) logits[k] = static_cast<float>(k % 11) - 5.0f;
  save_embedding_file(EmbeddingSet(3, 400, logits), dir / "i3d.remb");
  const auto imported = embed_or_import({EmbedderKind::kImported, 0, 0}, dir / "i3d.remb");
  CHECK(imported.d() == 400);
  CHECK(imported.n() == 3);

  const auto v = random_video({3, 4, 32, 32, 3}, 2);
  const EmbedderSpec ref{EmbedderKind::kReference, 64, 5};
  const auto e = embed_or_import(ref, &v);
  CHECK(e.d() == 64);
  CHECK(embed_or_import(ref, &v) == e);
  CHECK_THROWS_AS(embed_or_import(ref, dir / "i3d.remb"), Error);
  CHECK_THROWS_AS(embed_or_import({EmbedderKind::kImported, 0, 0}, &v), Error);
}

TEST_CASE("every noise family at maximum intensity moves the embedding distribution") {
  ScenarioSpec spec;
  spec.t = 48;
  spec.h = 32;
  spec.w = 32;
  spec.seed = 21;
  const auto clean = gen_sprite_to_border(spec, 24);
  const auto base = reference_embed(clean, 16, 4);
  for (NoiseKind kind : kAllNoiseKinds) {
    const auto noisy = apply_noise(clean, {kind, max_intensity(kind), 6});
    CAPTURE(to_string(kind));
    CHECK(fvd(base, reference_embed(noisy, 16, 4)).value > 1e-6);
  }
}
