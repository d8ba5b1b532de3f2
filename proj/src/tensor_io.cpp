#include "vidmetrics/tensor_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "vidmetrics/error.hpp"
#include "vidmetrics/rng.hpp"

namespace vidmetrics {
namespace {

constexpr std::array<char, 4> kVideoMagic{'R', 'V', 'I', 'D'};
constexpr std::array<char, 4> kEmbedMagic{'R', 'E', 'M', 'B'};
constexpr std::size_t kVideoHeaderSize = 4 + 4 + 5 * 4 + 1;
constexpr std::size_t kEmbedHeaderSize = 4 + 4 + 2 * 4 + 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[pos + i]) << (8 * i);
  return v;
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > 0xFFFFFFFFu) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " exceeds u32 range");
  }
  return static_cast<std::uint32_t>(v);
}

// Shared header checks: magic, version, dtype, header length.
void check_header(std::span<const std::uint8_t> bytes, const std::array<char, 4>& magic,
                  std::size_t header_size, std::size_t dtype_pos, std::uint8_t dtype) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), magic.data(), 4) != 0) {
    throw Error(ErrorCode::kBadMagic,
                "expected magic \"" + std::string(magic.begin(), magic.end()) + "\"");
  }
  if (bytes.size() < header_size) {
    throw Error(ErrorCode::kTruncated, "header truncated");
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "unsupported format version " + std::to_string(version));
  }
  if (bytes[dtype_pos] != dtype) {
    throw Error(ErrorCode::kUnsupportedDtype,
                "unsupported dtype code " + std::to_string(bytes[dtype_pos]));
  }
}

void check_payload(std::size_t have, std::size_t want) {
  if (have < want) {
    throw Error(ErrorCode::kTruncated, "payload truncated: " + std::to_string(have) +
                                           " of " + std::to_string(want) + " bytes");
  }
  if (have > want) {
    throw Error(ErrorCode::kLengthMismatch,
                "payload has " + std::to_string(have - want) + " trailing bytes");
  }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace

std::vector<std::uint8_t> encode_video(const VideoSet& v) {
  std::vector<std::uint8_t> out;
  out.reserve(kVideoHeaderSize + v.data().size());
  out.insert(out.end(), kVideoMagic.begin(), kVideoMagic.end());
  put_u32(out, kFormatVersion);
  for (std::size_t dim : {v.n(), v.t(), v.h(), v.w(), v.c()}) put_u32(out, checked_u32(dim, "dimension"));
  out.push_back(kDtypeU8);
  out.insert(out.end(), v.data().begin(), v.data().end());
  return out;
}

VideoSet decode_video(std::span<const std::uint8_t> bytes) {
  check_header(bytes, kVideoMagic, kVideoHeaderSize, kVideoHeaderSize - 1, kDtypeU8);
  VideoShape shape{get_u32(bytes, 8), get_u32(bytes, 12), get_u32(bytes, 16),
                   get_u32(bytes, 20), get_u32(bytes, 24)};
  check_payload(bytes.size() - kVideoHeaderSize, shape.total());
  const auto payload = bytes.subspan(kVideoHeaderSize);
  return VideoSet(shape, std::vector<std::uint8_t>(payload.begin(), payload.end()));
}

std::vector<std::uint8_t> encode_embeddings(const EmbeddingSet& e) {
  std::vector<std::uint8_t> out;
  out.reserve(kEmbedHeaderSize + 4 * e.data().size());
  out.insert(out.end(), kEmbedMagic.begin(), kEmbedMagic.end());
  put_u32(out, kFormatVersion);
  put_u32(out, checked_u32(e.n(), "N"));
  put_u32(out, checked_u32(e.d(), "D"));
  out.push_back(kDtypeF32);
  for (float f : e.data()) put_u32(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

EmbeddingSet decode_embeddings(std::span<const std::uint8_t> bytes) {
  check_header(bytes, kEmbedMagic, kEmbedHeaderSize, kEmbedHeaderSize - 1, kDtypeF32);
  const std::size_t n = get_u32(bytes, 8);
  const std::size_t d = get_u32(bytes, 12);
  check_payload(bytes.size() - kEmbedHeaderSize, 4 * n * d);
  std::vector<float> data(n * d);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<float>(get_u32(bytes, kEmbedHeaderSize + 4 * i));
  }
  return EmbeddingSet(n, d, std::move(data));
}

VideoSet load_video_file(const std::filesystem::path& path) {
  return decode_video(read_file(path));
}

void save_video_file(const VideoSet& v, const std::filesystem::path& path) {
  write_file(path, encode_video(v));
}

EmbeddingSet load_embedding_file(const std::filesystem::path& path) {
  return decode_embeddings(read_file(path));
}

void save_embedding_file(const EmbeddingSet& e, const std::filesystem::path& path) {
  write_file(path, encode_embeddings(e));
}

VideoSet slice_frames(const VideoSet& v, std::size_t start, std::size_t count) {
  if (count == 0 || start + count > v.t()) {
    throw Error(ErrorCode::kInvalidArgument, "frame slice out of range");
  }
  VideoShape shape = v.shape();
  shape.t = count;
  VideoSet out(shape);
  const std::size_t fs = shape.frame_size();
  for (std::size_t i = 0; i < v.n(); ++i) {
    const auto src = v.video(i).subspan(start * fs, count * fs);
    std::copy(src.begin(), src.end(), out.video(i).begin());
  }
  return out;
}

VideoSet slice_videos(const VideoSet& v, std::size_t start, std::size_t count) {
  if (count == 0 || start + count > v.n()) {
    throw Error(ErrorCode::kInvalidArgument, "video slice out of range");
  }
  VideoShape shape = v.shape();
  shape.n = count;
  const auto src = v.data().subspan(start * shape.video_size(), count * shape.video_size());
  return VideoSet(shape, std::vector<std::uint8_t>(src.begin(), src.end()));
}

VideoSet assemble_eval_sequence(const VideoSet& context, std::size_t context_frames,
                                const VideoSet& generated) {
  if (context_frames == 0) return generated;
  if (context_frames > context.t()) {
    throw Error(ErrorCode::kInvalidArgument, "context_frames exceeds context length");
  }
  if (context.n() != generated.n() || context.h() != generated.h() ||
      context.w() != generated.w() || context.c() != generated.c()) {
    throw Error(ErrorCode::kShapeMismatch,
                "context and generated videos disagree on N, H, W or C");
  }
  VideoShape shape = generated.shape();
  shape.t = context_frames + generated.t();
  VideoSet out(shape);
  const std::size_t fs = shape.frame_size();
  for (std::size_t i = 0; i < shape.n; ++i) {
    auto dst = out.video(i);
    const auto ctx = context.video(i).subspan(0, context_frames * fs);
    const auto gen = generated.video(i);
    std::copy(ctx.begin(), ctx.end(), dst.begin());
    std::copy(gen.begin(), gen.end(), dst.begin() + static_cast<std::ptrdiff_t>(ctx.size()));
  }
  return out;
}

std::pair<VideoSet, VideoSet> split_frames(const VideoSet& v, std::size_t at) {
  if (at == 0 || at >= v.t()) {
    throw Error(ErrorCode::kInvalidArgument, "split point must lie strictly inside the video");
  }
  return {slice_frames(v, 0, at), slice_frames(v, at, v.t() - at)};
}

Subsequences subsequences(const VideoSet& v, std::size_t length, std::uint64_t seed) {
  if (length == 0 || length > v.t()) {
    throw Error(ErrorCode::kInvalidArgument,
                "subsequence length " + std::to_string(length) + " exceeds T=" +
                    std::to_string(v.t()));
  }
  VideoShape shape = v.shape();
  shape.t = length;
  Subsequences result{VideoSet(shape), std::vector<std::size_t>(v.n())};
  const std::size_t fs = shape.frame_size();
  for (std::size_t i = 0; i < v.n(); ++i) {
    SplitMix64 rng(derive_seed(seed, i));
    const std::size_t offset = static_cast<std::size_t>(rng.below(v.t() - length + 1));
    result.offsets[i] = offset;
    const auto src = v.video(i).subspan(offset * fs, length * fs);
    std::copy(src.begin(), src.end(), result.videos.video(i).begin());
  }
  return result;
}

}  // namespace vidmetrics
