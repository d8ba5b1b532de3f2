#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "vidmetrics/tensor.hpp"

namespace vidmetrics {

// RVID layout, all integers little-endian:
//   "RVID" | u32 version=1 | u32 N,T,H,W,C | u8 dtype=0 | N*T*H*W*C bytes
// REMB layout:
//   "REMB" | u32 version=1 | u32 N,D | u8 dtype=1 | N*D IEEE-754 binary32
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::uint8_t kDtypeU8 = 0;
inline constexpr std::uint8_t kDtypeF32 = 1;

std::vector<std::uint8_t> encode_video(const VideoSet& v);
VideoSet decode_video(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_embeddings(const EmbeddingSet& e);
EmbeddingSet decode_embeddings(std::span<const std::uint8_t> bytes);

VideoSet load_video_file(const std::filesystem::path& path);
void save_video_file(const VideoSet& v, const std::filesystem::path& path);
EmbeddingSet load_embedding_file(const std::filesystem::path& path);
void save_embedding_file(const EmbeddingSet& e, const std::filesystem::path& path);

/// Frames [start, start+count) of every video.
VideoSet slice_frames(const VideoSet& v, std::size_t start, std::size_t count);

/// Videos [start, start+count) of the set.
VideoSet slice_videos(const VideoSet& v, std::size_t start, std::size_t count);

/// Concatenates the first `context_frames` frames of `context` with all frames
/// of `generated`, video by video. context_frames == 0 returns `generated`.
VideoSet assemble_eval_sequence(const VideoSet& context, std::size_t context_frames,
                                const VideoSet& generated);

/// Inverse of assemble_eval_sequence: {frames [0, at), frames [at, T)}.
std::pair<VideoSet, VideoSet> split_frames(const VideoSet& v, std::size_t at);

struct Subsequences {
  VideoSet videos;
  std::vector<std::size_t> offsets;  // start frame per source video
};

/// One consecutive window of `length` frames per video, offset drawn uniformly
/// from [0, T - length] with a per-video sub-seed.
Subsequences subsequences(const VideoSet& v, std::size_t length, std::uint64_t seed);

}  // namespace vidmetrics
