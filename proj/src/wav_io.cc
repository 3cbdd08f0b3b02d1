// src/wav_io.cc

// Copyright 2026  The BAM Toolkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABILITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "bam/wav_io.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

namespace bam {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatIeeeFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
};

std::uint32_t read_u32(const unsigned char *p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] |
                                    (static_cast<std::uint16_t>(p[1]) << 8));
}

void put_u32(std::vector<unsigned char> *out, std::uint32_t v) {
  out->push_back(static_cast<unsigned char>(v & 0xFF));
  out->push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  out->push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
  out->push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
}

void put_u16(std::vector<unsigned char> *out, std::uint16_t v) {
  out->push_back(static_cast<unsigned char>(v & 0xFF));
  out->push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
}

void put_tag(std::vector<unsigned char> *out, const char *tag) {
  out->insert(out->end(), tag, tag + 4);
}

}  // namespace

AudioBuffer read_wav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_wav: cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read_wav: read failure on '" + path + "'");

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("read_wav: '" + path + "' is not a RIFF/WAVE file");
  }

  FmtChunk fmt;
  bool have_fmt = false;
  const unsigned char *data = nullptr;
  std::size_t data_len = 0;

  // Walk the chunk list; unknown chunks are skipped, data/fmt captured.
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *hdr = bytes.data() + pos;
    std::uint32_t chunk_len = read_u32(hdr + 4);
    std::size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) {
      throw FormatError("read_wav: truncated chunk in '" + path + "'");
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_len < 16) {
        throw FormatError("read_wav: fmt chunk too short in '" + path + "'");
      }
      const unsigned char *f = bytes.data() + body;
      fmt.format = read_u16(f);
      fmt.channels = read_u16(f + 2);
      fmt.sample_rate = read_u32(f + 4);
      fmt.bits_per_sample = read_u16(f + 14);
      if (fmt.format == kFormatExtensible && chunk_len >= 40) {
        // The extensible sub-format GUID starts with the plain format code.
        fmt.format = read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = chunk_len;
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr) {
    throw FormatError("read_wav: missing fmt/data chunk in '" + path + "'");
  }
  if (fmt.channels == 0 || fmt.sample_rate == 0) {
    throw FormatError("read_wav: degenerate fmt chunk in '" + path + "'");
  }

  const bool pcm16 = fmt.format == kFormatPcm && fmt.bits_per_sample == 16;
  const bool f32 =
      fmt.format == kFormatIeeeFloat && fmt.bits_per_sample == 32;
  if (!pcm16 && !f32) {
    throw FormatError("read_wav: unsupported codec in '" + path +
                      "' (PCM16 and float32 only)");
  }

  const std::size_t bytes_per_sample = fmt.bits_per_sample / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  const std::size_t n_frames = data_len / frame_bytes;
  const double inv_channels = 1.0 / fmt.channels;

  AudioBuffer out;
  out.sample_rate = static_cast<int>(fmt.sample_rate);
  out.samples.resize(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    const unsigned char *frame = data + i * frame_bytes;
    for (unsigned ch = 0; ch < fmt.channels; ++ch) {
      const unsigned char *s = frame + ch * bytes_per_sample;
      if (pcm16) {
        std::int16_t v;
        std::memcpy(&v, s, 2);
        acc += v / 32768.0;
      } else {
        float v;
        std::memcpy(&v, s, 4);
        acc += v;
      }
    }
    out.samples[i] = acc * inv_channels;
  }
  return out;
}

void write_wav(const std::string &path, const AudioBuffer &buffer,
               WavFormat format, long *clip_count) {
  validate(buffer, "write_wav");

  const std::uint16_t bits = format == WavFormat::kPcm16 ? 16 : 32;
  const std::uint16_t tag =
      format == WavFormat::kPcm16 ? kFormatPcm : kFormatIeeeFloat;
  const std::uint32_t n = static_cast<std::uint32_t>(buffer.size());
  const std::uint32_t data_len = n * (bits / 8);

  std::vector<unsigned char> out;
  out.reserve(44 + data_len);
  put_tag(&out, "RIFF");
  put_u32(&out, 36 + data_len);
  put_tag(&out, "WAVE");
  put_tag(&out, "fmt ");
  put_u32(&out, 16);
  put_u16(&out, tag);
  put_u16(&out, 1);  // mono
  put_u32(&out, static_cast<std::uint32_t>(buffer.sample_rate));
  put_u32(&out, static_cast<std::uint32_t>(buffer.sample_rate) * (bits / 8));
  put_u16(&out, static_cast<std::uint16_t>(bits / 8));
  put_u16(&out, bits);
  put_tag(&out, "data");
  put_u32(&out, data_len);

  long clips = 0;
  if (format == WavFormat::kPcm16) {
    for (double s : buffer.samples) {
      if (s > 1.0 || s < -1.0) ++clips;  // clip = value outside [-1, 1]
      long code = std::lround(s * 32768.0);
      if (code > 32767) code = 32767;  // 1.0 saturates without counting
      if (code < -32768) code = -32768;
      put_u16(&out, static_cast<std::uint16_t>(static_cast<std::int16_t>(code)));
    }
  } else {
    for (double s : buffer.samples) {
      float v = static_cast<float>(s);
      std::uint32_t raw;
      std::memcpy(&raw, &v, 4);
      put_u32(&out, raw);
    }
  }
  if (clip_count != nullptr) *clip_count = clips;

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("write_wav: cannot open '" + path + "' for writing");
  f.write(reinterpret_cast<const char *>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write_wav: write failure on '" + path + "'");
}

}  // namespace bam
