// oabridge/audio_io.cc

// Copyright 2026 The oabridge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "oabridge/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include <fmt/format.h>

namespace oabridge {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t ReadU32(const unsigned char *p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::string *out, std::uint16_t v) {
  out->push_back(static_cast<char>(v & 0xFF));
  out->push_back(static_cast<char>((v >> 8) & 0xFF));
}

void PutU32(std::string *out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

void CheckPipelineRate(const Waveform &wave) {
  if (wave.sample_rate_hz != kSampleRateHz)
    throw SampleRateError(fmt::format("sample rate {} Hz, expected {} Hz",
                                      wave.sample_rate_hz, kSampleRateHz));
}

void CheckFinite(const Waveform &wave) {
  for (std::size_t i = 0; i < wave.samples.size(); ++i)
    if (!std::isfinite(wave.samples[i]))
      throw NonFiniteSampleError(fmt::format("non-finite sample at index {}", i));
}

std::size_t AlignedLength(std::size_t a, std::size_t b) {
  const std::size_t lo = std::min(a, b), hi = std::max(a, b);
  if (hi > 0 && static_cast<double>(hi - lo) > 0.01 * static_cast<double>(hi))
    throw LengthMismatchError(
        fmt::format("lengths {} and {} differ by more than 1%", a, b));
  return lo;
}

Waveform ReadWav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string name = path.string();

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw WavFormatError(fmt::format("{}: not a RIFF/WAVE file", name));

  bool have_fmt = false, have_data = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char *data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *chunk = bytes.data() + pos;
    std::uint32_t size = ReadU32(chunk + 4);
    std::size_t body = pos + 8;
    if (size > bytes.size() - body)
      throw WavFormatError(fmt::format("{}: truncated chunk", name));
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw WavFormatError(fmt::format("{}: short fmt chunk", name));
      const unsigned char *f = bytes.data() + body;
      format = ReadU16(f);
      channels = ReadU16(f + 2);
      rate = ReadU32(f + 4);
      bits = ReadU16(f + 14);
      if (format == kFormatExtensible && size >= 26) format = ReadU16(f + 24);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
      have_data = true;
    }
    // Chunks are padded to even sizes.
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw WavFormatError(fmt::format("{}: missing fmt chunk", name));
  if (!have_data) throw WavFormatError(fmt::format("{}: missing data chunk", name));

  if (!((format == kFormatPcm && bits == 16) || (format == kFormatFloat && bits == 32)))
    throw UnsupportedEncodingError(fmt::format(
        "{}: format tag {} with {} bits per sample is not supported", name, format, bits));
  if (channels != 1)
    throw ChannelCountError(fmt::format("{}: {} channels, expected mono", name, channels));

  Waveform wave;
  wave.sample_rate_hz = static_cast<int>(rate);
  CheckPipelineRate(wave);

  const std::size_t width = bits / 8;
  const std::size_t n = data_size / width;
  wave.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned char *p = data + i * width;
    if (format == kFormatPcm) {
      auto v = static_cast<std::int16_t>(ReadU16(p));
      wave.samples[i] = v / 32768.0;
    } else {
      std::uint32_t u = ReadU32(p);
      float f;
      std::memcpy(&f, &u, sizeof f);
      wave.samples[i] = f;
    }
  }
  CheckFinite(wave);
  return wave;
}

void WriteWav(const Waveform &wave, const std::filesystem::path &path,
              WavEncoding encoding) {
  CheckFinite(wave);
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(wave.samples.size() * (bits / 8));

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  PutU32(&out, 36 + data_size);
  out += "WAVE";
  out += "fmt ";
  PutU32(&out, 16);
  PutU16(&out, pcm ? kFormatPcm : kFormatFloat);
  PutU16(&out, 1);
  PutU32(&out, static_cast<std::uint32_t>(wave.sample_rate_hz));
  PutU32(&out, static_cast<std::uint32_t>(wave.sample_rate_hz) * (bits / 8));
  PutU16(&out, bits / 8);
  PutU16(&out, bits);
  out += "data";
  PutU32(&out, data_size);
  for (double s : wave.samples) {
    if (pcm) {
      double v = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
      auto q = static_cast<std::int16_t>(std::clamp(v, -32768.0, 32767.0));
      PutU16(&out, static_cast<std::uint16_t>(q));
    } else {
      float f = static_cast<float>(s);
      std::uint32_t u;
      std::memcpy(&u, &f, sizeof u);
      PutU32(&out, u);
    }
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(fmt::format("cannot write {}", path.string()));
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw IoError(fmt::format("write failed for {}", path.string()));
}

}  // namespace oabridge
