// Copyright 2026 The augsearch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "augsearch/nn/checkpoint.hpp"

#include <cstdint>
#include <fstream>

namespace augsearch {

namespace {

constexpr char kMagic[4] = {'S', 'A', 'U', 'G'};
constexpr std::uint32_t kVersion = 1;

void writeU32(std::ostream& out, std::uint32_t v) {
  unsigned char bytes[4] = {static_cast<unsigned char>(v & 0xff),
                            static_cast<unsigned char>((v >> 8) & 0xff),
                            static_cast<unsigned char>((v >> 16) & 0xff),
                            static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t readU32(std::istream& in, const std::string& path) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (in.gcount() != 4) throw IoError("checkpoint: truncated file " + path);
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

}  // namespace

void saveCheckpoint(const std::string& path, const std::vector<NamedTensor>& tensors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("checkpoint: cannot write " + path);
  out.write(kMagic, 4);
  writeU32(out, kVersion);
  writeU32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, tensor] : tensors) {
    writeU32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    writeU32(out, static_cast<std::uint32_t>(tensor.shape.size()));
    for (int d : tensor.shape) writeU32(out, static_cast<std::uint32_t>(d));
    out.write(reinterpret_cast<const char*>(tensor.data.data()),
              static_cast<std::streamsize>(tensor.data.size() * sizeof(float)));
  }
  if (!out) throw IoError("checkpoint: write failed for " + path);
}

std::vector<NamedTensor> loadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("checkpoint: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::string(magic, 4) != std::string(kMagic, 4)) {
    throw IoError("checkpoint: bad magic in " + path);
  }
  const std::uint32_t version = readU32(in, path);
  if (version != kVersion) {
    throw IoError("checkpoint: unsupported version " + std::to_string(version) + " in " + path);
  }
  const std::uint32_t count = readU32(in, path);
  std::vector<NamedTensor> out;
  out.reserve(count);
  for (std::uint32_t t = 0; t < count; ++t) {
    const std::uint32_t nameLen = readU32(in, path);
    std::string name(nameLen, '\0');
    in.read(name.data(), nameLen);
    if (in.gcount() != static_cast<std::streamsize>(nameLen)) {
      throw IoError("checkpoint: truncated name in " + path);
    }
    const std::uint32_t rank = readU32(in, path);
    std::vector<int> shape(rank);
    for (auto& d : shape) d = static_cast<int>(readU32(in, path));
    Tensor tensor(shape);
    in.read(reinterpret_cast<char*>(tensor.data.data()),
            static_cast<std::streamsize>(tensor.data.size() * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(tensor.data.size() * sizeof(float))) {
      throw IoError("checkpoint: truncated tensor \"" + name + "\" in " + path);
    }
    out.push_back({std::move(name), std::move(tensor)});
  }
  return out;
}

}  // namespace augsearch
