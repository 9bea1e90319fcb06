// Copyright 2026 The gladmamba Authors. All Rights Reserved.
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

#include "gladmamba/checkpoint.hpp"

#include "gladmamba/dataset_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

namespace gladmamba {

namespace {

constexpr char kMagic[8] = {'G', 'L', 'A', 'D', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u64(std::string& out, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

void put_string(std::string& out, const std::string& s) {
  put_u64(out, s.size());
  out += s;
}

class Reader {
 public:
  Reader(std::string data, std::string origin) : data_(std::move(data)), origin_(std::move(origin)) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return x;
  }

  std::string str() {
    const std::uint64_t n = u64();
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  void bytes(char* dst, std::size_t n) {
    need(n);
    std::memcpy(dst, data_.data() + pos_, n);
    pos_ += n;
  }

  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::uint64_t n) const {
    if (n > data_.size() - pos_) throw FileFormatError(origin_ + ": truncated checkpoint");
  }

  std::string data_;
  std::string origin_;
  std::size_t pos_ = 0;
};

}  // namespace

bool Checkpoint::operator==(const Checkpoint& other) const {
  if (metadata != other.metadata || tensors.size() != other.tensors.size()) return false;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const auto& [na, a] = tensors[i];
    const auto& [nb, b] = other.tensors[i];
    if (na != nb || a.rows() != b.rows() || a.cols() != b.cols()) return false;
    if (a.size() > 0 && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) != 0) return false;
  }
  return true;
}

Checkpoint capture_params(const ParamStore& store, std::map<std::string, std::string> metadata) {
  Checkpoint c;
  c.metadata = std::move(metadata);
  for (const NamedParam& p : store.entries()) c.tensors.emplace_back(p.name, p.var.value());
  return c;
}

void restore_params(ParamStore& store, const Checkpoint& ckpt) {
  const auto& entries = store.entries();
  if (entries.size() != ckpt.tensors.size()) {
    throw FileFormatError("checkpoint holds " + std::to_string(ckpt.tensors.size()) + " tensors, model expects " +
                          std::to_string(entries.size()));
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& [name, value] = ckpt.tensors[i];
    ad::Var v = entries[i].var;
    if (name != entries[i].name) throw FileFormatError("checkpoint tensor '" + name + "' where '" + entries[i].name + "' expected");
    if (value.rows() != v.rows() || value.cols() != v.cols()) throw FileFormatError("checkpoint tensor '" + name + "' has the wrong shape");
    v.mutable_value() = value;
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "checkpoint format assumes a little-endian host");
  std::string out(kMagic, sizeof(kMagic));
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((kVersion >> (8 * i)) & 0xff));
  put_u64(out, ckpt.metadata.size());
  for (const auto& [k, v] : ckpt.metadata) {
    put_string(out, k);
    put_string(out, v);
  }
  put_u64(out, ckpt.tensors.size());
  for (const auto& [name, m] : ckpt.tensors) {
    put_string(out, name);
    put_u64(out, static_cast<std::uint64_t>(m.rows()));
    put_u64(out, static_cast<std::uint64_t>(m.cols()));
    out.append(reinterpret_cast<const char*>(m.data()), sizeof(double) * static_cast<std::size_t>(m.size()));
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_file_atomically(path, out);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileFormatError("cannot open checkpoint " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < sizeof(kMagic) + 4 || std::memcmp(data.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FileFormatError(path.string() + ": not a checkpoint file");
  }
  std::uint32_t version = 0;
  for (int i = 0; i < 4; ++i) version |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[8 + i])) << (8 * i);
  if (version != kVersion) throw FileFormatError(path.string() + ": unsupported checkpoint version " + std::to_string(version));

  Reader r(data.substr(12), path.string());
  Checkpoint c;
  const std::uint64_t meta = r.u64();
  for (std::uint64_t i = 0; i < meta; ++i) {
    std::string k = r.str();
    c.metadata[k] = r.str();
  }
  const std::uint64_t count = r.u64();
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string name = r.str();
    const std::uint64_t rows = r.u64();
    const std::uint64_t cols = r.u64();
    if (rows > (1u << 24) || cols > (1u << 24)) throw FileFormatError(path.string() + ": implausible tensor shape");
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    r.bytes(reinterpret_cast<char*>(m.data()), sizeof(double) * rows * cols);
    c.tensors.emplace_back(std::move(name), std::move(m));
  }
  if (!r.done()) throw FileFormatError(path.string() + ": trailing bytes after checkpoint");
  return c;
}

}  // namespace gladmamba
