//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/util/container.h"

#include <bit>
#include <cstring>
#include <fstream>

#include "pagforge/util/error.h"

namespace pagforge {
namespace {

constexpr const char *kMagic = "PAGFORGE-CONTAINER 1";

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little)
    return v;
  else
    return ((v & 0xffU) << 24) | ((v & 0xff00U) << 8) | ((v >> 8) & 0xff00U) | (v >> 24);
}

} // namespace

const Tensor &Container::tensor(const std::string &name) const {
  for (const auto &t: tensors) {
    if (t.name == name)
      return t;
  }
  throw NotFoundError("tensor '" + name + "' not in container");
}

void write_container(const std::filesystem::path &path, const Container &c) {
  nlohmann::json header = c.header;
  header["tensors"] = nlohmann::json::array();
  for (const auto &t: c.tensors) {
    if (t.data.size() != static_cast<std::size_t>(t.rows) * t.cols)
      throw InvalidArgument("tensor '" + t.name + "' size does not match its shape");
    header["tensors"].push_back({ { "name", t.name }, { "rows", t.rows }, { "cols", t.cols } });
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot write " + path.string());
  out << kMagic << '\n' << header.dump() << '\n';
  for (const auto &t: c.tensors) {
    for (float f: t.data) {
      std::uint32_t bits = to_le(std::bit_cast<std::uint32_t>(f));
      out.write(reinterpret_cast<const char *>(&bits), 4);
    }
  }
  if (!out)
    throw Error("write failed for " + path.string());
}

Container read_container(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw NotFoundError("no such file: " + path.string());
  std::string magic, line;
  std::getline(in, magic);
  if (magic != kMagic)
    throw InvalidArgument(path.string() + ": not a model container");
  std::getline(in, line);
  Container c;
  try {
    c.header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception &e) {
    throw InvalidArgument(path.string() + ": bad header: " + e.what());
  }
  for (const auto &spec: c.header.at("tensors")) {
    Tensor t { spec.at("name"), spec.at("rows"), spec.at("cols"), {} };
    t.data.resize(static_cast<std::size_t>(t.rows) * t.cols);
    for (float &f: t.data) {
      std::uint32_t bits;
      if (!in.read(reinterpret_cast<char *>(&bits), 4))
        throw InvalidArgument(path.string() + ": truncated tensor '" + t.name + "'");
      f = std::bit_cast<float>(to_le(bits));
    }
    c.tensors.push_back(std::move(t));
  }
  c.header.erase("tensors");
  return c;
}

} // namespace pagforge
