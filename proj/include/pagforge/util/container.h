//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_UTIL_CONTAINER_H_
#define PAGFORGE_UTIL_CONTAINER_H_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace pagforge {

// Row-major float32 payload with a name and shape.
struct Tensor {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::vector<float> data;
};

/// Self-describing model file: a magic line, one line of JSON (the caller's
/// header plus a "tensors" shape table), then each tensor as little-endian
/// float32 in table order.
struct Container {
  nlohmann::json header;
  std::vector<Tensor> tensors;

  // Throws NotFoundError when absent.
  const Tensor &tensor(const std::string &name) const;
};

void write_container(const std::filesystem::path &path, const Container &c);
// Throws NotFoundError for a missing file, InvalidArgument for a bad one.
Container read_container(const std::filesystem::path &path);

} // namespace pagforge

#endif // PAGFORGE_UTIL_CONTAINER_H_
