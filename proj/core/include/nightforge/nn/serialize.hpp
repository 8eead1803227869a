#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nightforge/nn/tensor.hpp"

namespace nightforge::nn {

/// Writes named tensors to a little-endian binary container. The layout is
/// versioned; loaders reject unknown versions.
void save_tensors(const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, Tensor>>& tensors);

std::map<std::string, Tensor> load_tensors(const std::filesystem::path& path);

}  // namespace nightforge::nn
