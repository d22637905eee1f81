#pragma once

#include "spapred/nn/schnet.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace spapred::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Layout: 8-byte magic "SPAPCKPT", u32 version, u64 header length, the
/// header JSON {"config", "metadata", "tensors": [{name, rows, cols,
/// offset}]}, then every tensor as little-endian float64 in row-major order.
std::string serialize_model(const Model& model, const nlohmann::json& metadata = {});
Model deserialize_model(const std::string& bytes, nlohmann::json* metadata = nullptr);

void save_checkpoint(const Model& model, const std::filesystem::path& path,
                     const nlohmann::json& metadata = {});
Model load_checkpoint(const std::filesystem::path& path, nlohmann::json* metadata = nullptr);

/// FNV-1a over the serialized parameters; equal for bit-identical models.
std::uint64_t model_hash(const Model& model);

}  // namespace spapred::nn
