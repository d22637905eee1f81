#include "spapred/nn/checkpoint.hpp"

#include "spapred/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace spapred::nn {

namespace {

constexpr char kMagic[8] = {'S', 'P', 'A', 'P', 'C', 'K', 'P', 'T'};

template <typename T>
void put_le(std::string& out, T v) {
  static_assert(std::is_integral_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw DataError("checkpoint truncated");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<T>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += sizeof(T);
  return v;
}

}  // namespace

std::string serialize_model(const Model& model, const nlohmann::json& metadata) {
  nlohmann::json tensors = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& p : model.parameters()) {
    tensors.push_back({{"name", p.name}, {"rows", p.value.rows()}, {"cols", p.value.cols()},
                       {"offset", offset}});
    offset += static_cast<std::uint64_t>(p.value.size());
  }
  const nlohmann::json header{{"config", model.config().to_json()},
                              {"metadata", metadata.is_null() ? nlohmann::json::object() : metadata},
                              {"tensors", tensors}};
  const std::string h = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint64_t>(out, h.size());
  out += h;
  out.reserve(out.size() + offset * 8);
  for (const auto& p : model.parameters())
    for (Eigen::Index i = 0; i < p.value.rows(); ++i)
      for (Eigen::Index j = 0; j < p.value.cols(); ++j)
        put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(p.value(i, j)));
  return out;
}

Model deserialize_model(const std::string& bytes, nlohmann::json* metadata) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw DataError("not a model checkpoint");
  std::size_t pos = sizeof(kMagic);
  const auto version = get_le<std::uint32_t>(bytes, pos);
  if (version != kCheckpointVersion)
    throw DataError("checkpoint version " + std::to_string(version) + ", expected " +
                    std::to_string(kCheckpointVersion));
  const auto header_len = get_le<std::uint64_t>(bytes, pos);
  if (pos + header_len > bytes.size()) throw DataError("checkpoint truncated");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(pos, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupt checkpoint header: ") + e.what());
  }
  pos += header_len;
  const std::size_t blob = pos;

  Model model(ModelConfig::from_json(header.at("config")));
  const auto& tensors = header.at("tensors");
  if (tensors.size() != model.parameters().size())
    throw DataError("checkpoint tensor count does not match its config");
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    Parameter& p = model.parameters()[t];
    const auto& m = tensors[t];
    if (m.at("name").get<std::string>() != p.name || m.at("rows").get<Eigen::Index>() != p.value.rows() ||
        m.at("cols").get<Eigen::Index>() != p.value.cols())
      throw DataError("checkpoint tensor " + m.at("name").get<std::string>() + " does not match");
    std::size_t at = blob + 8 * m.at("offset").get<std::size_t>();
    for (Eigen::Index i = 0; i < p.value.rows(); ++i)
      for (Eigen::Index j = 0; j < p.value.cols(); ++j)
        p.value(i, j) = std::bit_cast<double>(get_le<std::uint64_t>(bytes, at));
  }
  if (metadata) *metadata = header.value("metadata", nlohmann::json::object());
  return model;
}

void save_checkpoint(const Model& model, const std::filesystem::path& path,
                     const nlohmann::json& metadata) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    const std::string bytes = serialize_model(model, metadata);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Model load_checkpoint(const std::filesystem::path& path, nlohmann::json* metadata) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return deserialize_model(ss.str(), metadata);
}

std::uint64_t model_hash(const Model& model) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_model(model)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace spapred::nn
