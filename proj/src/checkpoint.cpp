#include "portnav/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "portnav/errors.hpp"

namespace portnav {

static_assert(std::endian::native == std::endian::little, "checkpoint payload assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'P', 'N', 'C', 'K', 'P', 'T', '0', '1'};

}  // namespace

void TensorArchive::put(const std::string& name, nn::Matrix value) { tensors_[name] = std::move(value); }

void TensorArchive::put_scalar(const std::string& name, double value) { scalars_[name] = value; }

const nn::Matrix& TensorArchive::get(const std::string& name) const {
  const auto it = tensors_.find(name);
  if (it == tensors_.end()) throw InvalidConfig("checkpoint: missing tensor '" + name + "'");
  return it->second;
}

double TensorArchive::get_scalar(const std::string& name) const {
  const auto it = scalars_.find(name);
  if (it == scalars_.end()) throw InvalidConfig("checkpoint: missing scalar '" + name + "'");
  return it->second;
}

void TensorArchive::put_mlp(const std::string& prefix, const nn::Mlp& net) {
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    put(prefix + "/w" + std::to_string(i), net.layer(i).weight);
    put(prefix + "/b" + std::to_string(i), net.layer(i).bias);
  }
}

void TensorArchive::get_mlp(const std::string& prefix, nn::Mlp& net) const {
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    const nn::Matrix& w = get(prefix + "/w" + std::to_string(i));
    const nn::Matrix& b = get(prefix + "/b" + std::to_string(i));
    nn::DenseLayer& layer = net.layer(i);
    if (w.rows() != layer.weight.rows() || w.cols() != layer.weight.cols() || b.rows() != layer.bias.size() ||
        b.cols() != 1) {
      throw ConfigMismatch("checkpoint: tensor shapes of '" + prefix + "' do not match the configured network");
    }
    layer.weight = w;
    layer.bias = b;
  }
}

void TensorArchive::put_adam(const std::string& prefix, const nn::AdamState& s) {
  put_scalar(prefix + "/step", static_cast<double>(s.step));
  for (std::size_t i = 0; i < s.m.size(); ++i) {
    const auto n = static_cast<Eigen::Index>(s.m[i].size());
    put(prefix + "/m" + std::to_string(i), Eigen::Map<const nn::Matrix>(s.m[i].data(), n, 1));
    put(prefix + "/v" + std::to_string(i), Eigen::Map<const nn::Matrix>(s.v[i].data(), n, 1));
  }
}

void TensorArchive::get_adam(const std::string& prefix, nn::AdamState& s) const {
  s.step = static_cast<long>(get_scalar(prefix + "/step"));
  for (std::size_t i = 0; i < s.m.size(); ++i) {
    const nn::Matrix& m = get(prefix + "/m" + std::to_string(i));
    const nn::Matrix& v = get(prefix + "/v" + std::to_string(i));
    if (static_cast<std::size_t>(m.size()) != s.m[i].size() || static_cast<std::size_t>(v.size()) != s.v[i].size()) {
      throw ConfigMismatch("checkpoint: optimizer state '" + prefix + "' does not match the configured network");
    }
    std::memcpy(s.m[i].data(), m.data(), s.m[i].size() * sizeof(double));
    std::memcpy(s.v[i].data(), v.data(), s.v[i].size() * sizeof(double));
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  nlohmann::json header;
  header["format"] = "portnav-checkpoint";
  header["version"] = kCheckpointVersion;
  header["agent"] = ckpt.agent;
  header["config_hash"] = ckpt.config_hash;
  header["config"] = ckpt.config_text;
  header["env_steps"] = ckpt.env_steps;
  header["rng"] = ckpt.rng_state;
  header["scalars"] = nlohmann::json::object();
  for (const auto& [name, v] : ckpt.archive.scalars()) header["scalars"][name] = v;
  header["tensors"] = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, m] : ckpt.archive.tensors()) {
    header["tensors"].push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}, {"offset", offset}});
    offset += static_cast<std::uint64_t>(m.size());
  }
  const std::string text = header.dump();

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
    out.write(kMagic, sizeof(kMagic));
    const std::uint64_t len = text.size();
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto& [name, m] : ckpt.archive.tensors()) {
      out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw InvalidConfig("checkpoint: " + path.string() + " is not a portnav checkpoint");
  }
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw InvalidConfig("checkpoint: truncated header");
  const auto header = nlohmann::json::parse(text);
  if (header.at("version").get<int>() != kCheckpointVersion) {
    throw InvalidConfig("checkpoint: unsupported version " + header.at("version").dump());
  }
  Checkpoint ckpt;
  ckpt.agent = header.at("agent").get<std::string>();
  ckpt.config_hash = header.at("config_hash").get<std::string>();
  ckpt.config_text = header.at("config").get<std::string>();
  ckpt.env_steps = header.at("env_steps").get<std::uint64_t>();
  ckpt.rng_state = header.at("rng").get<std::string>();
  for (const auto& [name, v] : header.at("scalars").items()) ckpt.archive.put_scalar(name, v.get<double>());

  std::vector<double> payload;
  {
    const auto start = in.tellg();
    in.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::size_t>(in.tellg() - start);
    in.seekg(start);
    payload.resize(bytes / sizeof(double));
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size() * sizeof(double)));
  }
  for (const auto& t : header.at("tensors")) {
    const auto rows = t.at("rows").get<Eigen::Index>();
    const auto cols = t.at("cols").get<Eigen::Index>();
    const auto offset = t.at("offset").get<std::size_t>();
    if (offset + static_cast<std::size_t>(rows * cols) > payload.size()) {
      throw InvalidConfig("checkpoint: payload truncated at tensor " + t.at("name").get<std::string>());
    }
    ckpt.archive.put(t.at("name").get<std::string>(), Eigen::Map<const nn::Matrix>(payload.data() + offset, rows, cols));
  }
  return ckpt;
}

}  // namespace portnav
