// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Checkpoint container. Byte layout (all integers little-endian):
//
//   "SLAMCKPT"                      8-byte magic
//   u32   format version            currently 1
//   u64   training_step
//   str   config                    serialize_config() text
//   str   provenance                free text
//   u64   number of parameter arrays, then that many array records
//   u8    1 if optimizer state follows, else 0
//   [u64  number of optimizer arrays, then that many array records]
//
// where str = u32 byte length + bytes, and an array record is
//
//   str   name
//   u8    dtype tag                 1 = float32, 2 = float64
//   u32   ndim
//   u64   dims[ndim]
//   prod(dims) values of the tagged width, IEEE-754 little-endian
//
// Records are written in name order. Float64 round-trips bit-exactly.

#include "slam/model/checkpoint.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "../common/binary_io.hpp"
#include "../common/text.hpp"
#include "slam/error.hpp"

namespace slam::model {

namespace {

constexpr std::string_view kMagic = "SLAMCKPT";
constexpr std::uint32_t kFormatVersion = 1;

void write_arrays(std::ostream& out, const NamedArrays& arrays, DType dtype) {
  io::write_le<std::uint64_t>(out, arrays.size());
  for (const auto& [name, arr] : arrays) {
    io::write_string(out, name);
    io::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(dtype));
    io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(arr.shape.size()));
    for (auto d : arr.shape) io::write_le<std::uint64_t>(out, d);
    if (dtype == DType::kFloat64) {
      for (double v : arr.values) io::write_f64(out, v);
    } else {
      for (double v : arr.values) io::write_f32(out, static_cast<float>(v));
    }
  }
}

NamedArrays read_arrays(std::istream& in) {
  NamedArrays arrays;
  const auto n = io::read_le<std::uint64_t>(in, "array count");
  for (std::uint64_t i = 0; i < n; ++i) {
    std::string name = io::read_string(in, "array name", 4096);
    const auto tag = io::read_le<std::uint8_t>(in, "dtype tag");
    if (tag != static_cast<std::uint8_t>(DType::kFloat32) &&
        tag != static_cast<std::uint8_t>(DType::kFloat64)) {
      throw FormatError("array '" + name + "': unknown dtype tag " + std::to_string(tag));
    }
    const auto ndim = io::read_le<std::uint32_t>(in, "ndim");
    if (ndim > 8) throw FormatError("array '" + name + "': implausible rank");
    std::vector<std::size_t> shape(ndim);
    std::uint64_t numel = 1;
    for (auto& d : shape) {
      d = io::read_le<std::uint64_t>(in, "dimension");
      numel *= d;
      if (numel > (1ull << 34)) throw FormatError("array '" + name + "': implausible size");
    }
    Array arr(shape);
    for (auto& v : arr.values) {
      v = tag == static_cast<std::uint8_t>(DType::kFloat64)
              ? io::read_f64(in, "array values")
              : static_cast<double>(io::read_f32(in, "array values"));
    }
    if (!arrays.emplace(name, std::move(arr)).second) {
      throw FormatError("duplicate array name '" + name + "'");
    }
  }
  return arrays;
}

}  // namespace

std::vector<ParamSpec> parameter_specs(const ModelConfig& c) {
  std::vector<ParamSpec> specs;
  const auto d = c.model_dim;
  specs.push_back({"tok_embedding", {c.vocab_size, d}});
  for (std::size_t l = 0; l < c.n_layers; ++l) {
    const std::string p = "layers." + std::to_string(l) + ".";
    specs.push_back({p + "attn_norm", {d}});
    specs.push_back({p + "wq", {d, d}});
    specs.push_back({p + "wk", {d, d}});
    specs.push_back({p + "wv", {d, d}});
    specs.push_back({p + "wo", {d, d}});
    specs.push_back({p + "ffn_norm", {d}});
    specs.push_back({p + "w_up", {d, c.ffn_dim}});
    specs.push_back({p + "w_down", {c.ffn_dim, d}});
  }
  specs.push_back({"final_norm", {d}});
  if (!c.tie_embeddings) specs.push_back({"lm_head", {d, c.vocab_size}});
  return specs;
}

void validate_checkpoint(const Checkpoint& ckpt) {
  try {
    ckpt.config.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint carries an invalid config: ") + e.what());
  }
  const auto specs = parameter_specs(ckpt.config);
  std::set<std::string> declared;
  for (const auto& spec : specs) {
    declared.insert(spec.name);
    auto it = ckpt.parameters.find(spec.name);
    if (it == ckpt.parameters.end()) {
      throw FormatError("checkpoint is missing parameter '" + spec.name + "'");
    }
    if (it->second.shape != spec.shape || it->second.numel() != Array::count(spec.shape)) {
      throw FormatError("parameter '" + spec.name + "' has the wrong shape");
    }
  }
  for (const auto& [name, arr] : ckpt.parameters) {
    if (!declared.count(name)) {
      throw FormatError("checkpoint has undeclared parameter '" + name + "'");
    }
  }
}

std::string serialize_config(const ModelConfig& c) {
  std::ostringstream os;
  os << "vocab_size=" << c.vocab_size << '\n'
     << "model_dim=" << c.model_dim << '\n'
     << "n_layers=" << c.n_layers << '\n'
     << "n_heads=" << c.n_heads << '\n'
     << "ffn_dim=" << c.ffn_dim << '\n'
     << "context_length=" << c.context_length << '\n'
     << "rope_theta=" << text::format_double(c.rope_theta) << '\n'
     << "dropout_rate=" << text::format_double(c.dropout_rate) << '\n'
     << "tie_embeddings=" << (c.tie_embeddings ? "true" : "false") << '\n';
  for (const auto& [role, id] : c.special_tokens) {
    os << "special." << to_string(role) << '=' << id << '\n';
  }
  return os.str();
}

ModelConfig parse_config(const std::string& text_in) {
  ModelConfig c;
  std::istringstream is(text_in);
  std::string line;
  while (std::getline(is, line)) {
    const auto view = text::trim(line);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw FormatError("config line without '=': " + line);
    const std::string key(text::trim(view.substr(0, eq)));
    const auto value = text::trim(view.substr(eq + 1));
    bool ok = true;
    if (key == "vocab_size") ok = text::parse_number(value, c.vocab_size);
    else if (key == "model_dim") ok = text::parse_number(value, c.model_dim);
    else if (key == "n_layers") ok = text::parse_number(value, c.n_layers);
    else if (key == "n_heads") ok = text::parse_number(value, c.n_heads);
    else if (key == "ffn_dim") ok = text::parse_number(value, c.ffn_dim);
    else if (key == "context_length") ok = text::parse_number(value, c.context_length);
    else if (key == "rope_theta") ok = text::parse_number(value, c.rope_theta);
    else if (key == "dropout_rate") ok = text::parse_number(value, c.dropout_rate);
    else if (key == "tie_embeddings") ok = text::parse_bool(value, c.tie_embeddings);
    else if (key.rfind("special.", 0) == 0) {
      Token id = 0;
      ok = text::parse_number(value, id);
      SpecialRole role;
      try {
        role = special_role_from_string(key.substr(8));
      } catch (const ConfigError& e) {
        throw FormatError(e.what());
      }
      c.special_tokens[role] = id;
    } else {
      throw FormatError("unknown config key '" + key + "'");
    }
    if (!ok) throw FormatError("bad value for config key '" + key + "'");
  }
  return c;
}

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt, DType dtype) {
  out.write(kMagic.data(), kMagic.size());
  io::write_le<std::uint32_t>(out, kFormatVersion);
  io::write_le<std::uint64_t>(out, ckpt.training_step);
  io::write_string(out, serialize_config(ckpt.config));
  io::write_string(out, ckpt.provenance);
  write_arrays(out, ckpt.parameters, dtype);
  io::write_le<std::uint8_t>(out, ckpt.optimizer_state ? 1 : 0);
  if (ckpt.optimizer_state) write_arrays(out, *ckpt.optimizer_state, dtype);
  if (!out) throw Error("failed to write checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  io::expect_magic(in, kMagic);
  const auto version = io::read_le<std::uint32_t>(in, "format version");
  if (version != kFormatVersion) {
    throw FormatError("unsupported checkpoint format version " + std::to_string(version));
  }
  Checkpoint ckpt;
  ckpt.training_step = io::read_le<std::uint64_t>(in, "training step");
  ckpt.config = parse_config(io::read_string(in, "config"));
  ckpt.provenance = io::read_string(in, "provenance");
  ckpt.parameters = read_arrays(in);
  const auto has_opt = io::read_le<std::uint8_t>(in, "optimizer flag");
  if (has_opt > 1) throw FormatError("bad optimizer-state flag");
  if (has_opt == 1) ckpt.optimizer_state = read_arrays(in);
  validate_checkpoint(ckpt);
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt, DType dtype) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_checkpoint(out, ckpt, dtype);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint '" + path.string() + "'");
  return read_checkpoint(in);
}

NamedArrays zeros_like(const NamedArrays& like) {
  NamedArrays out;
  for (const auto& [name, arr] : like) out.emplace(name, Array(arr.shape));
  return out;
}

}  // namespace slam::model
