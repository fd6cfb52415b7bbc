#pragma once

// Run manifests: the config echo, the library version, per-experiment
// stream ids and digests of every output file. Re-running with the same
// config and seed reproduces byte-identical outputs.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "abmlab/io.hpp"
#include "abmlab/rng.hpp"
#include "abmlab/version.hpp"

namespace abmlab {

inline std::uint64_t fnv1a64_bytes(const std::string& data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::string digest_hex(const std::string& data) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64_bytes(data)));
  return buf;
}

inline std::string digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return digest_hex(ss.str());
}

struct RunManifest {
  std::string config_echo;  // JSON text
  std::uint64_t root_seed = 0;
  double wall_ms = 0.0;
  std::vector<std::string> experiments;
  std::vector<std::pair<std::string, std::string>> output_digests;  // path, digest

  std::string to_json_text() const {
    JsonWriter w;
    w.begin_object();
    w.key("format_version").value(kFormatVersion);
    w.key("library_version").value(std::string(kVersion));
    w.key("root_seed").value(root_seed);
    w.key("wall_ms").value(wall_ms);
    w.key("config").raw(config_echo.empty() ? "{}" : config_echo);
    w.key("experiments").begin_array();
    for (const auto& e : experiments) {
      JsonWriter inner;
      inner.begin_object();
      inner.key("name").value(e);
      inner.key("stream_id_replica0").value(RngStream::stream_id_for(e, 0));
      inner.end_object();
      w.raw(inner.str());
    }
    w.end_array();
    w.key("outputs").begin_array();
    for (const auto& [path, digest] : output_digests) {
      JsonWriter inner;
      inner.begin_object();
      inner.key("path").value(path);
      inner.key("fnv1a64").value(digest);
      inner.end_object();
      w.raw(inner.str());
    }
    w.end_array();
    w.end_object();
    return w.str();
  }
};

}  // namespace abmlab
