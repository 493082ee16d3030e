#pragma once

// Deterministic artifact output: every JSON and CSV file embeds the library
// version and an FNV-1a hash of the resolved run configuration. No clocks,
// no locale-dependent formatting.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <graphblow/errors.hpp>
#include <graphblow/version.hpp>
#include <json.hpp>

namespace tool {

using ordered_json = nlohmann::ordered_json;

inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string config_hash(const ordered_json& resolved) { return fnv1a_hex(resolved.dump()); }

/// JSON artifact: {version, config_hash, config, result}.
inline ordered_json artifact(const ordered_json& resolved_config, ordered_json result) {
  ordered_json a;
  a["version"] = GRAPHBLOW_VERSION;
  a["config_hash"] = config_hash(resolved_config);
  a["config"] = resolved_config;
  a["result"] = std::move(result);
  return a;
}

inline std::filesystem::path ensure_out_dir(const std::string& dir) {
  std::filesystem::path p = dir.empty() ? "." : dir;
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec)
    throw graphblow::ValidationError("cannot create output directory '" + p.string() +
                                     "': " + ec.message());
  return p;
}

inline void write_json(const std::filesystem::path& file, const ordered_json& j) {
  std::ofstream out(file);
  if (!out) throw graphblow::ValidationError("cannot write '" + file.string() + "'");
  out << j.dump(2) << "\n";
}

/// Rows are written with %.17g so equal doubles give equal bytes.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& file, const std::string& cfg_hash,
            const std::string& columns)
      : out_(file) {
    if (!out_) throw graphblow::ValidationError("cannot write '" + file.string() + "'");
    out_ << "# graphblow version=" << GRAPHBLOW_VERSION << " config_hash=" << cfg_hash << "\n";
    out_ << columns << "\n";
  }

  void field(const std::string& s) { sep(), out_ << s; }
  void field(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    sep(), out_ << buf;
  }
  void field(int v) { sep(), out_ << v; }
  void endrow() {
    out_ << "\n";
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) out_ << ",";
    first_ = false;
  }
  std::ofstream out_;
  bool first_ = true;
};

}  // namespace tool
