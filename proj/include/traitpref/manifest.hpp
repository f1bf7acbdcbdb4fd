#pragma once

#include "traitpref/io.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

namespace traitpref {

inline constexpr const char* version = "0.1.0";

/// 64-bit FNV-1a.
[[nodiscard]] inline std::uint64_t fnv1a(std::string_view bytes) noexcept
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes)
  {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

[[nodiscard]] inline std::string hex64(std::uint64_t v)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// UTC time as ISO-8601. SOURCE_DATE_EPOCH, when set, replaces the clock.
[[nodiscard]] inline std::string utc_timestamp()
{
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Record of one artifact-producing command run.
struct RunManifest
{
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string started_at = utc_timestamp();
  std::string finished_at;
  std::vector<std::string> outputs;

  [[nodiscard]] std::string config_hash() const { return hex64(fnv1a(config.dump())); }

  [[nodiscard]] nlohmann::json to_json() const
  {
    return {
        {"command", command},
        {"config", config},
        {"config_hash", config_hash()},
        {"seed", seed},
        {"version", version},
        {"started_at", started_at},
        {"finished_at", finished_at},
        {"outputs", outputs},
    };
  }

  void write(const std::filesystem::path& path)
  {
    if (finished_at.empty())
      finished_at = utc_timestamp();
    io::write_text(path, to_json().dump(2) + "\n");
  }
};

} // namespace traitpref
