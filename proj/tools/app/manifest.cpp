#include "manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "boomprop/error.hpp"
#include "json.hpp"

namespace boomprop::app {

using nlohmann::ordered_json;

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  ordered_json j;
  j["tool"] = "boomprop";
  j["version"] = m.version;
  j["command"] = m.command;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : m.config) cfg[k] = v;
  j["config"] = cfg;
  j["options"] = m.options;
  j["threads"] = m.threads;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["outputs"] = m.outputs;
  j["summary"] = m.summary;
  j["exit_code"] = m.exit_code;
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("cannot write manifest " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read manifest " + path.string());
  ordered_json j;
  try {
    in >> j;
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.version = j.value("version", "");
    for (const auto& [k, v] : j.at("config").items()) m.config.emplace_back(k, v.get<std::string>());
    m.options = j.value("options", std::map<std::string, std::string>{});
    m.threads = j.value("threads", 1);
    m.started = j.value("started", "");
    m.finished = j.value("finished", "");
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.summary = j.value("summary", std::map<std::string, std::string>{});
    m.exit_code = j.value("exit_code", 0);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed manifest " + path.string() + ": " + e.what(), "manifest");
  }
}

std::vector<Assignment> manifest_layer(const RunManifest& manifest, const std::string& origin) {
  std::vector<Assignment> out;
  for (const auto& [k, v] : manifest.config) out.push_back({k, v, origin, 0});
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace boomprop::app
