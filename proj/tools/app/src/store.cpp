#include "curvemetrics_app/store.hpp"

#include <algorithm>
#include <cstdlib>

#include "curvemetrics/error.hpp"
#include "curvemetrics/json_io.hpp"

namespace curvemetrics::app {

namespace fs = std::filesystem;

auto ScenarioStore::bundled() -> ScenarioStore {
  ScenarioStore store;
  for (auto& s : bundled_scenarios()) store.add(std::move(s));
  return store;
}

auto ScenarioStore::from_directory(const fs::path& dir) -> ScenarioStore {
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw ValidationError("scenario directory not found: " + dir.string(), "scenario_dir");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  ScenarioStore store;
  for (const auto& f : files) {
    try {
      store.add(scenario_from_json(read_json_file(f)));
    } catch (const ValidationError& e) {
      throw ValidationError(f.filename().string() + ": " + e.what(), e.field());
    }
  }
  return store;
}

auto ScenarioStore::open(const std::optional<fs::path>& dir) -> ScenarioStore {
  if (dir) return from_directory(*dir);
  if (const char* env = std::getenv(kScenarioDirEnv); env != nullptr && *env != '\0')
    return from_directory(env);
  return bundled();
}

void ScenarioStore::add(Scenario s) {
  if (index_.contains(s.name)) throw ValidationError("duplicate scenario name '" + s.name + "'", "name");
  index_.emplace(s.name, scenarios_.size());
  scenarios_.push_back(std::move(s));
}

auto ScenarioStore::names() const -> std::vector<std::string> {
  std::vector<std::string> out;
  for (const auto& s : scenarios_) out.push_back(s.name);
  return out;
}

auto ScenarioStore::scenarios() const -> std::vector<const Scenario*> {
  std::vector<const Scenario*> out;
  for (const auto& s : scenarios_) out.push_back(&s);
  return out;
}

auto ScenarioStore::get(const std::string& name) const -> const Scenario& {
  const auto it = index_.find(name);
  if (it == index_.end()) throw NotFoundError("unknown scenario '" + name + "'");
  return scenarios_[it->second];
}

auto ScenarioStore::resolve(const std::string& ref) const -> Scenario {
  if (const auto it = index_.find(ref); it != index_.end()) return scenarios_[it->second];
  std::error_code ec;
  if (fs::is_regular_file(ref, ec)) return scenario_from_json(read_json_file(ref));
  throw NotFoundError("unknown scenario '" + ref + "'");
}

}  // namespace curvemetrics::app
