#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvemetrics/scenario.hpp"

namespace curvemetrics::app {

/// Read-only registry of scenarios keyed by name.
class ScenarioStore {
 public:
  /// The four bundled scenarios.
  [[nodiscard]] static auto bundled() -> ScenarioStore;
  /// Every `*.json` file in `dir`, each holding one scenario. Throws
  /// ValidationError for unreadable or invalid files and duplicate names.
  [[nodiscard]] static auto from_directory(const std::filesystem::path& dir) -> ScenarioStore;
  /// `dir` if given, else $CURVEMETRICS_SCENARIO_DIR if set, else bundled().
  [[nodiscard]] static auto open(const std::optional<std::filesystem::path>& dir) -> ScenarioStore;

  [[nodiscard]] auto names() const -> std::vector<std::string>;
  [[nodiscard]] auto scenarios() const -> std::vector<const Scenario*>;
  /// Throws NotFoundError.
  [[nodiscard]] auto get(const std::string& name) const -> const Scenario&;
  /// A stored name, or else a path to a scenario JSON file.
  [[nodiscard]] auto resolve(const std::string& ref) const -> Scenario;

  [[nodiscard]] auto size() const noexcept -> std::size_t { return scenarios_.size(); }

 private:
  void add(Scenario s);

  std::vector<Scenario> scenarios_;  // insertion order
  std::map<std::string, std::size_t, std::less<>> index_;
};

inline constexpr const char* kScenarioDirEnv = "CURVEMETRICS_SCENARIO_DIR";

}  // namespace curvemetrics::app
