#ifndef ADJDG_RUN_CONFIG_HPP
#define ADJDG_RUN_CONFIG_HPP

#include <map>
#include <memory>
#include <string>

#include "adjdg/objective.hpp"
#include "adjdg/verification.hpp"

namespace adjdg {

struct ConfigError : std::runtime_error {
  std::string key;
  ConfigError(std::string k, const std::string& what)
      : std::runtime_error(what + " (key " + k + ")"), key(std::move(k)) {}
};

/// Flat key = value configuration with dotted section keys. Reads record the
/// final (defaulted) value so outputs can embed the fully resolved config.
class RunConfig {
 public:
  static RunConfig from_file(const std::string& path);
  static RunConfig from_string(const std::string& text);

  bool has(const std::string& key) const { return raw_.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  std::string require_str(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  double require_double(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  int require_int(const std::string& key) const;

  void note(const std::string& key, const std::string& value) const;
  std::string resolved_text() const;  // sorted key = value lines

 private:
  std::map<std::string, std::string> raw_;
  mutable std::map<std::string, std::string> resolved_;
};

/// A fully validated experiment: model factory over the parameter set plus
/// run controls.
struct Problem {
  std::shared_ptr<const Mesh1D> mesh;
  std::shared_ptr<const NodalBasis> basis;
  ParamSet params;
  std::function<std::unique_ptr<Model>(const ParamSet&)> make_model;
  std::unique_ptr<Model> model;  // built from `params`
  DgField q0;
  CostSpec cost;
  double final_time = 1.0;
  int n_steps = 0;
  double dt = 0.0;
  StoragePolicy policy = StoragePolicy::store_all;
  int checkpoint_interval = 0;
  uint64_t seed = 0;
  std::string output_dir;
  std::string model_kind;

  // FD positivity floor for the parameter (negative when unconstrained).
  double positivity_floor = -1.0;

  Vec direction(const std::string& preset) const;
  double cost_of(const Vec& param_values) const;  // full forward solve
};

Problem build_problem(const RunConfig& cfg);

}  // namespace adjdg

#endif
