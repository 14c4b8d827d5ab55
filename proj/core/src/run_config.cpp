#include "adjdg/run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace adjdg {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string number_str(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, "config: expected key = value, got '" + line + "'");
    cfg.raw_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw ConfigError(path, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
  const auto it = raw_.find(key);
  const std::string v = it == raw_.end() ? fallback : it->second;
  resolved_[key] = v;
  return v;
}

std::string RunConfig::require_str(const std::string& key) const {
  const auto it = raw_.find(key);
  if (it == raw_.end()) throw ConfigError(key, "missing required key");
  resolved_[key] = it->second;
  return it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto it = raw_.find(key);
  if (it == raw_.end()) {
    resolved_[key] = number_str(fallback);
    return fallback;
  }
  try {
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    resolved_[key] = it->second;
    return v;
  } catch (...) {
    throw ConfigError(key, "expected a number, got '" + it->second + "'");
  }
}

double RunConfig::require_double(const std::string& key) const {
  if (!has(key)) throw ConfigError(key, "missing required key");
  return get_double(key, 0.0);
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  const double v = get_double(key, fallback);
  const int i = static_cast<int>(std::llround(v));
  if (std::abs(v - i) > 1e-12) throw ConfigError(key, "expected an integer");
  return i;
}

int RunConfig::require_int(const std::string& key) const {
  if (!has(key)) throw ConfigError(key, "missing required key");
  return get_int(key, 0);
}

void RunConfig::note(const std::string& key, const std::string& value) const {
  resolved_[key] = value;
}

std::string RunConfig::resolved_text() const {
  std::ostringstream os;
  for (const auto& [k, v] : resolved_) os << k << " = " << v << "\n";
  return os.str();
}

namespace {

std::function<double(double)> space_preset(const RunConfig& cfg, const std::string& key,
                                           double xl, double xr) {
  const std::string preset = cfg.get(key + ".preset", "zero");
  if (preset == "zero") return [](double) { return 0.0; };
  if (preset == "constant") {
    const double v = cfg.get_double(key + ".value", 1.0);
    return [v](double) { return v; };
  }
  if (preset == "sine") {
    const double c0 = cfg.get_double(key + ".c0", 1.0);
    const double c1 = cfg.get_double(key + ".c1", 0.25);
    const double freq = cfg.get_double(key + ".freq", 1.0);
    const double len = xr - xl;
    return [=](double x) {
      return c0 + c1 * std::sin(2.0 * M_PI * freq * (x - xl) / len);
    };
  }
  if (preset == "gaussian") {
    const double amp = cfg.get_double(key + ".amp", 1.0);
    const double x0 = cfg.get_double(key + ".x0", 0.5 * (xl + xr));
    const double w = cfg.get_double(key + ".width", 0.1);
    return [=](double x) { return amp * std::exp(-(x - x0) * (x - x0) / (w * w)); };
  }
  throw ConfigError(key + ".preset", "unknown preset '" + preset + "'");
}

TimeSignal time_preset(const RunConfig& cfg, const std::string& key, double final_t) {
  const std::string preset = cfg.get(key + ".preset", "zero");
  if (preset == "zero") return nullptr;
  if (preset == "constant") {
    const double v = cfg.get_double(key + ".value", 0.0);
    return [v](double) { return v; };
  }
  if (preset == "sine") {
    const double c0 = cfg.get_double(key + ".c0", 0.0);
    const double c1 = cfg.get_double(key + ".c1", 1.0);
    const double freq = cfg.get_double(key + ".freq", 1.0);
    return [=](double t) { return c0 + c1 * std::sin(2.0 * M_PI * freq * t / final_t); };
  }
  throw ConfigError(key + ".preset", "unknown preset '" + preset + "'");
}

BoundaryKind parse_boundary(const RunConfig& cfg) {
  const std::string b = cfg.get("mesh.boundary", "periodic");
  if (b == "periodic") return BoundaryKind::periodic;
  if (b == "inflow-dirichlet") return BoundaryKind::inflow_dirichlet;
  if (b == "traction-like") return BoundaryKind::traction_like;
  throw ConfigError("mesh.boundary", "unknown boundary kind '" + b + "'");
}

std::vector<int> parse_components(const RunConfig& cfg, const std::string& key,
                                  const std::vector<std::string>& names) {
  const std::string sel = cfg.get(key, "");
  std::vector<int> out;
  if (sel.empty()) return out;
  std::istringstream is(sel);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    bool found = false;
    for (size_t c = 0; c < names.size(); ++c)
      if (names[c] == tok) {
        out.push_back(static_cast<int>(c));
        found = true;
      }
    if (!found) throw ConfigError(key, "unknown component '" + tok + "'");
  }
  return out;
}

}  // namespace

Problem build_problem(const RunConfig& cfg) {
  Problem pb;
  pb.model_kind = cfg.require_str("model.kind");
  const double xl = cfg.get_double("mesh.x_left", 0.0);
  const double xr = cfg.get_double("mesh.x_right", 1.0);
  if (!(xl < xr)) throw ConfigError("mesh.x_right", "inverted interval");
  const int k = cfg.require_int("mesh.K");
  if (k < 1) throw ConfigError("mesh.K", "element count must be >= 1");
  const BoundaryKind bkind = parse_boundary(cfg);

  const int order = cfg.require_int("basis.N");
  if (order < 1) throw ConfigError("basis.N", "order must be >= 1");
  const std::string quad = cfg.get("basis.quadrature", "collocation");
  QuadMode qmode;
  if (quad == "collocation")
    qmode = QuadMode::collocation;
  else if (quad == "over-integration")
    qmode = QuadMode::over_integration;
  else
    throw ConfigError("basis.quadrature", "unknown quadrature '" + quad + "'");
  const int over_m = cfg.get_int("basis.M", 0);

  auto mesh = std::make_shared<const Mesh1D>(uniform_mesh(xl, xr, k, bkind));
  std::shared_ptr<const NodalBasis> basis;
  try {
    basis = std::make_shared<const NodalBasis>(build_basis(order, qmode, over_m));
  } catch (const std::invalid_argument& err) {
    throw ConfigError("basis.M", err.what());
  }
  pb.mesh = mesh;
  pb.basis = basis;

  pb.final_time = cfg.get_double("time.T", 1.0);
  if (pb.final_time <= 0.0) throw ConfigError("time.T", "final time must be positive");
  pb.seed = static_cast<uint64_t>(cfg.get_int("seed", 42));
  pb.output_dir = cfg.get("output.dir", "out");

  const std::string form_s = cfg.get("model.form", "strong");
  Form form;
  if (form_s == "strong")
    form = Form::strong;
  else if (form_s == "weak")
    form = Form::weak;
  else
    throw ConfigError("model.form", "unknown form '" + form_s + "'");

  TimeSignal js_left, js_right;  // maxwell control sampling signals
  double max_speed = 0.0;

  if (pb.model_kind == "advection") {
    if (bkind == BoundaryKind::traction_like)
      throw ConfigError("mesh.boundary", "advection supports periodic or inflow-dirichlet");
    const double alpha = cfg.get_double("model.alpha", 0.0);
    if (alpha < 0.0 || alpha > 1.0)
      throw ConfigError("model.alpha", "alpha must be in [0,1]");
    auto a_fn = space_preset(cfg, "model.a", xl, xr);
    pb.params = make_continuous_param(*mesh, *basis, a_fn, ParamSet::Kind::advection_speed);
    pb.positivity_floor = 0.0;
    TimeSignal u_l = time_preset(cfg, "model.u_l", pb.final_time);
    pb.make_model = [mesh, basis, alpha, form, u_l](const ParamSet& p) -> std::unique_ptr<Model> {
      return std::make_unique<AdvectionModel>(mesh, basis, p.scatter_table(), alpha,
                                              form, u_l);
    };
    pb.q0 = sample(mesh, basis, {"u"}, {space_preset(cfg, "init.u", xl, xr)});
  } else if (pb.model_kind == "acoustic") {
    auto rho_fn = space_preset(cfg, "model.rho", xl, xr);
    auto c_fn = space_preset(cfg, "model.c", xl, xr);
    const std::string layout = cfg.get("model.c.layout", "nodal");
    TimeSignal e_bc = time_preset(cfg, "model.e_bc", pb.final_time);
    TimeSignal v_bc = time_preset(cfg, "model.v_bc", pb.final_time);
    Vec rho_table;
    {
      DgField tmp = sample(mesh, basis, {"rho"}, {rho_fn});
      rho_table = tmp.blocks[0];
    }
    if (layout == "nodal")
      pb.params = make_continuous_param(*mesh, *basis, c_fn,
                                        ParamSet::Kind::acoustic_speed_nodal);
    else if (layout == "element")
      pb.params = make_element_param(*mesh, c_fn);
    else
      throw ConfigError("model.c.layout", "unknown layout '" + layout + "'");
    pb.positivity_floor = 0.0;
    const bool element_layout = layout == "element";
    pb.make_model = [mesh, basis, rho_table, form, e_bc, v_bc,
                     element_layout](const ParamSet& p) -> std::unique_ptr<Model> {
      if (element_layout)
        return AcousticModel::with_element_speed(mesh, basis, rho_table, p.values,
                                                 form, e_bc, v_bc);
      return std::make_unique<AcousticModel>(mesh, basis, rho_table, p.scatter_table(),
                                             form, e_bc, v_bc);
    };
    pb.q0 = sample(mesh, basis, {"e", "v"},
                   {space_preset(cfg, "init.e", xl, xr),
                    space_preset(cfg, "init.v", xl, xr)});
  } else if (pb.model_kind == "maxwell1d") {
    if (bkind == BoundaryKind::inflow_dirichlet)
      throw ConfigError("mesh.boundary", "maxwell1d supports periodic or traction-like");
    auto material = [&](const std::string& key) {
      const double v1 = cfg.get_double(key + ".value", 1.0);
      const double v2 = cfg.get_double(key + ".value2", v1);
      const double split = cfg.get_double(key + ".split", xr);
      Vec out(k);
      for (int e = 0; e < k; ++e) {
        const double xc = 0.5 * (mesh->breaks[e] + mesh->breaks[e + 1]);
        out[e] = xc < split ? v1 : v2;
      }
      return out;
    };
    const Vec mu = material("model.mu");
    const Vec eps = material("model.eps");
    for (double v : mu)
      if (v <= 0.0) throw ConfigError("model.mu.value", "mu must be positive");
    for (double v : eps)
      if (v <= 0.0) throw ConfigError("model.eps.value", "eps must be positive");
    js_left = time_preset(cfg, "model.js_left", pb.final_time);
    js_right = time_preset(cfg, "model.js_right", pb.final_time);
    pb.make_model = [mesh, basis, mu, eps, form](const ParamSet& p) -> std::unique_ptr<Model> {
      return std::make_unique<MaxwellModel>(mesh, basis, mu, eps, form,
                                            p.series_signal(0), p.series_signal(1));
    };
    pb.q0 = sample(mesh, basis, {"H", "E"},
                   {space_preset(cfg, "init.H", xl, xr),
                    space_preset(cfg, "init.E", xl, xr)});
    MaxwellModel probe(mesh, basis, mu, eps, form, nullptr, nullptr);
    max_speed = probe.max_wave_speed();
  } else {
    throw ConfigError("model.kind", "unknown model '" + pb.model_kind + "'");
  }

  if (pb.model_kind != "maxwell1d") {
    auto probe = pb.make_model(pb.params);
    max_speed = probe->max_wave_speed();
  }
  if (cfg.has("time.n_steps")) {
    pb.n_steps = cfg.require_int("time.n_steps");
    if (pb.n_steps < 1) throw ConfigError("time.n_steps", "need at least one step");
  } else {
    const double safety = cfg.get_double("time.cfl_safety", 0.5);
    double hmin = mesh->width(0);
    for (int e = 1; e < k; ++e) hmin = std::min(hmin, mesh->width(e));
    const double dt_cfl = safety * hmin / (max_speed * order * order);
    pb.n_steps = std::max(1, static_cast<int>(std::ceil(pb.final_time / dt_cfl)));
    cfg.note("time.n_steps", std::to_string(pb.n_steps));
  }
  pb.dt = pb.final_time / pb.n_steps;

  if (pb.model_kind == "maxwell1d")
    pb.params = make_series_param(pb.n_steps, pb.dt, js_left, js_right);
  pb.model = pb.make_model(pb.params);

  const std::string vol = cfg.get("cost.volume", "energy");
  if (vol == "energy")
    pb.cost.volume = CostSpec::Volume::energy;
  else if (vol == "none")
    pb.cost.volume = CostSpec::Volume::none;
  else
    throw ConfigError("cost.volume", "unknown volume cost '" + vol + "'");
  pb.cost.volume_components =
      parse_components(cfg, "cost.components", pb.model->component_names());
  const std::string bcost = cfg.get("cost.boundary", "none");
  if (bcost == "tracking") {
    if (pb.model_kind != "advection" || mesh->periodic())
      throw ConfigError("cost.boundary",
                        "boundary cost is supported at the advection outflow only");
    pb.cost.boundary_tracking = true;
    pb.cost.boundary_target = time_preset(cfg, "cost.boundary_target", pb.final_time);
  } else if (bcost != "none") {
    throw ConfigError("cost.boundary", "unknown boundary cost '" + bcost + "'");
  }
  const std::string tcost = cfg.get("cost.terminal", "none");
  if (tcost == "quadratic") {
    pb.cost.terminal_quadratic = true;
    pb.cost.terminal_components =
        parse_components(cfg, "cost.terminal_components", pb.model->component_names());
  } else if (tcost != "none") {
    throw ConfigError("cost.terminal", "unknown terminal cost '" + tcost + "'");
  }
  pb.cost.beta = cfg.get_double("cost.beta", 0.0);
  if (pb.cost.beta < 0.0) throw ConfigError("cost.beta", "beta must be >= 0");

  const std::string policy = cfg.get("storage.policy", "store-all");
  if (policy == "store-all") {
    pb.policy = StoragePolicy::store_all;
  } else if (policy == "checkpoint") {
    pb.policy = StoragePolicy::checkpoint;
    pb.checkpoint_interval = cfg.get_int("storage.interval", 8);
    if (pb.checkpoint_interval < 1)
      throw ConfigError("storage.interval", "interval must be >= 1");
  } else {
    throw ConfigError("storage.policy", "unknown policy '" + policy + "'");
  }

  const char* env = std::getenv("ADG_OUTPUT_DIR");
  if (env != nullptr && env[0] != '\0') {
    pb.output_dir = env;
    cfg.note("output.dir", pb.output_dir);
  }
  return pb;
}

Vec Problem::direction(const std::string& preset) const {
  Vec d(params.dim(), 0.0);
  if (preset == "pointwise") {
    d[params.dim() / 2] = 1.0;
    return d;
  }
  if (preset == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : d) v = dist(rng);
    return d;
  }
  if (preset == "smooth") {
    if (params.is_series()) {
      const double horizon = n_steps * dt;
      for (int f = 0; f < 2; ++f)
        for (int kk = 0; kk <= n_steps; ++kk)
          d[f * (n_steps + 1) + kk] = std::sin(M_PI * (kk * dt) / horizon + 0.3 * f);
    } else {
      const double xl = mesh->x_left, len = mesh->x_right - mesh->x_left;
      for (int i = 0; i < params.dim(); ++i)
        d[i] = std::sin(M_PI * (params.locations[i] - xl) / len);
    }
    return d;
  }
  throw ConfigError("direction", "unknown direction preset '" + preset + "'");
}

double Problem::cost_of(const Vec& param_values) const {
  ParamSet p = params;
  p.values = param_values;
  auto m = make_model(p);
  Trajectory traj =
      run_forward_with_cost(*m, q0, dt, n_steps, cost, policy, checkpoint_interval);
  return evaluate_cost(*m, traj, cost, p);
}

}  // namespace adjdg
