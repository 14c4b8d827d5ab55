#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "adjdg/csv.hpp"
#include "adjdg/run_config.hpp"
#include "adjdg/version.hpp"

namespace fs = std::filesystem;
using namespace adjdg;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCheckFail = 4;

struct Ctx {
  RunConfig cfg;
  Problem pb;
  std::vector<std::string> header;

  explicit Ctx(const std::string& config_path)
      : cfg(RunConfig::from_file(config_path)), pb(build_problem(cfg)) {
    fs::create_directories(pb.output_dir);
    header = config_header(cfg.resolved_text());
  }
  std::string out(const std::string& name) const {
    return (fs::path(pb.output_dir) / name).string();
  }
};

int cmd_forward(const std::string& config_path) {
  Ctx ctx(config_path);
  Problem& pb = ctx.pb;
  Trajectory traj = run_forward_with_cost(*pb.model, pb.q0, pb.dt, pb.n_steps, pb.cost,
                                          pb.policy, pb.checkpoint_interval);
  const double j = evaluate_cost(*pb.model, traj, pb.cost, pb.params);
  write_trajectory_csv(ctx.out("solution.csv"), traj, ctx.header);
  {
    CsvWriter w(ctx.out("cost.csv"), ctx.header, {"J"});
    w.row({j});
  }
  std::printf("cost J = %s\n", format_double(j).c_str());
  return 0;
}

int cmd_gradient(const std::string& config_path, const std::string& direction) {
  Ctx ctx(config_path);
  Problem& pb = ctx.pb;
  ctx.cfg.note("gradient.direction", direction);
  Trajectory traj = run_forward_with_cost(*pb.model, pb.q0, pb.dt, pb.n_steps, pb.cost,
                                          pb.policy, pb.checkpoint_interval);
  AdjointTrajectory adj =
      run_adjoint(*pb.model, traj, make_adjoint_sources(*pb.model, pb.cost));
  GradientReport rep = assemble_gradient(*pb.model, pb.params, traj, adj, pb.cost);
  const Vec dir = pb.direction(direction);
  const double d_di = directional_derivative(rep, dir);
  double d_co = 0.0;
  for (size_t i = 0; i < dir.size(); ++i) d_co += rep.comparator[i] * dir[i];
  write_gradient_csv(ctx.out("gradient.csv"), rep, ctx.header);
  {
    CsvWriter w(ctx.out("gradient_summary.csv"), ctx.header, {"d_di", "d_co"});
    w.row({d_di, d_co});
  }
  std::printf("d_di = %s\nd_co = %s\n", format_double(d_di).c_str(),
              format_double(d_co).c_str());
  return 0;
}

bool one_sided_pattern_ok(const FdSweepResult& sweep) {
  // matched digits must not decrease before their maximum (roundoff floor)
  int best = 0;
  size_t best_at = 0;
  for (size_t i = 0; i < sweep.matched_one_sided.size(); ++i)
    if (sweep.matched_one_sided[i] > best) {
      best = sweep.matched_one_sided[i];
      best_at = i;
    }
  for (size_t i = 1; i <= best_at; ++i)
    if (sweep.matched_one_sided[i] < sweep.matched_one_sided[i - 1]) return false;
  return true;
}

int cmd_verify(const std::string& config_path, const std::string& which) {
  Ctx ctx(config_path);
  Problem& pb = ctx.pb;
  bool all_pass = true;
  std::ostringstream summary;
  auto record = [&](const std::string& name, bool pass, const std::string& detail) {
    summary << (pass ? "PASS" : "FAIL") << " " << name << ": " << detail << "\n";
    all_pass = all_pass && pass;
  };

  if (which == "fd" || which == "all") {
    Trajectory traj = run_forward_with_cost(*pb.model, pb.q0, pb.dt, pb.n_steps,
                                            pb.cost, pb.policy, pb.checkpoint_interval);
    AdjointTrajectory adj =
        run_adjoint(*pb.model, traj, make_adjoint_sources(*pb.model, pb.cost));
    GradientReport rep = assemble_gradient(*pb.model, pb.params, traj, adj, pb.cost);
    const Vec dir = pb.direction("smooth");
    const double d_di = directional_derivative(rep, dir);
    FdSweepResult sweep =
        fd_sweep([&](const Vec& v) { return pb.cost_of(v); }, pb.params.values, dir,
                 d_di, default_epsilon_ladder(), pb.positivity_floor);
    CsvWriter w(ctx.out("fd_sweep.csv"), ctx.header,
                {"epsilon", "one_sided", "central", "d_di", "matched_one_sided",
                 "matched_central"});
    for (size_t i = 0; i < sweep.epsilons.size(); ++i)
      w.row({sweep.epsilons[i], sweep.one_sided[i], sweep.central[i], d_di,
             static_cast<double>(sweep.matched_one_sided[i]),
             static_cast<double>(sweep.matched_central[i])});
    std::ostringstream det;
    det << "best central rel err " << format_double(sweep.best_central_rel)
        << " at eps " << sweep.best_epsilon;
    record("fd-gradient", sweep.best_central_rel <= 1e-7 && one_sided_pattern_ok(sweep),
           det.str());
  }
  if (which == "adjoint" || which == "all") {
    double worst = 0.0;
    const int n_pairs = 20;
    CsvWriter w(ctx.out("adjoint_check.csv"), ctx.header, {"seed", "defect"});
    for (int i = 0; i < n_pairs; ++i) {
      const double defect = adjoint_identity_check(*pb.model, pb.seed + i);
      w.row({static_cast<double>(pb.seed + i), defect});
      worst = std::max(worst, defect);
    }
    record("adjoint-identity", worst <= 1e-12,
           "max normalized defect " + format_double(worst));
  }
  if (which == "weakstrong" || which == "all") {
    const OperatorDiffs d = weak_strong_consistency(*pb.model);
    CsvWriter w(ctx.out("weak_strong.csv"), ctx.header,
                {"weak_vs_strong", "strongadj_vs_weakstate_T", "weakadj_vs_strongstate_T"});
    w.row({d.weak_vs_strong, d.strong_adjoint_vs_weak_state_transpose,
           d.weak_adjoint_vs_strong_state_transpose});
    const bool pass = d.weak_vs_strong <= 1e-12 &&
                      d.strong_adjoint_vs_weak_state_transpose <= 1e-12 &&
                      d.weak_adjoint_vs_strong_state_transpose <= 1e-12;
    record("weak-strong-duality", pass,
           "max operator diffs " + format_double(d.weak_vs_strong) + ", " +
               format_double(d.strong_adjoint_vs_weak_state_transpose) + ", " +
               format_double(d.weak_adjoint_vs_strong_state_transpose));
  }
  if (which != "fd" && which != "adjoint" && which != "weakstrong" && which != "all") {
    std::fprintf(stderr, "unknown check '%s'\n", which.c_str());
    return kExitConfig;
  }

  std::printf("%s", summary.str().c_str());
  std::ofstream(ctx.out("verify_summary.txt")) << summary.str();
  return all_pass ? 0 : kExitCheckFail;
}

int cmd_convergence(const std::string& config_path, const std::string& orders_s,
                    const std::string& levels_s) {
  Ctx ctx(config_path);
  Problem& pb = ctx.pb;
  auto parse_list = [](const std::string& s) {
    std::vector<int> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
    return out;
  };
  const std::vector<int> orders = parse_list(orders_s);
  const std::vector<int> levels = parse_list(levels_s);

  // the study solves on periodic meshes with smooth traveling-wave data,
  // keeping the configured materials' constant values
  ConvergenceCase c;
  c.final_time = pb.final_time;
  const double xl = pb.mesh->x_left, xr = pb.mesh->x_right;
  const double len = xr - xl;
  const QuadMode qm = pb.basis->quad_mode;
  if (pb.model_kind == "advection") {
    const double a = pb.params.values[0];
    c.make_model = [=](int order, int kk) -> std::unique_ptr<Model> {
      auto mesh = std::make_shared<const Mesh1D>(
          uniform_mesh(xl, xr, kk, BoundaryKind::periodic));
      auto basis = std::make_shared<const NodalBasis>(build_basis(order, qm));
      Vec table(static_cast<size_t>(kk) * (order + 1), a);
      return std::make_unique<AdvectionModel>(mesh, basis, table, 0.0, Form::strong);
    };
    c.exact = [=](int, double x, double t) {
      return std::sin(2.0 * M_PI * (x - a * t - xl) / len);
    };
  } else if (pb.model_kind == "acoustic") {
    const double cc = pb.params.values[0];
    c.make_model = [=](int order, int kk) -> std::unique_ptr<Model> {
      auto mesh = std::make_shared<const Mesh1D>(
          uniform_mesh(xl, xr, kk, BoundaryKind::periodic));
      auto basis = std::make_shared<const NodalBasis>(build_basis(order, qm));
      Vec rho(static_cast<size_t>(kk) * (order + 1), 1.0);
      Vec cs(static_cast<size_t>(kk) * (order + 1), cc);
      return std::make_unique<AcousticModel>(mesh, basis, rho, cs, Form::strong);
    };
    c.exact = [=](int comp, double x, double t) {
      const double f = std::sin(2.0 * M_PI * (x - cc * t - xl) / len);
      return comp == 0 ? -f / cc : f;
    };
  } else {
    c.make_model = [=](int order, int kk) -> std::unique_ptr<Model> {
      auto mesh = std::make_shared<const Mesh1D>(
          uniform_mesh(xl, xr, kk, BoundaryKind::periodic));
      auto basis = std::make_shared<const NodalBasis>(build_basis(order, qm));
      return std::make_unique<MaxwellModel>(mesh, basis, Vec(kk, 1.0), Vec(kk, 1.0),
                                            Form::strong);
    };
    c.exact = [=](int comp, double x, double t) {
      const double f = std::sin(2.0 * M_PI * (x - t - xl) / len);
      return f;  // Z = 1: H = E = f
    };
  }

  CsvWriter w(ctx.out("convergence.csv"), ctx.header,
              {"adjoint", "order", "K", "error", "rate"});
  for (int adjoint = 0; adjoint <= 1; ++adjoint) {
    ConvergenceCase cc = c;
    cc.adjoint = adjoint == 1;
    if (cc.adjoint) {
      // dual analytic solution: transport reversed in backward time
      auto fwd = c.exact;
      cc.exact = [fwd](int comp, double x, double tau) { return fwd(comp, x, -tau); };
    }
    const auto rows = convergence_study(cc, orders, levels);
    for (const auto& r : rows)
      w.row({static_cast<double>(adjoint), static_cast<double>(r.order),
             static_cast<double>(r.n_elements), r.error, r.rate});
    for (const auto& r : rows)
      std::printf("%s N=%d K=%d error=%.3e rate=%.2f\n", adjoint ? "adjoint" : "state",
                  r.order, r.n_elements, r.error, r.rate);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dG adjoint-gradient laboratory"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path, direction = "smooth", which = "all";
  std::string orders = "1,2,3", levels = "8,16,32";

  auto* fwd = app.add_subcommand("forward", "run the state solve and report the cost");
  fwd->add_option("--config", config_path)->required();
  auto* grad = app.add_subcommand("gradient", "assemble the discrete gradient");
  grad->add_option("--config", config_path)->required();
  grad->add_option("--direction", direction, "smooth|pointwise|random");
  auto* ver = app.add_subcommand("verify", "run verification checks");
  ver->add_option("--config", config_path)->required();
  ver->add_option("--which", which, "fd|adjoint|weakstrong|all");
  auto* conv = app.add_subcommand("convergence", "state/adjoint convergence study");
  conv->add_option("--config", config_path)->required();
  conv->add_option("--orders", orders);
  conv->add_option("--levels", levels);

  CLI11_PARSE(app, argc, argv);

  try {
    if (fwd->parsed()) return cmd_forward(config_path);
    if (grad->parsed()) return cmd_gradient(config_path, direction);
    if (ver->parsed()) return cmd_verify(config_path, which);
    if (conv->parsed()) return cmd_convergence(config_path, orders, levels);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const SolverBlowup& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return 0;
}
