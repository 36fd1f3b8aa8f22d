#include "kernelkit_cli/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>

#include "kernelkit/errors.hpp"
#include "kernelkit/rkhs.hpp"
#include "kernelkit/serialization.hpp"
#include "kernelkit/special.hpp"
#include "kernelkit/transforms.hpp"

namespace kk::cli {

namespace {

using io::json;

struct CliConfig {
  double tol = 1e-10;
  int n_max = 500;
  uint64_t seed = 0;
  std::string output = "json";
  std::string out_path;

  void validate() const {
    if (!(tol > 0.0 && tol <= 1e-2))
      throw UsageError("--tol must lie in (0, 1e-2]");
    if (n_max < 2) throw UsageError("--n-max must be >= 2");
    if (output != "json" && output != "csv")
      throw UsageError("--output must be json or csv");
  }

  TruncationPolicy policy() const {
    TruncationPolicy p;
    p.rel_tol = tol;
    p.n_max = n_max;
    return p;
  }
};

json parse_inline_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw UsageError(std::string("could not parse ") + what + " as JSON");
  return j;
}

void emit(const CliConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out_path);
  if (!file) throw UsageError("cannot write to " + cfg.out_path);
  file << text;
}

void emit_json(const CliConfig& cfg, std::ostream& out, const json& j) {
  emit(cfg, out, j.dump(2) + "\n");
}

int run(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"positive-kernel toolkit: closed forms, decompositions, "
               "certificates, sampling"};
  app.name("kk");
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  CliConfig cfg;
  if (const char* env = std::getenv("KK_TOL")) {
    try {
      cfg.tol = std::stod(env);
    } catch (const std::exception&) {
      throw UsageError("KK_TOL is not a number");
    }
  }
  app.add_option("--tol", cfg.tol, "relative tolerance");
  app.add_option("--n-max", cfg.n_max, "series term budget");
  app.add_option("--seed", cfg.seed, "rng seed");
  app.add_option("--output", cfg.output, "output format: json or csv");
  app.add_option("--out", cfg.out_path, "write output to a file");

  std::string spec_text, measure_text, grid_text, method_text, role_text;
  double t = 0.0, s = 0.0, z = 0.0, mu = 0.0, hurst = 0.0, t0 = 0.0;
  bool mu_given = false, measure_given = false;
  uint64_t n_paths = 0;

  auto* kernel = app.add_subcommand("kernel", "closed-form kernel surface");
  auto* keval = kernel->add_subcommand("eval", "evaluate K(t,s)");
  keval->add_option("--spec", spec_text)->required();
  keval->add_option("--t", t)->required();
  keval->add_option("--s", s)->required();
  auto* kgram = kernel->add_subcommand("gram", "gram matrix on a grid");
  kgram->add_option("--spec", spec_text)->required();
  kgram->add_option("--grid", grid_text)->required();
  auto* kpsd = kernel->add_subcommand("psd", "positivity certificate");
  kpsd->add_option("--spec", spec_text)->required();
  kpsd->add_option("--grid", grid_text)->required();

  auto* decomp = app.add_subcommand("decomp", "series/integral decompositions");
  auto* dcompare =
      decomp->add_subcommand("compare", "decomposition vs closed form");
  dcompare->add_option("--spec", spec_text)->required();
  dcompare->add_option("--method", method_text)->required();
  dcompare->add_option("--grid", grid_text)->required();

  auto* measure = app.add_subcommand("measure", "weighted measures");
  auto* mcheck = measure->add_subcommand("check", "role admissibility");
  mcheck->add_option("--measure", measure_text)->required();
  mcheck->add_option("--role", role_text)->required();

  auto* gammacmd =
      app.add_subcommand("gamma", "Euler or measure-weighted Gamma");
  gammacmd->add_option("--z", z)->required();
  auto* muopt = gammacmd->add_option("--mu", mu);
  auto* gmeas = gammacmd->add_option("--measure", measure_text);

  auto* samplecmd = app.add_subcommand("sample", "gaussian path sampling");
  samplecmd->add_option("--spec", spec_text)->required();
  samplecmd->add_option("--grid", grid_text)->required();
  samplecmd->add_option("--paths", n_paths)->required();
  samplecmd->add_option("--seed", cfg.seed);

  auto* rkhscmd = app.add_subcommand("rkhs", "spectral atom machinery");
  auto* rcheck = rkhscmd->add_subcommand("check", "atom gram vs kernel gram");
  rcheck->add_option("--measure", measure_text)->required();
  rcheck->add_option("--grid", grid_text)->required();

  auto* transform = app.add_subcommand("transform", "nonlinear transforms");
  auto* tbound = transform->add_subcommand("bound", "fbm norm-bound constant");
  tbound->add_option("--H", hurst)->required();
  tbound->add_option("--t0", t0)->required();

  // Global options may appear after any subcommand.
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    a->fallthrough();
    for (CLI::App* sub : a->get_subcommands([](CLI::App*) { return true; }))
      enable_fallthrough(sub);
  };
  enable_fallthrough(&app);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  app.parse(rev);
  cfg.validate();
  mu_given = muopt->count() > 0;
  measure_given = gmeas->count() > 0;

  if (keval->parsed()) {
    KernelSpec spec = io::spec_from_json(parse_inline_json(spec_text, "--spec"));
    emit_json(cfg, out, json{{"value", eval_closed(spec, t, s)}});
    return 0;
  }
  if (kgram->parsed()) {
    KernelSpec spec = io::spec_from_json(parse_inline_json(spec_text, "--spec"));
    GramMatrix g = gram(spec, io::parse_grid(grid_text));
    if (cfg.output == "csv")
      emit(cfg, out, io::gram_to_csv(g));
    else
      emit_json(cfg, out, io::gram_to_json(g));
    return 0;
  }
  if (kpsd->parsed()) {
    KernelSpec spec = io::spec_from_json(parse_inline_json(spec_text, "--spec"));
    GramMatrix g = gram(spec, io::parse_grid(grid_text));
    emit_json(cfg, out, io::certificate_to_json(psd_certificate(g, cfg.tol)));
    return 0;
  }
  if (dcompare->parsed()) {
    KernelSpec spec = io::spec_from_json(parse_inline_json(spec_text, "--spec"));
    CrossValidationReport rep =
        cross_validate(spec, io::method_from_name(method_text),
                       io::parse_grid(grid_text), cfg.policy());
    emit_json(cfg, out, io::report_to_json(rep));
    return 0;
  }
  if (mcheck->parsed()) {
    WeightedMeasure m =
        io::measure_from_json(parse_inline_json(measure_text, "--measure"));
    m.validate();
    MeasureRole role;
    if (role_text == "spectral")
      role = MeasureRole::SpectralKrein;
    else if (role_text == "bernstein")
      role = MeasureRole::Bernstein;
    else
      throw UsageError("--role must be spectral or bernstein");
    AdmissibilityReport rep = admissible(m, role);
    emit_json(cfg, out,
              json{{"admissible", rep.admissible},
                   {"diagnostic", rep.diagnostic}});
    return 0;
  }
  if (gammacmd->parsed()) {
    double value;
    if (!mu_given && !measure_given) {
      value = special::gamma(z);
    } else {
      WeightedMeasure m =
          measure_given
              ? io::measure_from_json(parse_inline_json(measure_text, "--measure"))
              : WeightedMeasure::lebesgue();
      value = special::generalized_gamma(z, mu, m, cfg.tol);
    }
    emit_json(cfg, out, json{{"value", value}});
    return 0;
  }
  if (samplecmd->parsed()) {
    KernelSpec spec = io::spec_from_json(parse_inline_json(spec_text, "--spec"));
    std::vector<double> grid = io::parse_grid(grid_text);
    GramMatrix g = gram(spec, grid);
    if (!psd_certificate(g, cfg.tol).passed)
      throw NumericalBreakdown("gram matrix failed the psd certificate");
    sampling::PathEnsemble e =
        sampling::sample_paths(spec, grid, n_paths, cfg.seed);
    if (cfg.output == "csv") {
      emit(cfg, out, io::ensemble_to_csv(e));
      if (!cfg.out_path.empty()) {
        std::ofstream meta(cfg.out_path + ".meta.json");
        if (!meta) throw UsageError("cannot write metadata sidecar");
        meta << io::ensemble_metadata(e).dump(2) << "\n";
      }
    } else {
      json rows = json::array();
      for (size_t p = 0; p < e.n_paths; ++p) {
        json row = json::array();
        for (size_t j = 0; j < e.grid.size(); ++j) row.push_back(e.at(p, j));
        rows.push_back(std::move(row));
      }
      json j = io::ensemble_metadata(e);
      j["paths"] = std::move(rows);
      emit_json(cfg, out, j);
    }
    return 0;
  }
  if (rcheck->parsed()) {
    WeightedMeasure m =
        io::measure_from_json(parse_inline_json(measure_text, "--measure"));
    m.validate();
    double residual =
        rkhs::atom_gram_check(m, io::parse_grid(grid_text), cfg.tol);
    emit_json(cfg, out,
              json{{"max_residual", residual},
                   {"tolerance", cfg.tol},
                   {"passed", residual <= cfg.tol}});
    return 0;
  }
  if (tbound->parsed()) {
    transforms::FbmBoundConstant b =
        transforms::fbm_bound_constant(hurst, t0, cfg.policy());
    json j = io::series_result_to_json(b.series);
    j["prefactor"] = b.prefactor;
    j["prefactored_value"] = b.prefactored_value;
    emit_json(cfg, out, j);
    return 0;
  }
  throw UsageError("no subcommand given");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out) {
  try {
    return run(args, out);
  } catch (const CLI::CallForHelp&) {
    out << "usage: kk <kernel|decomp|measure|gamma|sample|rkhs|transform> ...\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    out << json{{"error", {{"kind", "UsageError"}, {"detail", e.what()}}}}.dump(2)
        << "\n";
    return 2;
  } catch (const UsageError& e) {
    out << json{{"error", {{"kind", e.kind()}, {"detail", e.what()}}}}.dump(2)
        << "\n";
    return 2;
  } catch (const Error& e) {
    out << json{{"error", {{"kind", e.kind()}, {"detail", e.what()}}}}.dump(2)
        << "\n";
    return 1;
  } catch (const std::exception& e) {
    out << json{{"error", {{"kind", "InternalError"}, {"detail", e.what()}}}}
               .dump(2)
        << "\n";
    return 1;
  }
}

}  // namespace kk::cli
