#include "kernelkit/serialization.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "kernelkit/errors.hpp"

namespace kk::io {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ParseError(std::string("missing numeric field \"") + key + "\"");
  return j[key].get<double>();
}

}  // namespace

json measure_to_json(const WeightedMeasure& m) {
  json j;
  switch (m.family) {
    case MeasureFamily::PowerLaw:
      j["family"] = "power_law";
      j["c"] = m.coeff;
      j["p"] = m.exponent;
      break;
    case MeasureFamily::ExpOverU:
      j["family"] = "exp_over_u";
      break;
    default:
      throw ParseError("custom measures are not serializable");
  }
  if (m.normalization != 1.0) j["normalization"] = m.normalization;
  return j;
}

WeightedMeasure measure_from_json(const json& j) {
  if (!j.contains("family") || !j["family"].is_string())
    throw ParseError("measure needs a \"family\" string");
  std::string family = j["family"].get<std::string>();
  WeightedMeasure m;
  if (family == "power_law") {
    m = WeightedMeasure::power_law(require_number(j, "c"),
                                   require_number(j, "p"));
  } else if (family == "exp_over_u") {
    m = WeightedMeasure::exp_over_u();
  } else {
    throw ParseError("unknown measure family \"" + family + "\"");
  }
  if (j.contains("normalization")) {
    m.normalization = require_number(j, "normalization");
    if (!(m.normalization > 0.0))
      throw ParseError("normalization must be positive");
  }
  return m;
}

json generator_to_json(const GeneratorFunction& g) {
  json j;
  if (g.form == "abs" || g.form == "log1p") {
    j["form"] = g.form;
  } else if (g.form == "power") {
    j["form"] = "power";
    j["exponent"] = g.param;
  } else if (g.form == "bernstein" && g.representing_measure) {
    j["form"] = "bernstein";
    j["measure"] = measure_to_json(*g.representing_measure);
  } else {
    throw ParseError("generator is not serializable");
  }
  return j;
}

GeneratorFunction generator_from_json(const json& j) {
  if (!j.contains("form") || !j["form"].is_string())
    throw ParseError("generator needs a \"form\" string");
  std::string form = j["form"].get<std::string>();
  if (form == "abs") return GeneratorFunction::absolute();
  if (form == "log1p") return GeneratorFunction::log1p_abs();
  if (form == "power")
    return GeneratorFunction::power(require_number(j, "exponent"));
  if (form == "bernstein")
    return GeneratorFunction::from_measure(
        measure_from_json(j.at("measure")));
  throw ParseError("unknown generator form \"" + form + "\"");
}

json spec_to_json(const KernelSpec& spec) {
  json j = std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Fbm>) {
          return {{"variant", "fbm"}, {"H", k.hurst}};
        } else if constexpr (std::is_same_v<T, BiFbm>) {
          return {{"variant", "bifbm"}, {"H", k.hurst}, {"alpha", k.alpha}};
        } else if constexpr (std::is_same_v<T, Krein>) {
          return {{"variant", "krein"}, {"r", generator_to_json(k.r)}};
        } else if constexpr (std::is_same_v<T, BernsteinComposite>) {
          return {{"variant", "bernstein_composite"},
                  {"r", generator_to_json(k.r)},
                  {"phi_measure", measure_to_json(k.phi.measure)}};
        } else {
          return {{"variant", "log"}};
        }
      },
      spec.variant);
  if (spec.scale != 1.0) j["scale"] = spec.scale;
  return j;
}

KernelSpec spec_from_json(const json& j) {
  if (!j.contains("variant") || !j["variant"].is_string())
    throw ParseError("kernel spec needs a \"variant\" string");
  std::string variant = j["variant"].get<std::string>();
  KernelSpec spec;
  if (variant == "fbm") {
    spec = KernelSpec::fbm(require_number(j, "H"));
  } else if (variant == "bifbm") {
    spec = KernelSpec::bifbm(require_number(j, "H"),
                             require_number(j, "alpha"));
  } else if (variant == "krein") {
    spec = KernelSpec::krein(generator_from_json(j.at("r")));
  } else if (variant == "bernstein_composite") {
    spec = KernelSpec::bernstein_composite(
        generator_from_json(j.at("r")),
        measure_from_json(j.at("phi_measure")));
  } else if (variant == "log") {
    spec = KernelSpec::log_kernel();
  } else {
    throw ParseError("unknown kernel variant \"" + variant + "\"");
  }
  if (j.contains("scale")) {
    spec.scale = require_number(j, "scale");
    if (!(spec.scale > 0.0)) throw ParseError("scale must be positive");
  }
  return spec;
}

json quadrature_result_to_json(const QuadratureResult& r) {
  return {{"value", r.value},
          {"abs_error_estimate", r.abs_error_estimate},
          {"panels", r.panels},
          {"converged", r.converged}};
}

json series_result_to_json(const SeriesResult& r) {
  return {{"value", r.value},
          {"n_terms", r.n_terms},
          {"tail_estimate", r.tail_estimate},
          {"integral_part", r.integral_part},
          {"converged", r.converged}};
}

json certificate_to_json(const PsdCertificate& c) {
  return {{"min_eigenvalue", c.min_eigenvalue},
          {"max_eigenvalue", c.max_eigenvalue},
          {"passed", c.passed},
          {"tolerance_used", c.tolerance_used}};
}

std::string method_name(DecompositionMethod m) {
  switch (m) {
    case DecompositionMethod::Spectral: return "spectral";
    case DecompositionMethod::SchoenbergA: return "schoenberg-a";
    case DecompositionMethod::SchoenbergB: return "schoenberg-b";
    case DecompositionMethod::Bernstein: return "bernstein";
    case DecompositionMethod::BiFbmSeries: return "bifbm";
  }
  throw ParseError("unknown method");
}

DecompositionMethod method_from_name(const std::string& name) {
  if (name == "spectral") return DecompositionMethod::Spectral;
  if (name == "schoenberg-a") return DecompositionMethod::SchoenbergA;
  if (name == "schoenberg-b") return DecompositionMethod::SchoenbergB;
  if (name == "bernstein") return DecompositionMethod::Bernstein;
  if (name == "bifbm") return DecompositionMethod::BiFbmSeries;
  throw UsageError("unknown method \"" + name + "\"");
}

json report_to_json(const CrossValidationReport& r) {
  json pairs = json::array();
  for (const auto& [t, s] : r.non_converged_pairs)
    pairs.push_back(json::array({t, s}));
  return {{"method", method_name(r.method)},
          {"grid", r.grid},
          {"max_rel_dev", r.max_rel_dev},
          {"argmax_pair", json::array({r.argmax_t, r.argmax_s})},
          {"diagonal_max_rel_dev", r.diagonal_max_rel_dev},
          {"non_converged_pairs", pairs}};
}

json psi_results_to_json(
    const std::map<double, transforms::PsiPointResult>& results) {
  json j = json::object();
  for (const auto& [t, r] : results) {
    json entry = series_result_to_json(r.series);
    entry["divergent"] = r.divergent;
    j[fmt_double(t)] = std::move(entry);
  }
  return j;
}

json gram_to_json(const GramMatrix& g) {
  json rows = json::array();
  const size_t n = g.size();
  for (size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (size_t j = 0; j < n; ++j) row.push_back(g(i, j));
    rows.push_back(std::move(row));
  }
  return {{"grid", g.grid()}, {"entries", rows}};
}

std::string gram_to_csv(const GramMatrix& g) {
  std::ostringstream os;
  const size_t n = g.size();
  for (size_t j = 0; j < n; ++j)
    os << (j ? "," : "") << fmt_double(g.grid()[j]);
  os << "\n";
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j)
      os << (j ? "," : "") << fmt_double(g(i, j));
    os << "\n";
  }
  return os.str();
}

std::string ensemble_to_csv(const sampling::PathEnsemble& e) {
  std::ostringstream os;
  const size_t n = e.grid.size();
  for (size_t p = 0; p < e.n_paths; ++p) {
    for (size_t j = 0; j < n; ++j)
      os << (j ? "," : "") << fmt_double(e.at(p, j));
    os << "\n";
  }
  return os.str();
}

json ensemble_metadata(const sampling::PathEnsemble& e) {
  return {{"spec", spec_to_json(e.spec)},
          {"grid", e.grid},
          {"seed", e.seed},
          {"jitter_used", e.jitter_used}};
}

std::string element_to_csv(const rkhs::SpectralElement& f) {
  std::ostringstream os;
  os << "u,weight,re_f,im_f\n";
  const auto& nodes = f.node_set().nodes();
  const auto& weights = f.node_set().weights();
  for (size_t i = 0; i < nodes.size(); ++i)
    os << fmt_double(nodes[i]) << "," << fmt_double(weights[i]) << ","
       << fmt_double(f.values()[i].real()) << ","
       << fmt_double(f.values()[i].imag()) << "\n";
  return os.str();
}

rkhs::SpectralElement element_from_csv(const std::string& text,
                                       const WeightedMeasure& measure) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("u,weight", 0) != 0)
    throw ParseError("element csv must start with the u,weight,re_f,im_f header");
  std::vector<double> nodes, weights;
  std::vector<std::complex<double>> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double cols[4];
    size_t pos = 0;
    for (int c = 0; c < 4; ++c) {
      size_t next = line.find(',', pos);
      std::string cell = line.substr(
          pos, next == std::string::npos ? std::string::npos : next - pos);
      try {
        cols[c] = std::stod(cell);
      } catch (const std::exception&) {
        throw ParseError("bad element csv cell \"" + cell + "\"");
      }
      pos = next == std::string::npos ? line.size() : next + 1;
    }
    if (!(cols[0] > 0.0)) throw ParseError("element nodes must satisfy u > 0");
    if (!nodes.empty() && cols[0] <= nodes.back())
      throw ParseError("element nodes must be strictly increasing");
    if (cols[1] < 0.0) throw ParseError("element weights must be nonnegative");
    nodes.push_back(cols[0]);
    weights.push_back(cols[1]);
    values.emplace_back(cols[2], cols[3]);
  }
  auto set = rkhs::NodeSet::from_nodes(measure, std::move(nodes),
                                       std::move(weights));
  return rkhs::SpectralElement(set, std::move(values));
}

std::vector<double> parse_grid(const std::string& text) {
  double a = 0.0, b = 0.0;
  long n = 0;
  size_t c1 = text.find(':');
  size_t c2 = c1 == std::string::npos ? std::string::npos
                                      : text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw UsageError("grid must have the form a:b:n");
  try {
    a = std::stod(text.substr(0, c1));
    b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    n = std::stol(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw UsageError("grid must have the form a:b:n with numeric fields");
  }
  if (n < 1) throw UsageError("grid needs at least one point");
  std::vector<double> grid(n);
  for (long i = 0; i < n; ++i)
    grid[i] = n == 1 ? a : a + (b - a) * i / (double)(n - 1);
  return grid;
}

}  // namespace kk::io
