#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "kernelkit/decompositions.hpp"
#include "kernelkit/kernels.hpp"
#include "kernelkit/measures.hpp"
#include "kernelkit/rkhs.hpp"
#include "kernelkit/sampling.hpp"
#include "kernelkit/transforms.hpp"

namespace kk::io {

using json = nlohmann::json;

// Measures: {"family":"power_law","c":...,"p":...} | {"family":"exp_over_u"},
// optional "normalization". Custom densities are not serializable.
json measure_to_json(const WeightedMeasure& m);
WeightedMeasure measure_from_json(const json& j);

// Generators: {"form":"abs"} | {"form":"power","exponent":e} |
// {"form":"log1p"} | {"form":"bernstein","measure":{...}}.
json generator_to_json(const GeneratorFunction& g);
GeneratorFunction generator_from_json(const json& j);

// Kernel specs: {"variant":"fbm","H":...} | {"variant":"bifbm","H":...,
// "alpha":...} | {"variant":"krein","r":...} | {"variant":
// "bernstein_composite","r":...,"phi_measure":{...}} | {"variant":"log"};
// optional "scale".
json spec_to_json(const KernelSpec& spec);
KernelSpec spec_from_json(const json& j);

json quadrature_result_to_json(const QuadratureResult& r);
json series_result_to_json(const SeriesResult& r);
json certificate_to_json(const PsdCertificate& c);
json report_to_json(const CrossValidationReport& r);

// Per-point transform results keyed by t (stringified decimal).
json psi_results_to_json(
    const std::map<double, transforms::PsiPointResult>& results);

std::string method_name(DecompositionMethod m);
DecompositionMethod method_from_name(const std::string& name);

json gram_to_json(const GramMatrix& g);
// Row-major CSV, header row = grid points.
std::string gram_to_csv(const GramMatrix& g);

// One path per row.
std::string ensemble_to_csv(const sampling::PathEnsemble& e);
json ensemble_metadata(const sampling::PathEnsemble& e);

// Columns u, weight, re_f, im_f.
std::string element_to_csv(const rkhs::SpectralElement& f);
rkhs::SpectralElement element_from_csv(const std::string& text,
                                       const WeightedMeasure& measure);

// "a:b:n" -> n equally spaced points from a to b inclusive.
std::vector<double> parse_grid(const std::string& text);

}  // namespace kk::io
