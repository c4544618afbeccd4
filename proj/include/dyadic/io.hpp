// File formats: cloud ingestion (CSV coordinates, JSON distance matrix),
// JSON exports for nets / systems / families / decompositions, function CSVs,
// and small report helpers.
#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "dyadic/adjacent_systems.hpp"
#include "dyadic/dyadic_cubes.hpp"
#include "dyadic/haar_analysis.hpp"
#include "dyadic/metric_core.hpp"
#include "dyadic/sparse_decomposition.hpp"

namespace dyadic {

using json = nlohmann::json;

// `id,x1,...,xd` rows, optional header line.
PointCloud cloud_from_csv(const std::string& path);
// {"dist": [[...],...]} or {"n": n, "dist": [flat row-major]}
PointCloud cloud_from_json(const std::string& path);

json nets_to_json(const NestedNets& nets);
NestedNets nets_from_json(const json& j);

json haar_system_to_json(const HaarSystem& haar);
json coefficients_to_json(const HaarCoefficients& coeffs);
HaarCoefficients coefficients_from_json(const json& j);

json system_to_json(const DyadicSystem& sys);
DyadicSystem system_from_json(const json& j, int n_points);

json family_to_json(const AdjacentFamily& fam);
json host_result_to_json(const HostSearchResult& res);
json decomposition_to_json(const SparseDecomposition& dec);
json tau_to_json(const TauMap& tau);

// `point_id,e1,...,ed`
void function_to_csv(const VectorFunction& f, const std::string& path);
VectorFunction function_from_csv(const std::string& path);

// {op, inputs-hash, value, stderr, budget, pass}
json stochastic_report(const std::string& op, std::uint64_t inputs_hash, double value,
                       double std_error, double budget, bool pass);

std::uint64_t fnv1a(const std::string& data);
std::string format_double(double v);  // shortest round-trip-stable text

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);
json read_json_file(const std::string& path);

}  // namespace dyadic
