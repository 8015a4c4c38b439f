#pragma once

#include "plogit/builders.hpp"
#include "plogit/certificate.hpp"
#include "plogit/gmm.hpp"
#include "plogit/model.hpp"
#include "plogit/moment_space.hpp"
#include "plogit/polynomial.hpp"
#include "plogit/rational_matrix.hpp"

#include <json.hpp>

namespace nlohmann {

/// Rationals travel as "p/q" strings.
template <>
struct adl_serializer<mpq_class> {
  static void to_json(json& j, const mpq_class& q) { j = plogit::to_string(q); }
  static void from_json(const json& j, mpq_class& q) {
    q = plogit::parse_rational(j.get<std::string>());
  }
};

}  // namespace nlohmann

namespace plogit {

using nlohmann::json;

std::string bits_to_string(const std::vector<int>& bits);
std::vector<int> bits_from_string(std::string_view bits);

void to_json(json& j, const RationalMatrix& m);
void from_json(const json& j, RationalMatrix& m);

void to_json(json& j, const ModelSpec& spec);
void from_json(const json& j, ModelSpec& spec);

void to_json(json& j, const ExpParams& params);
void from_json(const json& j, ExpParams& params);

void to_json(json& j, const BuiltMatrix& built);
void to_json(json& j, const RationalPoly& poly);
void from_json(const json& j, RationalPoly& poly);
void to_json(json& j, const RankCertificate& cert);
void to_json(json& j, const MomentBasis& basis);
void to_json(json& j, const BasisValidation& validation);
void to_json(json& j, const DimensionRow& row);
void to_json(json& j, const PatternReport& report);
void to_json(json& j, const StackedReport& report);

namespace gmm {
void to_json(json& j, const EstimateResult& result);
void to_json(json& j, const McRow& row);
}  // namespace gmm

}  // namespace plogit
