#include "plogit/serialize.hpp"

#include <stdexcept>

namespace plogit {

std::string bits_to_string(const std::vector<int>& bits) {
  std::string s;
  for (int v : bits) s.push_back(v ? '1' : '0');
  return s;
}

std::vector<int> bits_from_string(std::string_view bits) {
  std::vector<int> out;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("bit string must contain only 0 and 1");
    out.push_back(ch - '0');
  }
  return out;
}

void to_json(json& j, const RationalMatrix& m) {
  j = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (const auto& q : m.row(i)) row.push_back(to_string(q));
    j.push_back(std::move(row));
  }
}

void from_json(const json& j, RationalMatrix& m) {
  if (!j.is_array()) throw std::invalid_argument("matrix must be a JSON array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j.at(0).size() : 0;
  m = RationalMatrix(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw std::invalid_argument("ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = parse_rational(j[i][k].get<std::string>());
  }
}

void to_json(json& j, const ModelSpec& spec) {
  j = json{{"p", spec.p}, {"T", spec.T}, {"init", bits_to_string(spec.init)}};
}

void from_json(const json& j, ModelSpec& spec) {
  spec.p = j.at("p").get<int>();
  spec.T = j.at("T").get<int>();
  spec.init = bits_from_string(j.at("init").get<std::string>());
  spec.validate();
}

void to_json(json& j, const ExpParams& params) {
  j = json{{"u", params.u}, {"c", params.c}, {"b", params.b}};
}

void from_json(const json& j, ExpParams& params) {
  params.u = j.at("u").get<Rational>();
  params.c = j.at("c").get<std::vector<Rational>>();
  params.b = j.at("b").get<std::vector<Rational>>();
}

void to_json(json& j, const BuiltMatrix& built) {
  j = json{{"kind", std::string(to_string(built.kind))},
           {"spec", built.spec},
           {"column_index_map", built.column_index_map},
           {"matrix", built.matrix}};
}

void to_json(json& j, const RationalPoly& poly) { j = poly.coefficients(); }

void from_json(const json& j, RationalPoly& poly) {
  poly = RationalPoly(j.get<std::vector<Rational>>());
}

void to_json(json& j, const RankCertificate& cert) {
  j = json{{"claimed_rank", cert.claimed_rank},
           {"method", std::string(to_string(cert.method))},
           {"draws_used", cert.draws_used},
           {"seeds", cert.seeds},
           {"trial_ranks", cert.trial_ranks},
           {"stable_across_trials", cert.stable_across_trials}};
}

void to_json(json& j, const MomentBasis& basis) {
  j = json{{"spec", basis.spec},
           {"c", basis.c},
           {"b", basis.b},
           {"d", basis.d},
           {"certificate", basis.certificate},
           {"construction_draws", basis.construction_draws.u},
           {"basis", basis.basis}};
}

void to_json(json& j, const BasisValidation& v) {
  j = json{{"valid", v.valid},
           {"n_fresh", v.n_fresh},
           {"max_abs_violation", v.max_abs_violation},
           {"columns_independent", v.columns_independent}};
  if (v.offending_u) j["offending_u"] = *v.offending_u;
  if (v.offending_column) j["offending_column"] = *v.offending_column;
}

void to_json(json& j, const DimensionRow& row) {
  std::string seeds;
  for (std::size_t k = 0; k < row.certificate.seeds.size(); ++k)
    seeds += (k ? ";" : "") + std::to_string(row.certificate.seeds[k]);
  j = json{{"p", row.cell.p},
           {"T", row.cell.T},
           {"init", bits_to_string(row.cell.init)},
           {"pattern", row.cell.design.label()},
           {"rank", row.rank},
           {"dim", row.dim},
           {"expected", row.expected ? json(*row.expected) : json(nullptr)},
           {"match", row.match},
           {"asserted", row.asserted},
           {"method", std::string(to_string(row.certificate.method))},
           {"seeds", seeds},
           {"stable", row.certificate.stable_across_trials},
           {"c", row.c},
           {"b", row.b},
           {"note", row.note}};
}

void to_json(json& j, const PatternReport& r) {
  j = json{{"T", r.T},
           {"init", bits_to_string(r.init)},
           {"pattern", r.pattern},
           {"pattern_dim", r.pattern_dim},
           {"generic_dim", r.generic_dim},
           {"surplus", r.surplus},
           {"lower_bound", r.lower_bound},
           {"passed", r.passed}};
}

void to_json(json& j, const StackedReport& r) {
  j = json{{"T", r.T},
           {"single_ranks", r.single_ranks},
           {"stacked_rank", r.stacked_rank},
           {"identical_draws", r.identical_draws}};
}

namespace gmm {

void to_json(json& j, const EstimateResult& r) {
  j = json{{"gamma_hat", r.gamma_hat},
           {"objective_value", r.objective_value},
           {"evaluations", r.evaluations},
           {"converged", r.converged}};
}

void to_json(json& j, const McRow& r) {
  j = json{{"N", r.N},
           {"T", r.T},
           {"p", r.p},
           {"gamma_true", r.gamma_true},
           {"reps", r.reps},
           {"mean_bias", r.mean_bias},
           {"median_bias", r.median_bias},
           {"rmse", r.rmse},
           {"failures", r.failures},
           {"seed", r.seed}};
}

}  // namespace gmm
}  // namespace plogit
