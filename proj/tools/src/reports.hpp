#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include <entgeom/divergence.hpp>
#include <entgeom/entanglement.hpp>
#include <entgeom/inner_radius.hpp>
#include <entgeom/maximal.hpp>

namespace entgeom::cli {

using nlohmann::json;

struct CsvRow {
  std::string quantity;
  double lower = 0.0;
  double upper = 0.0;
  std::string notes;
};

json to_json(const NormBracket& b);
json to_json(const CVector& v);
json to_json(const CMatrix& m);
json to_json(const ProductVector& p);
json to_json(const ProductDecomposition& d);
json to_json(const MaximalityEvidence& e);
json to_json(const WitnessCertificate& w);
json to_json(const SeparableDecomposition& s);
json to_json(const InnerRadiusResult& r);
json to_json(const DivergentState& d);

std::string render_csv(const std::vector<CsvRow>& rows);

}  // namespace entgeom::cli
