#ifndef KRS_JSON_IO_HPP
#define KRS_JSON_IO_HPP

#include <json.hpp>
#include <string>
#include <vector>

#include "krs/character.hpp"
#include "krs/kempfness.hpp"
#include "krs/polytope.hpp"
#include "krs/soliton.hpp"

namespace krs {

using nlohmann::json;

/// {"dim": n, "rays": [[int,...],...]} or
/// {"dim": n, "facets": [{"normal": [int,...], "offset": "p/q"},...]}.
MomentPolytope polytope_from_json(const json& j);
json polytope_to_json(const MomentPolytope& P);

/// Built-in anticanonical examples: cp1, cp2, bl1cp2, p1xp1.
std::vector<std::vector<long long>> example_rays(const std::string& name);

/// {"m": m, "weights": [{"u": [...], "mult": k},...]}.
json character_to_json(const WeightedCharacter& chi);
WeightedCharacter character_from_json(const json& j);
std::string character_to_csv(const WeightedCharacter& chi);

json soliton_report_to_json(const SolitonReport& rep);

/// {"levels": [{"m": m, "weights": [{"u": [..., j], "mult": k},...]},...]}.
EquivariantWeightTable weight_table_from_json(const json& j);

/// {"k": k, "weights": [[int,...],...], "point": [[re, im],...]}.
TorusRepPoint rep_from_json(const json& j);
json stability_to_json(const StabilityVerdict& v);

/// Lattice-point dump, one block per level: header "m,u1,...,un".
std::string lattice_points_csv(const MomentPolytope& P, int m_max);

}  // namespace krs

#endif
