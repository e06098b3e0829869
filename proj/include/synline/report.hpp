#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "synline/ab_rigidity.hpp"
#include "synline/collineations.hpp"
#include "synline/free_completion.hpp"
#include "synline/incidence.hpp"
#include "synline/morphisms.hpp"
#include "synline/synthetic_lines.hpp"

namespace synline::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "synline-1";

inline Json envelope(const std::string& command, Json result) {
  return Json{{"schema", kSchema}, {"command", command}, {"result", std::move(result)}};
}

inline Json structure(const IncidenceStructure& s) {
  Json lines = Json::array();
  for (Index l = 0; l < s.nlines(); ++l) {
    auto pts = s.points_of_line(l);
    lines.push_back(std::vector<Index>(pts.begin(), pts.end()));
  }
  return Json{{"npoints", s.npoints()}, {"nlines", s.nlines()}, {"lines", lines}};
}

inline Json plane_class(const PlaneClass& c) {
  Json j{{"tag", std::string(to_string(c.tag))}};
  j["order"] = c.order ? Json(*c.order) : Json(nullptr);
  j["reason"] = c.reason ? Json(*c.reason) : Json(nullptr);
  return j;
}

inline Json collineation(const Collineation& g) {
  return Json{{"points", g.points.images()}, {"lines", g.lines.images()}};
}

inline Json group(const CollineationGroup& g) {
  Json gens = Json::array();
  for (const auto& c : g.generators()) gens.push_back(collineation(c));
  return Json{{"order", g.order()}, {"generators", gens}};
}

template <class Map>
Json histogram(const Map& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

inline Json fixed(const IncidenceStructure& s, const Collineation& g) {
  const auto f = fixed_counts(s, g);
  const auto kind = classify_perspectivity(s, g);
  Json j{{"fixed_points", f.points.size()},
         {"fixed_lines", f.lines.size()},
         {"points", f.points},
         {"lines", f.lines},
         {"conjugation_check", incidence_conjugation_check(s, g)},
         {"perspectivity", std::string(to_string(kind.kind))}};
  j["center"] = kind.center ? Json(*kind.center) : Json(nullptr);
  j["axis"] = kind.axis ? Json(*kind.axis) : Json(nullptr);
  return j;
}

inline Json anti_flags(const AntiFlagOrbits& o) {
  Json reps = Json::array();
  for (const auto& a : o.representatives) reps.push_back(Json{{"point", a.point}, {"line", a.line}});
  return Json{{"orbit_count", o.count()}, {"representatives", reps}, {"sizes", o.sizes}};
}

inline Json pencil(const PencilAction& a) {
  return Json{{"source_order", a.source_order},
              {"kernel_order", a.kernel_order},
              {"induced_order", a.induced_order},
              {"quotient_consistent", a.source_order == a.kernel_order * a.induced_order}};
}

inline Json inheritance(const InheritanceReport& r) {
  Json un = Json::array();
  for (const auto& p : r.uninherited) un.push_back(p.images());
  return Json{{"base_point", r.base_point},     {"induced_order", r.induced_order},
              {"inherited_count", r.inherited_count}, {"lines_considered", r.lines_considered},
              {"holds", r.holds},               {"uninherited", un}};
}

inline Json generation(const GenerationQuestionReport& r) {
  return Json{{"base_point", r.base_point},
              {"induced_order", r.induced_order},
              {"generated_order", r.generated_order},
              {"holds", r.holds}};
}

inline Json buekenhout(const BuekenhoutReport& r) {
  Json failures = Json::array();
  for (const auto& w : r.failures) failures.push_back(Json{{"p", w.p}, {"q", w.q}, {"detail", w.detail}});
  return Json{{"axiom_a", r.axiom_a},
              {"axiom_b", r.axiom_b},
              {"axiom_c", r.axiom_c},
              {"axiom_d", r.axiom_d},
              {"all_axioms", r.all_axioms()},
              {"desarguesian", r.desarguesian},
              {"sharply_desarguesian", r.sharply_desarguesian},
              {"strict_commutation", r.strict_commutation},
              {"failures", failures}};
}

inline Json stages(const std::vector<CompletionStage>& st) {
  Json j = Json::array();
  for (const auto& s : st) {
    std::size_t new_points = 0, new_lines = 0;
    for (auto b : s.point_birth) new_points += b == s.index && s.index > 0;
    for (auto b : s.line_birth) new_lines += b == s.index && s.index > 0;
    j.push_back(Json{{"stage", s.index},
                     {"npoints", s.structure.npoints()},
                     {"nlines", s.structure.nlines()},
                     {"new_points", new_points},
                     {"new_lines", new_lines},
                     {"partial_linear", is_partial_linear(s.structure)},
                     {"provenance_sound", provenance_sound(s)}});
  }
  return j;
}

inline Json pipeline(const PipelineReport& r) {
  Json per = Json::array();
  for (const auto& s : r.per_stage) {
    per.push_back(Json{{"stage", s.stage},
                       {"npoints", s.npoints},
                       {"nlines", s.nlines},
                       {"fixed_points", s.fixed_points.size()},
                       {"fixed_lines", s.fixed_lines.size()},
                       {"point_orbits", histogram(s.point_orbits)},
                       {"line_orbits", histogram(s.line_orbits)}});
  }
  return Json{{"alpha", collineation(r.alpha)},
              {"alpha_order", r.alpha_order},
              {"x", r.x},
              {"M", r.m},
              {"seed_x", r.seed_x},
              {"fixes_only_x", r.fixes_only_x},
              {"uniform_orbits", r.uniform_orbits},
              {"stages", per}};
}

inline Json confinement(const IncidenceStructure& s) {
  const auto core = confined_core(s);
  return Json{{"confined", is_confined(s)},
              {"core_points", core.point_to_parent},
              {"core_lines", core.line_to_parent},
              {"core_npoints", core.structure.npoints()},
              {"core_nlines", core.structure.nlines()}};
}

inline Json probe(const std::vector<ConfinementProbe>& p) {
  Json j = Json::array();
  for (const auto& r : p)
    j.push_back(Json{{"stage", r.stage},
                     {"core_points", r.core_points},
                     {"core_lines", r.core_lines},
                     {"core_inside_seed", r.core_inside_seed},
                     {"desargues_found", r.desargues_found},
                     {"desargues_outside_seed", r.desargues_outside_seed}});
  return j;
}

inline Json morphism(const GeometryMorphism& f) {
  const auto e = is_embedding(f);
  const auto fr = fibers(f);
  const auto img = image_structure(f);
  Json missing = Json::array();
  for (auto [a, b] : img.missing_intersections) missing.push_back({a, b});
  Json j{{"point_map", f.point_map},
         {"line_map", f.line_map},
         {"preserves_incidence", preserves_incidence(f)},
         {"morphism", is_morphism(f)},
         {"embedding", e.embedding},
         {"surjective", is_surjective(f)},
         {"point_fibers", fr.point_fibers},
         {"line_fibers", fr.line_fibers},
         {"image", plane_class(img.cls)},
         {"missing_intersections", missing}};
  j["subplane_order"] = e.subplane_order ? Json(*e.subplane_order) : Json(nullptr);
  return j;
}

inline Json ab(const ABReport& r) {
  auto witness = [](const std::optional<Collineation>& w) { return w ? collineation(*w) : Json(nullptr); };
  return Json{{"ab1", r.ab1},
              {"ab2", r.ab2},
              {"ab3", r.ab3},
              {"ab1_witness", witness(r.ab1_witness)},
              {"ab2_witness", witness(r.ab2_witness)},
              {"ab3_witness", witness(r.ab3_witness)},
              {"complement_order", r.complement_order},
              {"setwise_order", r.setwise_order},
              {"elementwise_order", r.elementwise_order},
              {"extension_unique", r.extension_unique},
              {"induced_flags", true}};
}

inline Json oval_orbits(const std::vector<OvalOrbit>& orbits) {
  Json j = Json::array();
  for (const auto& o : orbits)
    j.push_back(Json{{"representative", o.representative.points},
                     {"size", o.size},
                     {"stabilizer_order", o.stabilizer_order},
                     {"rigid", o.rigid}});
  return j;
}

inline Json rigidity(const RigidityProfile& p) {
  std::vector<Index> rigid_points;
  for (Index w = 0; w < p.per_point.size(); ++w)
    if (p.per_point[w]) rigid_points.push_back(w);
  return Json{{"line_at_infinity_rigid", p.line_at_infinity_rigid},
              {"all_points_rigid", p.all_points_rigid},
              {"npoints", p.per_point.size()},
              {"rigid_points", rigid_points}};
}

inline Json seed(const SeedReport& r) {
  Json ev = Json::array();
  for (const auto& e : r.evidence)
    ev.push_back(Json{{"stage", e.stage}, {"npoints", e.npoints}, {"nlines", e.nlines}, {"aut_order", e.aut_order}});
  return Json{{"npoints", r.seed.structure.npoints()},
              {"nlines", r.seed.structure.nlines()},
              {"confined", r.confined},
              {"rigid", r.rigid},
              {"certified", r.certified},
              {"evidence_label", "stage-n evidence"},
              {"evidence", ev}};
}

namespace detail {

inline void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  auto scalar = [](const Json& v) { return v.is_primitive(); };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && std::all_of(j.begin(), j.end(), scalar)) {
    out << prefix << ':';
    for (const auto& v : j) out << ' ' << (v.is_string() ? v.get<std::string>() : v.dump());
    out << '\n';
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace detail

/// `key.path: value` lines, keys in JSON order.
inline std::string to_text(const Json& j) {
  std::ostringstream out;
  detail::flatten(j, "", out);
  return out.str();
}

}  // namespace synline::report
