// synline: command-line front end for the incidence-geometry toolkit.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "synline.hpp"
#include "synline/builtin.hpp"
#include "synline/report.hpp"

namespace {

using namespace synline;
using report::Json;

struct Options {
  std::string format = "text";
  std::string output;
  std::uint64_t bound = 0;
};

Limits limits_from(const Options& o) {
  Limits l;
  std::uint64_t bound = o.bound;
  if (bound == 0) {
    if (const char* env = std::getenv("SYNLINE_BOUND")) {
      try {
        bound = std::stoull(env);
      } catch (const std::logic_error&) {
        throw CLI::ValidationError("SYNLINE_BOUND", std::string("not a number: ") + env);
      }
    }
  }
  if (bound > 0) {
    l.max_elements = bound;
    l.max_enumeration = std::max<std::uint64_t>(l.max_enumeration, bound);
  }
  return l;
}

void emit(const Options& o, const std::string& command, Json result) {
  const Json doc = report::envelope(command, std::move(result));
  const std::string text = o.format == "json" ? doc.dump(2) + "\n" : report::to_text(doc);
  if (o.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.output);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + o.output);
    out << text;
  }
}

Permutation read_point_perm(const std::string& arg) {
  if (arg.rfind("perm v1", 0) == 0) return parse_perm(arg);
  std::ifstream in(arg);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + arg);
  auto perms = read_perms(in);
  if (perms.size() != 1) throw Error(ErrorCode::ParseError, arg + ": expected one permutation");
  return perms.front();
}

SubGeometry read_sub(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  auto s = read_subset(in);
  return {s.points, s.lines};
}

std::vector<Index> parse_list(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw CLI::ValidationError("--part", "expected comma-separated indices, got '" + text + "'");
    out.push_back(static_cast<Index>(std::stoul(item)));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synline: finite incidence geometry toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--bound", opt.bound, "Override the desk-scale size limits (also SYNLINE_BOUND)");
  app.add_option("-o,--output", opt.output, "Write the report to a file");

  std::function<void()> action;
  std::string input, input2, perm_spec, sub_path, dump_path, part_text, map_path;
  std::uint64_t pg_q = 0, ag_q = 0;
  std::size_t stages = 1, max_elements = 0;
  Index point = 0, line = 0;
  bool lines_first = false, exclude_u = false, search = false, up_to_aut = false;
  std::string source_name;

  auto* build = app.add_subcommand("build", "Build a plane and write it as an incidence file");
  auto* build_src = build->add_option("--pg", pg_q, "PG(2,q)");
  build->add_option("--ag", ag_q, "AG(2,q)")->excludes(build_src);
  build->add_option("--source", source_name, "Named source or file");
  build->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      IncidenceStructure s;
      if (pg_q) s = build_pg(pg_q, lim);
      else if (ag_q) s = build_ag(ag_q, lim).structure;
      else if (!source_name.empty()) s = load_source(source_name, lim);
      else throw CLI::ValidationError("build", "one of --pg, --ag, --source is required");
      if (opt.format == "json") {
        emit(opt, "build", report::structure(s));
      } else if (opt.output.empty()) {
        write_incidence(std::cout, s);
      } else {
        std::ofstream out(opt.output);
        if (!out) throw Error(ErrorCode::ParseError, "cannot write " + opt.output);
        write_incidence(out, s);
      }
    };
  });

  auto* classify_cmd = app.add_subcommand("classify", "Classify an incidence structure");
  classify_cmd->add_option("input", input, "File or named source")->required();
  classify_cmd->callback([&] {
    action = [&] {
      const auto s = load_source(input, limits_from(opt));
      Json j = report::plane_class(classify(s));
      j["npoints"] = s.npoints();
      j["nlines"] = s.nlines();
      j["dual_consistent"] = s.dual_consistent();
      emit(opt, "classify", j);
    };
  });

  auto* aut = app.add_subcommand("aut", "Full collineation group");
  aut->add_option("input", input)->required();
  aut->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      const auto s = load_source(input, lim);
      const auto g = automorphism_group(s, lim);
      Json j = report::group(g);
      j["point_orbits"] = orbits(g.point_action()).size();
      j["line_orbits"] = orbits(g.line_action()).size();
      emit(opt, "aut", j);
    };
  });

  auto* fixed = app.add_subcommand("fixed", "Fixed structure of a collineation given by its point permutation");
  fixed->add_option("input", input)->required();
  fixed->add_option("--perm", perm_spec, "perm v1 line or file")->required();
  fixed->callback([&] {
    action = [&] {
      const auto s = load_source(input, limits_from(opt));
      const auto g = collineation_from_points(s, read_point_perm(perm_spec));
      emit(opt, "fixed", report::fixed(s, g));
    };
  });

  auto* antiflags = app.add_subcommand("antiflags", "Orbits of the collineation group on anti-flags");
  antiflags->add_option("input", input)->required();
  antiflags->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      const auto s = load_source(input, lim);
      emit(opt, "antiflags", report::anti_flags(anti_flag_orbits(s, lim)));
    };
  });

  auto* pencil = app.add_subcommand("pencil", "Pencil group of a synthetic line (projective type, or affine with --line)");
  pencil->add_option("input", input)->required();
  pencil->add_option("--point", point, "Base point")->required();
  auto* pencil_line = pencil->add_option("--line", line, "Deleted line (affine type)");
  pencil->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      const auto s = load_source(input, lim);
      Json j;
      if (pencil_line->count()) {
        j = report::pencil(pencil_group(make_affine_line(s, line, point), lim));
        j["type"] = "affine";
      } else {
        j = report::pencil(pencil_group(make_projective_line(s, point), lim));
        j["type"] = "projective";
      }
      emit(opt, "pencil", j);
    };
  });

  auto* inherit = app.add_subcommand("inherit", "Inheritance question for a projective-type line");
  inherit->add_option("input", input)->required();
  inherit->add_option("--point", point)->required();
  inherit->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      const auto s = load_source(input, lim);
      emit(opt, "inherit", report::inheritance(inheritance_check(s, point, automorphism_group(s, lim), lim)));
    };
  });

  auto* generate = app.add_subcommand("generate", "Generation question for a projective-type line");
  generate->add_option("input", input)->required();
  generate->add_option("--point", point)->required();
  generate->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      const auto s = load_source(input, lim);
      emit(opt, "generate", report::generation(generation_check(s, point, automorphism_group(s, lim), lim)));
    };
  });

  auto* buek = app.add_subcommand("buekenhout", "Axioms of the central-collineation family on a line");
  buek->add_option("input", input)->required();
  buek->add_option("--line", line)->required();
  buek->add_flag("--exclude-u", exclude_u, "Leave the line itself out of the axis range");
  buek->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      const auto s = load_source(input, lim);
      const auto f = buekenhout_from_plane(s, line, !exclude_u, lim);
      Json j = report::buekenhout(buekenhout_axioms(f));
      j["include_u"] = !exclude_u;
      emit(opt, "buekenhout", j);
    };
  });

  auto* freeclose = app.add_subcommand("freeclose", "Truncated free completion");
  freeclose->add_option("input", input)->required();
  freeclose->add_option("--stages", stages, "Number of stages")->required();
  freeclose->add_option("--max-elements", max_elements, "Stop before a stage exceeding this size");
  freeclose->add_flag("--lines-first", lines_first, "Stage 1 adds lines");
  freeclose->add_option("--dump", dump_path, "Write the last stage with provenance records");
  freeclose->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      const auto s = load_source(input, lim);
      CompletionBudget budget{stages, std::nullopt};
      if (max_elements) budget.max_elements = max_elements;
      const auto st = free_complete(s, budget, lines_first, lim);
      if (!dump_path.empty()) {
        std::ofstream out(dump_path);
        if (!out) throw Error(ErrorCode::ParseError, "cannot write " + dump_path);
        write_stage(out, st.back());
      }
      emit(opt, "freeclose", Json{{"stages", report::stages(st)}});
    };
  });

  auto* pipeline = app.add_subcommand("pipeline", "Anti-flag pipeline: 'fano' or a plane (least anti-flag-only element)");
  pipeline->add_option("input", input)->required();
  pipeline->add_option("--stages", stages)->required();
  pipeline->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      if (input == "fano") {
        emit(opt, "pipeline", report::pipeline(fano_pipeline(stages, lim)));
        return;
      }
      const auto s = load_source(input, lim);
      const auto alpha = anti_flag_only_element(s, automorphism_group(s, lim), std::nullopt, lim);
      if (!alpha) throw Error(ErrorCode::PreconditionFailed, "no anti-flag-only collineation");
      emit(opt, "pipeline", report::pipeline(anti_flag_pipeline(s, *alpha, stages, lim)));
    };
  });

  auto* confined = app.add_subcommand("confined", "Confinement and confined core; --stages probes a free completion");
  confined->add_option("input", input)->required();
  auto* confined_stages = confined->add_option("--stages", stages, "Probe this many completion stages");
  confined->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      const auto s = load_source(input, lim);
      Json j = report::confinement(s);
      if (confined_stages->count()) j["probe"] = report::probe(confinement_probe(free_complete(s, stages, false, lim)));
      emit(opt, "confined", j);
    };
  });

  auto* morph = app.add_subcommand("morph", "Check a morphism file, search an embedding, or build a triangle epimorphism");
  morph->add_option("source", input)->required();
  morph->add_option("target", input2, "Target structure (with --map or --search)");
  morph->add_option("--map", map_path, "Morphism file (morph v1)");
  morph->add_flag("--search", search, "Search for an embedding of source into target");
  auto* tri_line = morph->add_option("--triangle", line, "Triangle epimorphism with this line");
  morph->add_option("--part", part_text, "Points of the first part, comma separated");
  morph->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      const auto src = load_source(input, lim);
      if (tri_line->count()) {
        const auto f = triangle_epimorphism(src, Partition2{line, parse_list(part_text)});
        emit(opt, "morph", report::morphism(f));
        return;
      }
      if (input2.empty()) throw CLI::ValidationError("morph", "a target is required without --triangle");
      const auto tgt = load_source(input2, lim);
      if (search) {
        const auto f = find_embedding(src, tgt);
        Json j{{"found", f.has_value()}};
        if (f) {
          j["morphism"] = report::morphism(*f);
          if (classify(src).is_affine() && classify(tgt).is_affine()) {
            const auto v = subfield_subline_check(*f);
            j["subfield"] = Json{{"subplane_order", v.subplane_order}, {"target_order", v.target_order}, {"subfield", v.subfield}};
          }
        }
        emit(opt, "morph", j);
        return;
      }
      if (map_path.empty()) throw CLI::ValidationError("morph", "one of --map, --search, --triangle is required");
      std::ifstream in(map_path);
      if (!in) throw Error(ErrorCode::ParseError, "cannot open " + map_path);
      const auto m = read_morphism(in, src.npoints(), src.nlines());
      emit(opt, "morph", report::morphism(GeometryMorphism{src, tgt, m.point_map, m.line_map}));
    };
  });

  auto* ab = app.add_subcommand("ab", "AB-set predicates of a subgeometry");
  ab->add_option("input", input)->required();
  ab->add_option("--sub", sub_path, "Subgeometry file (sub v1); empty set if omitted");
  ab->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      const auto s = load_source(input, lim);
      const SubGeometry c = sub_path.empty() ? SubGeometry{} : read_sub(sub_path);
      emit(opt, "ab", report::ab(ab_predicates(s, c, lim)));
    };
  });

  auto* ovals = app.add_subcommand("ovals", "Ovals, their orbits and rigid ones");
  ovals->add_option("input", input)->required();
  ovals->add_flag("--up-to-aut", up_to_aut, "Search through triangle orbit representatives only");
  ovals->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      const auto s = load_source(input, lim);
      const auto g = automorphism_group(s, lim);
      Json j;
      if (up_to_aut) {
        const auto found = ovals_up_to_aut(s, g);
        std::size_t rigid = 0;
        std::map<std::uint64_t, std::size_t> stabilizers;
        for (const auto& o : found) {
          rigid += is_rigid_oval(s, o, lim);
          ++stabilizers[set_stabilizer_group(s, o.points, {}, lim).order()];
        }
        j = Json{{"mode", "up_to_aut"},
                 {"triangle_orbits", triangle_orbit_representatives(s, g).size()},
                 {"ovals_found", found.size()},
                 {"stabilizer_orders", report::histogram(stabilizers)},
                 {"rigid", rigid}};
      } else {
        const auto all = enumerate_ovals(s);
        const auto orbs = oval_orbits(s, all, g, lim);
        std::size_t rigid = 0;
        for (const auto& o : orbs)
          if (o.rigid) rigid += o.size;
        j = Json{{"mode", "exhaustive"}, {"count", all.size()}, {"orbits", report::oval_orbits(orbs)}, {"rigid", rigid}};
      }
      emit(opt, "ovals", j);
    };
  });

  auto* rigidity = app.add_subcommand("rigidity", "Rigidity profile of an affine plane");
  rigidity->add_option("input", input)->required();
  rigidity->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      emit(opt, "rigidity", report::rigidity(rigidity_profile(load_source(input, lim), lim)));
    };
  });

  auto* seed = app.add_subcommand("seed", "Rigid-plane seed: host minus a subgeometry");
  seed->add_option("input", input)->required();
  seed->add_option("--sub", sub_path, "Subgeometry to leave away (sub v1)");
  seed->add_option("--stages", stages, "Completion stages checked as evidence")->default_val(0);
  seed->callback([&] {
    action = [&] {
      const auto lim = limits_from(opt);
      const auto s = load_source(input, lim);
      const SubGeometry c = sub_path.empty() ? SubGeometry{} : read_sub(sub_path);
      emit(opt, "seed", report::seed(rigid_plane_seed(s, c, stages, lim)));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    action();
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
