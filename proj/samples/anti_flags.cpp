// Anti-flag orbits of a plane and the pencil group of one affine-type line
// per orbit. Accepts any source understood by load_source.

#include <cstdio>
#include <string>

#include "synline/builtin.hpp"
#include "synline/synthetic_lines.hpp"

int main(int argc, char** argv) {
  const std::string src = argc > 1 ? argv[1] : "pg3";
  const auto plane = synline::load_source(src);
  const auto g = synline::automorphism_group(plane);
  const auto orbs = synline::anti_flag_orbits(plane, g);
  std::printf("%s: |Aut| = %llu, %zu anti-flag orbit(s)\n", src.c_str(), static_cast<unsigned long long>(g.order()),
              orbs.count());
  for (std::size_t i = 0; i < orbs.count(); ++i) {
    const auto& a = orbs.representatives[i];
    const auto pencil = synline::pencil_group(synline::make_affine_line(plane, a.line, a.point), g);
    std::printf("  (%u, %u): orbit %zu, pencil %llu = %llu x %llu\n", a.point, a.line, orbs.sizes[i],
                static_cast<unsigned long long>(pencil.source_order),
                static_cast<unsigned long long>(pencil.kernel_order),
                static_cast<unsigned long long>(pencil.induced_order));
  }
}
