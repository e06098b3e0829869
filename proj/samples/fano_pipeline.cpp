// Extends an order-3 anti-flag collineation of the Fano plane through a few
// stages of free completion and prints what it fixes at each stage.

#include <cstdio>
#include <cstdlib>

#include "synline/free_completion.hpp"

int main(int argc, char** argv) {
  const std::size_t stages = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 4;
  const auto r = synline::fano_pipeline(stages);
  std::printf("alpha has order %llu, fixes point %u and line %u\n",
              static_cast<unsigned long long>(r.alpha_order), r.x, r.m);
  for (const auto& s : r.per_stage) {
    std::printf("stage %zu: %4zu points %4zu lines, fixed %zu/%zu, point orbits:", s.stage, s.npoints, s.nlines,
                s.fixed_points.size(), s.fixed_lines.size());
    for (auto [size, count] : s.point_orbits) std::printf(" %zux%zu", count, size);
    std::printf("\n");
  }
  std::printf("only x fixed: %s, uniform orbits: %s\n", r.fixes_only_x ? "yes" : "no",
              r.uniform_orbits ? "yes" : "no");
}
