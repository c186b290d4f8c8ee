#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "lmgr/bench_tools.hpp"

namespace lmgr::testing {

struct SuiteOptions {
  std::size_t problems_per_domain = 20;
  std::size_t goals_per_problem = 4;
  std::uint64_t seed = 7;
};

// Writes <root>/<domain>/pNN/ bundles for three generated domains (home
// navigation with lights, blocksworld, one-truck logistics). All candidate
// goals of a problem have the same size, like the classic benchmark corpus;
// the true goal is hypothesis 0. Returns the bundle directories.
std::vector<std::filesystem::path> write_base_suite(const std::filesystem::path& root,
                                                    const SuiteOptions& options = {});

// For every base bundle and every variant writes
// <out>/<variant label>/<domain>/pNN/. All variants of one base problem share
// the same mutated goal set.
void write_variant_suite(const std::filesystem::path& base_root,
                         const std::filesystem::path& out_root,
                         const std::vector<VariantKind>& variants, std::uint64_t seed);

}  // namespace lmgr::testing
