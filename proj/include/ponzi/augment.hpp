#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ponzi/ast.hpp"
#include "ponzi/rng.hpp"

namespace ponzi {

struct AugmentationConfig {
    std::uint64_t seed = 0;
    int k_min = 2;
    int k_max = 5;
    std::optional<int> fixed_k = 4;  // overrides the random draw when set
    std::string rename_prefix = "v_";
};

// The three augmented views of one contract: source text plus its reparsed
// tree. All three sources reparse by construction.
struct AugmentedView {
    std::string source;
    Ast ast;
};

struct AugmentedTriple {
    AugmentedView strong;
    AugmentedView medium;
    AugmentedView weak;
};

// Strong: split every rewritable variable declaration (state variables and
// block-level locals) into k sub-declarations of the same type. The first
// sub-variable keeps the original initializer and takes over every use site;
// the rest are decoys initialized to the type's default literal. Opaque raw
// nodes, parameters, and for-loop init declarations are never rewritten.
Ast augment_strong(const Ast& ast, const AugmentationConfig& cfg, Rng& rng);

// Medium: replace every function body with a single return of a
// type-appropriate default (true / 0 / "" / address(0)); functions without a
// return type get an empty body. Signatures and modifiers are untouched.
Ast augment_medium(const Ast& ast);

// Weak: rename every declared variable and parameter name with a fresh
// injective map; all uses follow. Function names and external names survive,
// and fresh names never collide with them.
Ast augment_weak(const Ast& ast, const AugmentationConfig& cfg, Rng& rng);

// Parses the source once and applies all three augmentations independently.
// Per-view RNG streams derive from cfg.seed plus a view tag, so the strong
// and weak draws are decorrelated but reproducible.
AugmentedTriple make_views(const std::string& source, const AugmentationConfig& cfg);

}  // namespace ponzi
